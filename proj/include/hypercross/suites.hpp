#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hypercross/kernels.hpp"

namespace hypercross {

struct SuiteCheck {
  std::string name;
  bool pass = false;
  double value = 0.0;  // the measured quantity
  double bound = 0.0;  // the declared bound it is compared with
  std::string detail;
};

struct SuiteReport {
  std::string suite;
  std::vector<SuiteCheck> checks;
  bool pass() const noexcept;
};

/// dk, lp, lemmaA, lemmaB, thmA, thm1.
const std::vector<std::string>& suite_names();

/// Desk-scale property suite; ConfigurationError for an unknown name.
SuiteReport run_suite(const std::string& name, std::uint64_t seed = 1, const QuadratureGrid& grid = {});

}  // namespace hypercross
