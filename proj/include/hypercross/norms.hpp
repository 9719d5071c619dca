#pragma once

#include <string>

#include "hypercross/block_function.hpp"
#include "hypercross/kernels.hpp"

namespace hypercross {

enum class NormEngine { automatic, single_block, parseval, moment4, tensor };

const char* to_string(NormEngine e) noexcept;

struct LqNorm {
  double value = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  NormEngine engine = NormEngine::automatic;
  double width() const noexcept { return upper - lower; }
};

/// Shared LevelNorms per (p, grid); base levels are integrated once per process.
const LevelNorms& level_norms(double p, const QuadratureGrid& grid = {});

/// ||f||_{L_q(R^d)}.
///  - single block: |c| times the block kernel norm (dilation law, certified base levels);
///  - q = 2: Parseval, sum_s c_s^2 prod_j |band(s_j)|, exact;
///  - q = 4: frequency-side fourth moment, exact up to rounding;
///  - otherwise tensor-grid quadrature with the periodic tail bracket (d <= 3, levels <= 20).
/// Throws AccuracyError when the bracket is wider than grid.rel_tol of the value.
LqNorm lq_norm(const BlockFunction& f, double q, const QuadratureGrid& grid = {},
               NormEngine engine = NormEngine::automatic);

/// ||(sum_s |delta_s f|^2)^{1/2}||_{L_p}: p = 2 and p = 4 exactly, otherwise tensor quadrature.
LqNorm square_function_norm(const BlockFunction& f, double p, const QuadratureGrid& grid = {});

/// sum_s c_s^2 prod_j |band(s_j)| = ||f||_2^2.
double parseval_l2_squared(const BlockFunction& f);

}  // namespace hypercross
