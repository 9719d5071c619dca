#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hypercross/block_function.hpp"
#include "hypercross/function_model.hpp"
#include "hypercross/lattice.hpp"
#include "hypercross/norms.hpp"

namespace hypercross {

/// S_{Q(L)} f: the blocks of f whose index lies in L.
BlockFunction partial_sum(const BlockFunction& f, std::span<const DyadicIndex> L);
/// f - S_{Q(N)} f: the blocks of f in kappa-perp(N).
BlockFunction residual(const BlockFunction& f, const LevelSetEnumerator& sets, double N);

struct ApproxError {
  double value = 0.0;    // ||f - S_{Q(N)} f||_q
  double width = 0.0;    // certificate width of value
  double e_lower = 0.0;  // value / c_lp: lower edge of the best-approximation bracket
  double e_upper = 0.0;  // value
  NormEngine engine = NormEngine::automatic;
};

/// Partial-sum error and the empirical bracket [value / c_lp, value] for the best approximation.
ApproxError approx_error(const BlockFunction& f, const LevelSetEnumerator& sets, double N, double q,
                         const QuadratureGrid& grid = {}, double c_lp = 1.0);

/// (sum_{s in kappa-perp(N)} (|c_s| ||block_kernel(s)||_p)^q 2^{|s|_1 (1/p - 1/q) q})^{1/q}.
double lemmaV_upper(const BlockFunction& f, const LevelSetEnumerator& sets, double N, double p, double q,
                    const QuadratureGrid& grid = {});

/// int over the cell 2^{-level-1} <= x < 2^{-level} of |block_kernel(level, x)|^q.
double cell_integral(int level, double q);

/// (sum_{s in cells} int_{Delta(s)} |c_s block_kernel(s,x)|^q dx)^{1/q}, Delta(s) the dyadic box
/// 2^{-s_j-1} <= x_j < 2^{-s_j}.
double cell_lower_bound(const BlockFunction& f, std::span<const DyadicIndex> cells, double q);
double cell_lower_bound(const BlockFunction& f, const LevelSetEnumerator& sets, double N, double q);

/// ||(sum_s |delta_s f|^2)^{1/2}||_p / ||f||_p.
double littlewood_paley_ratio(const BlockFunction& f, double p, const QuadratureGrid& grid = {});

struct CorpusRange {
  double lower = 0.0;  // min ratio
  double upper = 0.0;  // max ratio
  double K = 1.0;      // smallest K with all ratios in [1/K, K]
  std::vector<double> ratios;
};

CorpusRange littlewood_paley_corpus(std::span<const BlockFunction> corpus, double p, const QuadratureGrid& grid = {});

/// Seeded random block function: every s with |s|_1 <= max_norm1 enters with probability 1/2
/// (at least two blocks) with a coefficient uniform on [-1, 1].
BlockFunction random_block_function(int d, int max_norm1, std::uint64_t seed);
std::vector<BlockFunction> random_corpus(int d, int max_norm1, int count, std::uint64_t seed);

/// Empirical constant for the best-approximation bracket: max/min Littlewood-Paley ratio over a
/// seeded 20-function corpus in dimension d (1 for q = 2).
double lp_bracket_constant(double q, int d, std::uint64_t seed = 7, const QuadratureGrid& grid = {});

/// Seeded random class member: c_s = u_s Omega(2^{-s}) 2^{-|s|_1 (1-1/p)}, u_s uniform on [-1,1],
/// over |s|_1 <= depth (default: the largest |s|_1 in Theta(2^l N)), normalized to unit
/// decomposition norm. The stream is seeded from (seed, N).
Witness random_class_member(const Majorant& omega, const SmoothnessParams& params, double N, std::uint64_t seed,
                            int depth = -1, const QuadratureGrid& grid = {});

/// Uniform on [-1, 1) from a 64-bit generator, identical on every platform.
double uniform_pm1(std::uint64_t bits) noexcept;
std::uint64_t row_seed(std::uint64_t seed, double N) noexcept;

enum class WitnessKind { f1, f2, f3, random };
WitnessKind parse_witness(const std::string& name);
const char* to_string(WitnessKind w) noexcept;

struct RateConfig {
  Majorant omega = Majorant::power(1, {0.6});
  SmoothnessParams params{};
  std::vector<int> N_exponents{4, 5, 6, 7, 8, 9, 10};
  WitnessKind witness = WitnessKind::f1;
  std::uint64_t seed = 1;
  QuadratureGrid grid{};
  int depth = -1;
};

struct RateRow {
  double N = 0.0;
  bool ok = true;
  std::string failure;
  double error = 0.0;
  double cert_width = 0.0;
  double norm_ratio = 0.0;
  double lemmaV_upper = 0.0;
  double normalization = 0.0;
  double e_lower = 0.0;
  std::size_t blocks = 0;
};

struct RateTable {
  std::vector<RateRow> rows;
  double log_exponent = 0.0;  // (d-1)(1/q - 1/theta)_+
  double c_lp = 1.0;
  double ratio_min = 0.0;
  double ratio_max = 0.0;
  double slope = 0.0;  // least-squares slope of log error against log N
  int failures = 0;
  bool sweep_failed() const noexcept { return 2 * failures > static_cast<int>(rows.size()); }
};

/// (d-1)(1/q - 1/theta)_+.
double rate_log_exponent(const SmoothnessParams& params);
/// error * N / (log2 N)^{rate_log_exponent}.
double normalized_ratio(double error, double N, const SmoothnessParams& params);

/// One row per N = 2^k in ascending order; a failing row is recorded and the sweep continues.
RateTable rate_experiment(const RateConfig& config);

}  // namespace hypercross
