#pragma once

#include <span>
#include <vector>

#include "hypercross/dyadic_index.hpp"
#include "hypercross/quadrature.hpp"

namespace hypercross {

/// eta(0) = 0, eta(t) = 1 for t > 0.
constexpr int eta(int t) noexcept { return t > 0 ? 1 : 0; }

/// D_k(x) = sqrt(2/pi) * 2 sin(x/2) cos((2k+1)x/2) / x, with D_k(0) = sqrt(2/pi).
/// Its Fourier transform is the indicator of k < |lambda| < k+1.
double dirichlet_kernel_1d(int k, double x);

/// One-dimensional block kernel of a dyadic level:
///   sqrt(2/pi) (sin(2^s x) - sin(eta(s) 2^{s-1} x)) / x,
/// the sum of D_k over eta(s) 2^{s-1} <= k < 2^s; its transform is the indicator of the band.
double level_kernel(int level, double x);
/// x * level_kernel(level, x); periodic with period level_period(level).
double level_kernel_numerator(int level, double x);
double level_period(int level);
/// Lebesgue measure of the one-dimensional band {eta(s) 2^{s-1} <= |lambda| < 2^s}.
double band_measure(int level);

/// Integer vectors k with eta(s_j) 2^{s_j-1} <= k_j < 2^{s_j}, in lexicographic order.
std::vector<std::vector<int>> rho_plus(const DyadicIndex& s);

/// prod_j level_kernel(s_j, x_j).
double block_kernel(const DyadicIndex& s, std::span<const double> x);

/// Settings of the one-dimensional composite midpoint quadrature. Zero means "automatic":
/// T is grown (in whole periods of the integrand) until the certified tail bracket is below
/// rel_tol, and points_per_unit defaults to 8 * 2^{max level}.
struct QuadratureGrid {
  double T = 0.0;
  int points_per_unit = 0;
  double rel_tol = 1e-4;
};

/// A norm value with a certified bracket [lower, upper] (midpoint-rule error excluded).
struct NormEstimate {
  double value = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  double T = 0.0;
  int points_per_unit = 0;
  double width() const noexcept { return upper - lower; }
};

/// ||level_kernel(level, .)||_{L_p(R)} by direct quadrature on [-T, T] with the periodic tail
/// bracket. Throws ResolutionError when points_per_unit < 4 * 2^level and AccuracyError when an
/// explicit T cannot meet rel_tol.
NormEstimate level_lp_norm(int level, double p, const QuadratureGrid& grid, bool parallel = true);

/// L_p(R^d) norm of the block kernel of s, as the product of its one-dimensional factors.
NormEstimate block_kernel_lp_norm(const DyadicIndex& s, double p, const QuadratureGrid& grid);

/// Block norms through the dilation law: for s >= 1 the one-dimensional kernel of level s is
/// 2^{s-1} K(2^{s-1} x) with K the level-1 kernel, so its L_p norm is 2^{(s-1)(1-1/p)} times the
/// level-1 norm. Only levels 0 and 1 are integrated numerically.
class LevelNorms {
 public:
  LevelNorms(double p, const QuadratureGrid& grid = {});

  double p() const noexcept { return p_; }
  double level(int s) const;
  double block(const DyadicIndex& s) const;
  const NormEstimate& base(int level01) const { return base_[level01 == 0 ? 0 : 1]; }

 private:
  double p_;
  NormEstimate base_[2];
};

}  // namespace hypercross
