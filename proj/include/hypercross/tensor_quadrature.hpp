#pragma once

#include <span>

#include "hypercross/block_function.hpp"

namespace hypercross {

// Tensor-grid quadrature of |f|^q and of the square function for block functions in d <= 3.
//
// Every level kernel is g(x) = P(x)/x with P periodic of period 2pi (all level periods divide
// 2pi), and every block function is a sum of tensor products of such kernels. On the orthant
// split each axis into [0, K tau) and [K tau, inf) with tau = 2pi. Over a subset O of "far"
// axes the integrand equals |V(x_near, u_far)|^e * prod_{j in O} (k_j tau + u_j)^{-decay} with
// V built from numerators on far axes, so the far part is
//   J_O * prod_{j in O} [tau^{-decay} zeta_lo(K+1), tau^{-decay} zeta_hi(K)]
// with J_O a midpoint sum over [0, K tau)^{near} x [0, tau)^{far}. The near-only term is the
// bulk. The result is a certified bracket up to the midpoint-rule error.

struct TensorQuadratureOptions {
  int points_per_unit = 0;  // 0: 8 * 2^{max level}
  int periods = 0;          // K; 0: doubled from 4 until rel_tol is met
  double rel_tol = 1e-4;    // on the norm
  double max_points = 4e8;  // budget on (K n)^d before giving up
  bool parallel = true;
  bool reference = false;   // naive per-point block loop instead of the blocked contraction
};

struct TensorIntegral {
  double bulk = 0.0;
  double tail_lower = 0.0;
  double tail_upper = 0.0;
  int periods = 0;
  int points_per_unit = 0;
  double lower() const noexcept { return bulk + tail_lower; }
  double upper() const noexcept { return bulk + tail_upper; }
  double mid() const noexcept { return bulk + 0.5 * (tail_lower + tail_upper); }
};

/// int_{R^d} |f|^q dx for fixed K (opts.periods must be > 0).
TensorIntegral tensor_power_integral(const BlockFunction& f, double q, const TensorQuadratureOptions& opts);
/// int_{R^d} (sum_s |c_s block_kernel(s,x)|^2)^{p/2} dx for fixed K.
TensorIntegral tensor_square_function_integral(const BlockFunction& f, double p, const TensorQuadratureOptions& opts);

struct TensorNorm {
  double value = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  int periods = 0;
  int points_per_unit = 0;
};

/// ||f||_q with K chosen automatically (or fixed by opts.periods). Throws AccuracyError when the
/// bracket cannot be brought under rel_tol within max_points.
TensorNorm tensor_lq_norm(const BlockFunction& f, double q, const TensorQuadratureOptions& opts = {});
/// ||(sum_s |delta_s f|^2)^{1/2}||_p, same conventions.
TensorNorm tensor_square_function_norm(const BlockFunction& f, double p, const TensorQuadratureOptions& opts = {});

struct DifferenceNorm {
  double value = 0.0;  // bulk over [-T,T]^d
  double lower = 0.0;
  double upper = 0.0;  // bulk plus a bound on the norm outside the box
  double T = 0.0;
  int points_per_unit = 0;
};

/// ||Delta^l_h f||_q, the difference taken along the axes in e (h indexed by axis), by
/// midpoint quadrature on [-T,T]^d. Outside the box every shifted kernel is bounded by
/// 2 sqrt(2/pi) / (|x| - l h_j), which bounds the missing mass block by block.
DifferenceNorm tensor_difference_norm(const BlockFunction& f, int l, std::span<const double> h,
                                      std::span<const int> e, double q, double T, int points_per_unit,
                                      bool parallel = true);

}  // namespace hypercross
