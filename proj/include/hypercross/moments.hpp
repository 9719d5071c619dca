#pragma once

#include <memory>
#include <vector>

#include "hypercross/block_function.hpp"

namespace hypercross {

// Exact fourth-power integrals of block functions, computed on the frequency side.
//
// With the unitary transform, the transform of a level-a kernel is the indicator chi_a of its
// band, and for real f
//   int |f|^4 dx = (2 pi)^{-d} int |(F f * F f)(lambda)|^2 dlambda.
// Block functions are sums of tensor products, so the integral reduces to per-axis moments
//   M(a,b,c,e) = (1/2pi) int (chi_a * chi_b)(lambda) (chi_c * chi_e)(lambda) dlambda.
// Each convolution of two band indicators is a sum of trapezoids, so the integrand is
// piecewise quadratic and Simpson's rule on its breakpoints is exact.

/// One per-axis moment M(a,b,c,e).
double moment4(int a, int b, int c, int e);

/// Dense table of M(a,b,c,e) for all levels 0..max_level.
class MomentTable {
 public:
  explicit MomentTable(int max_level, bool parallel = true);
  int max_level() const noexcept { return n_ - 1; }
  double operator()(int a, int b, int c, int e) const {
    return v_[((static_cast<std::size_t>(a) * n_ + b) * n_ + c) * n_ + e];
  }

 private:
  int n_;
  std::vector<double> v_;
};

/// Largest level accepted by the shared moment table.
inline constexpr int kMomentMaxLevel = 48;

/// Process-wide table covering at least 0..max_level, built on first use and grown on demand.
std::shared_ptr<const MomentTable> shared_moment_table(int max_level);

/// int |f|^4 dx. d <= 2 uses a Kronecker-structured contraction (OpenMP over columns);
/// larger d falls back to the quadruple block sum.
double l4_power(const BlockFunction& f, bool parallel = true);

/// Serial reference: the quadruple sum over blocks
///   sum_{s,s',u,u'} c_s c_s' c_u c_u' prod_j M(s_j, s'_j, u_j, u'_j).
double l4_power_reference(const BlockFunction& f);

/// int (sum_s |c_s block_kernel(s,x)|^2)^2 dx
///   = sum_{s,s'} c_s^2 c_s'^2 prod_j M(s_j, s_j, s'_j, s'_j).
double square_function_l4_power(const BlockFunction& f, bool parallel = true);

}  // namespace hypercross
