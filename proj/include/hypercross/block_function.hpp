#pragma once

#include <map>
#include <span>
#include <vector>

#include "hypercross/dyadic_index.hpp"

namespace hypercross {

/// f(x) = sum_s c_s * block_kernel(s, x) over a finite set of dyadic indices.
/// The Fourier transform of f is sum_s c_s * indicator(Q*(s)), so every projection onto a
/// dyadic block is exact.
class BlockFunction {
 public:
  using Coeffs = std::map<DyadicIndex, double>;

  explicit BlockFunction(int d = 1);
  BlockFunction(int d, Coeffs coeffs);

  int dim() const noexcept { return d_; }
  const Coeffs& coeffs() const noexcept { return coeffs_; }
  bool empty() const noexcept { return coeffs_.empty(); }
  std::size_t size() const noexcept { return coeffs_.size(); }

  /// c_s, zero when s is not in the support.
  double coeff(const DyadicIndex& s) const;
  /// Sets c_s; a zero coefficient removes s from the support.
  void set(const DyadicIndex& s, double c);
  /// Largest level over all axes and blocks (0 for f = 0).
  int max_level() const noexcept;

  double operator()(std::span<const double> x) const;

  BlockFunction scaled(double a) const;

 private:
  int d_;
  Coeffs coeffs_;
};

/// The set of distinct levels used along each axis, with the slot of every level.
struct AxisLevels {
  std::vector<std::vector<int>> levels;  // per axis, ascending
  int slot(int axis, int level) const;
};

AxisLevels axis_levels(const BlockFunction& f);

}  // namespace hypercross
