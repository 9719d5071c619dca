#include "hypercross/block_function.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "hypercross/error.hpp"
#include "hypercross/kernels.hpp"

namespace hypercross {

BlockFunction::BlockFunction(int d) : d_(d) {
  if (d < 1) throw DomainError("BlockFunction dimension must be >= 1");
}

BlockFunction::BlockFunction(int d, Coeffs coeffs) : BlockFunction(d) {
  for (auto& [s, c] : coeffs) set(s, c);
}

double BlockFunction::coeff(const DyadicIndex& s) const {
  auto it = coeffs_.find(s);
  return it == coeffs_.end() ? 0.0 : it->second;
}

void BlockFunction::set(const DyadicIndex& s, double c) {
  if (s.dim() != d_) throw DomainError("block index " + s.str() + " has the wrong dimension");
  if (!std::isfinite(c)) throw DomainError("block coefficient must be finite");
  if (c == 0.0)
    coeffs_.erase(s);
  else
    coeffs_[s] = c;
}

int BlockFunction::max_level() const noexcept {
  int m = 0;
  for (const auto& [s, c] : coeffs_) m = std::max(m, s.max_coord());
  return m;
}

double BlockFunction::operator()(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != d_) throw DomainError("evaluation point has the wrong dimension");
  double acc = 0.0;
  for (const auto& [s, c] : coeffs_) acc += c * block_kernel(s, x);
  return acc;
}

BlockFunction BlockFunction::scaled(double a) const {
  BlockFunction out(d_);
  for (const auto& [s, c] : coeffs_) out.set(s, a * c);
  return out;
}

int AxisLevels::slot(int axis, int level) const {
  const auto& v = levels[static_cast<std::size_t>(axis)];
  auto it = std::lower_bound(v.begin(), v.end(), level);
  if (it == v.end() || *it != level) throw DomainError("level not present on axis");
  return static_cast<int>(it - v.begin());
}

AxisLevels axis_levels(const BlockFunction& f) {
  std::vector<std::set<int>> per(static_cast<std::size_t>(f.dim()));
  for (const auto& [s, c] : f.coeffs())
    for (int j = 0; j < f.dim(); ++j) per[j].insert(s[j]);
  AxisLevels out;
  for (auto& set : per) out.levels.emplace_back(set.begin(), set.end());
  return out;
}

}  // namespace hypercross
