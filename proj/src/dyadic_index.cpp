#include "hypercross/dyadic_index.hpp"

#include <algorithm>
#include <numeric>

#include "hypercross/error.hpp"

namespace hypercross {

DyadicIndex::DyadicIndex(std::vector<int> coords) : s_(std::move(coords)) {
  for (int v : s_)
    if (v < 0) throw DomainError("dyadic index coordinates must be nonnegative");
}

DyadicIndex::DyadicIndex(std::initializer_list<int> coords) : DyadicIndex(std::vector<int>(coords)) {}

DyadicIndex DyadicIndex::axis(int d, int j, int value) {
  std::vector<int> s(static_cast<std::size_t>(d), 0);
  s.at(static_cast<std::size_t>(j)) = value;
  return DyadicIndex(std::move(s));
}

int DyadicIndex::norm1() const noexcept { return std::accumulate(s_.begin(), s_.end(), 0); }

int DyadicIndex::max_coord() const noexcept {
  return s_.empty() ? 0 : *std::max_element(s_.begin(), s_.end());
}

std::string DyadicIndex::str() const {
  std::string out = "(";
  for (std::size_t j = 0; j < s_.size(); ++j) {
    if (j) out += ",";
    out += std::to_string(s_[j]);
  }
  return out + ")";
}

}  // namespace hypercross
