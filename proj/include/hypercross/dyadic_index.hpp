#pragma once

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace hypercross {

/// A point s of Z_+^d labelling the dyadic frequency block Q*(s).
class DyadicIndex {
 public:
  DyadicIndex() = default;
  explicit DyadicIndex(std::vector<int> coords);
  DyadicIndex(std::initializer_list<int> coords);

  static DyadicIndex zero(int d) { return DyadicIndex(std::vector<int>(static_cast<std::size_t>(d), 0)); }
  static DyadicIndex axis(int d, int j, int value);

  int dim() const noexcept { return static_cast<int>(s_.size()); }
  int operator[](std::size_t j) const { return s_[j]; }
  std::span<const int> coords() const noexcept { return s_; }
  int norm1() const noexcept;
  int max_coord() const noexcept;

  std::string str() const;

  auto operator<=>(const DyadicIndex&) const = default;
  bool operator==(const DyadicIndex&) const = default;

 private:
  std::vector<int> s_;
};

/// Calls visit(coords) for every integer point of the box [0, upper_0] x ... x [0, upper_{d-1}]
/// in lexicographic order.
template <class Visit>
void for_each_in_box(std::span<const int> upper, Visit&& visit) {
  const std::size_t d = upper.size();
  if (d == 0) return;
  for (int u : upper)
    if (u < 0) return;
  std::vector<int> s(d, 0);
  while (true) {
    visit(std::span<const int>(s));
    std::size_t j = d;
    while (j > 0) {
      --j;
      if (s[j] < upper[j]) {
        ++s[j];
        break;
      }
      s[j] = 0;
      if (j == 0) return;
    }
  }
}

}  // namespace hypercross
