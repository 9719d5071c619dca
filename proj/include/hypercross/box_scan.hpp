#pragma once

#include <algorithm>
#include <span>
#include <vector>

#include "hypercross/dyadic_index.hpp"

namespace hypercross {

// Exhaustive scans of an integer box [0,upper_0] x ... x [0,upper_{d-1}] keeping the points
// accepted by a predicate. Both variants return the points in lexicographic order.

template <class Pred>
std::vector<DyadicIndex> box_scan_serial(std::span<const int> upper, const Pred& keep) {
  std::vector<DyadicIndex> out;
  for_each_in_box(upper, [&](std::span<const int> s) {
    if (keep(s)) out.emplace_back(std::vector<int>(s.begin(), s.end()));
  });
  return out;
}

/// OpenMP variant: one slab per value of the first coordinate, concatenated in slab order.
template <class Pred>
std::vector<DyadicIndex> box_scan_parallel(std::span<const int> upper, const Pred& keep) {
  if (upper.empty() || upper[0] < 0) return {};
  const int slabs = upper[0] + 1;
  std::vector<std::vector<DyadicIndex>> per_slab(static_cast<std::size_t>(slabs));
  const std::vector<int> rest(upper.begin() + 1, upper.end());
#pragma omp parallel for schedule(dynamic, 1)
  for (int first = 0; first < slabs; ++first) {
    auto& bucket = per_slab[static_cast<std::size_t>(first)];
    std::vector<int> full(upper.size());
    full[0] = first;
    if (rest.empty()) {
      if (keep(std::span<const int>(full))) bucket.emplace_back(full);
      continue;
    }
    for_each_in_box(rest, [&](std::span<const int> tail) {
      std::copy(tail.begin(), tail.end(), full.begin() + 1);
      if (keep(std::span<const int>(full))) bucket.emplace_back(full);
    });
  }
  std::vector<DyadicIndex> out;
  for (auto& bucket : per_slab)
    for (auto& s : bucket) out.push_back(std::move(s));
  return out;
}

}  // namespace hypercross
