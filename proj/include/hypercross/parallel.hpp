#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace hypercross {

/// Number of OpenMP threads used by the parallel kernels.
int num_threads();
/// Sets the OpenMP thread count; values < 1 leave the runtime default untouched.
void set_num_threads(int n);

/// Sums partial results in ascending index order. Parallel kernels write one partial per
/// panel/slab and reduce through this, so results do not depend on the thread count.
inline double ordered_sum(std::span<const double> partials) {
  double acc = 0.0;
  for (double v : partials) acc += v;
  return acc;
}

}  // namespace hypercross
