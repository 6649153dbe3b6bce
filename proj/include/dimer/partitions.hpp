#pragma once

#include <functional>
#include <vector>

#include "dimer/rational.hpp"

namespace dimer {

/// Enumerates all set partitions of {0..m-1} in restricted-growth-string
/// order. `visit` receives the block index of each element plus the block
/// count. Deterministic order.
inline void for_each_set_partition(int m,
                                   const std::function<void(const std::vector<int>&, int)>& visit) {
  std::vector<int> rgs(m, 0);
  std::function<void(int, int)> rec = [&](int pos, int max_used) {
    if (pos == m) {
      visit(rgs, max_used + 1);
      return;
    }
    for (int b = 0; b <= max_used + 1; ++b) {
      rgs[pos] = b;
      rec(pos + 1, std::max(max_used, b));
    }
  };
  if (m == 0) {
    visit(rgs, 0);
    return;
  }
  rgs[0] = 0;
  rec(1, 0);
}

/// Moebius factor of a partition of the partition lattice against the
/// discrete partition: prod over blocks of (-1)^{|B|-1} (|B|-1)!.
inline long long partition_mobius(const std::vector<int>& block_sizes) {
  long long mu = 1;
  for (int s : block_sizes) {
    for (int k = 2; k < s + 1; ++k) mu *= -(k - 1);
  }
  return mu;
}

/// All compositions of `total` into exactly `parts` positive integers.
inline std::vector<std::vector<int>> positive_compositions(int total, int parts) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(parts, 0);
  std::function<void(int, int)> rec = [&](int idx, int left) {
    if (idx == parts - 1) {
      if (left >= 1) {
        cur[idx] = left;
        out.push_back(cur);
      }
      return;
    }
    for (int k = 1; k <= left - (parts - 1 - idx); ++k) {
      cur[idx] = k;
      rec(idx + 1, left - k);
    }
  };
  if (parts >= 1 && total >= parts) rec(0, total);
  return out;
}

}  // namespace dimer
