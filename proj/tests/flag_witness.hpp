#pragma once

// Direct search for the smallest flag dimension N_s at which a weight b splits
// as expand(a_s) + u, u a weight of degree-p forms on F_s, a_s strictly
// decreasing with last entry >= 0 and the gap condition met at p.

#include <algorithm>
#include <functional>
#include <vector>

#include "kspos/omega.hpp"
#include "kspos/vanish.hpp"
#include "kspos/weights.hpp"

namespace oracle {

/// -1 if no flag type with at least two blocks admits such a split.
inline int smallest_flag_dimension(const kspos::Weight& b, int p) {
  using namespace kspos;
  const int r = b.rank();
  int best = -1;
  const int top = *std::max_element(b.begin(), b.end()) + r * r;
  for (const FlagType& s : all_flag_types(r)) {
    const int N = flag_dimension(s);
    if (s.blocks() < 2 || p > N || (best >= 0 && best <= N)) continue;
    const WeightedDecomposition forms = exterior_weights(s, p);
    std::vector<int> a(static_cast<std::size_t>(s.blocks()));
    // fill from the last block up so entries stay strictly decreasing
    std::function<bool(int, int)> fill = [&](int j, int below) {
      if (j < 0) {
        const BlockWeight a_s(a, s);
        return forms.contains(b - expand_block_weight(a_s)) && check_block_gap_condition(a_s, p).ok;
      }
      for (int v = below; v <= top; ++v) {
        a[static_cast<std::size_t>(j)] = v;
        if (fill(j - 1, v + 1)) return true;
      }
      return false;
    };
    if (fill(s.blocks() - 1, 0)) best = N;
  }
  return best;
}

}  // namespace oracle
