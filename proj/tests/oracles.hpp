// Test-only oracles, independent of the library's computation paths.

#ifndef GTORIC_TESTS_ORACLES_HPP
#define GTORIC_TESTS_ORACLES_HPP

#include <algorithm>
#include <set>
#include <vector>

#include "gtoric/lattice.hpp"

namespace oracles {

using gtoric::Int;
using gtoric::IntMat;
using gtoric::IntVec;
using gtoric::operator+;
using gtoric::operator-;
using gtoric::operator*;

// gcd of all k x k minors; product of the first k invariant factors must
// equal it for any integer matrix.
inline Int minor_gcd(const IntMat& m, int k) {
  std::vector<int> rows(k), cols(k);
  Int g = 0;

  std::vector<int> rsel, csel;
  std::function<void(int, int)> pick_cols = [&](int start, int need) {
    if (need == 0) {
      IntMat sub(k, k);
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) sub.at(i, j) = m.at(rsel[i], csel[j]);
      g = gtoric::gcd(g, gtoric::det(sub));
      return;
    }
    for (int c = start; c + need <= m.cols; ++c) {
      csel.push_back(c);
      pick_cols(c + 1, need - 1);
      csel.pop_back();
    }
  };
  std::function<void(int, int)> pick_rows = [&](int start, int need) {
    if (need == 0) {
      pick_cols(0, k);
      return;
    }
    for (int r = start; r + need <= m.rows; ++r) {
      rsel.push_back(r);
      pick_rows(r + 1, need - 1);
      rsel.pop_back();
    }
  };
  pick_rows(0, k);
  return g;
}

// All integer points of the box [-b, b]^n.
inline std::vector<IntVec> box_points(int n, long b) {
  std::vector<IntVec> pts;
  IntVec cur(n, Int(0));
  std::function<void(int)> rec = [&](int i) {
    if (i == n) {
      pts.push_back(cur);
      return;
    }
    for (long v = -b; v <= b; ++v) {
      cur[i] = v;
      rec(i + 1);
    }
  };
  rec(0);
  return pts;
}

// All points reachable from 0 by adding generators while staying inside
// the region |coord| <= region_bound. Breadth-first closure, independent
// from the library's membership solver. Region slack makes false
// negatives (a generation path escaping the region) a test failure we
// would see, never a silent pass.
inline std::set<IntVec, gtoric::IntVecLess> reachable_set(const std::vector<IntVec>& gens,
                                                          long region_bound) {
  std::set<IntVec, gtoric::IntVecLess> seen;
  std::vector<IntVec> queue;
  IntVec zero;
  if (!gens.empty()) zero.assign(gens[0].size(), Int(0));
  seen.insert(zero);
  queue.push_back(zero);
  while (!queue.empty()) {
    IntVec p = std::move(queue.back());
    queue.pop_back();
    for (const IntVec& g : gens) {
      IntVec q = p + g;
      bool inside = true;
      for (const Int& c : q)
        if (abs(c) > region_bound) {
          inside = false;
          break;
        }
      if (inside && seen.insert(q).second) queue.push_back(q);
    }
  }
  return seen;
}

}  // namespace oracles

#endif
