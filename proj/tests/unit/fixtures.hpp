#pragma once

#include <vector>

#include "rlab/graph.hpp"

namespace fixtures {

inline rlab::RegularGraph k4() {
  const std::vector<rlab::Edge> e{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
  return rlab::build_graph(3, 4, e);
}

// Outer 5-cycle 0..4, spokes i -- i+5, inner pentagram on 5..9.
inline rlab::RegularGraph petersen() {
  std::vector<rlab::Edge> e;
  for (int i = 0; i < 5; ++i) {
    e.push_back(rlab::Edge::of(i, (i + 1) % 5));
    e.push_back(rlab::Edge::of(i, i + 5));
    e.push_back(rlab::Edge::of(5 + i, 5 + (i + 2) % 5));
  }
  return rlab::build_graph(3, 10, e);
}

// 3-cube: vertices are 3-bit words, edges flip one bit.
inline rlab::RegularGraph cube() {
  std::vector<rlab::Edge> e;
  for (int v = 0; v < 8; ++v)
    for (int b = 0; b < 3; ++b)
      if (v < (v ^ (1 << b))) e.push_back({v, v ^ (1 << b)});
  return rlab::build_graph(3, 8, e);
}

// Cycle C_n with all "antipodal" chords i -- i+n/2 (the Moebius ladder).
inline rlab::RegularGraph moebius_ladder(int n) {
  std::vector<rlab::Edge> e;
  for (int i = 0; i < n; ++i) e.push_back(rlab::Edge::of(i, (i + 1) % n));
  for (int i = 0; i < n / 2; ++i) e.push_back({i, i + n / 2});
  return rlab::build_graph(3, n, e);
}

}  // namespace fixtures
