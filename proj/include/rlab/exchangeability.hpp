#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "rlab/error.hpp"
#include "rlab/graph.hpp"
#include "rlab/parallel.hpp"
#include "rlab/resampling.hpp"
#include "rlab/sampler.hpp"

namespace rlab {

enum class KernelVariant {
  faithful,
  // Mutation: ignore the indicators and perform every switch that is still
  // simple when its turn comes.
  skip_admissibility,
};

namespace detail {

/// Resampling step with the chosen kernel. Returns the new graph.
inline RegularGraph resample_once(const RegularGraph& g, Vertex o, int ell, int R, Rng& rng, KernelVariant v) {
  const ResamplingData s = propose_resampling(g, o, ell, rng);
  if (v == KernelVariant::faithful) return apply_resampling(g, s, admissible_set(g, s, R));
  MutableAdjacency adj(g);
  for (int a = 0; a < s.mu(); ++a) {
    try {
      apply_switch_in_place(adj, switch_of(s, a), Errc::bad_params);
    } catch (const Error&) {
    }
  }
  return std::move(adj).freeze();
}

// Rooted isomorphism-invariant signature of a small graph (n <= 16):
// triangle and 4-cycle counts globally and at the root, plus
// connectivity. Any function of the state maps an exchangeable pair to an
// exchangeable pair, so the symmetry test can run on these classes.
inline std::uint64_t signature(const RegularGraph& g, Vertex root) {
  const int n = g.vertex_count();
  std::vector<std::uint32_t> nb(static_cast<std::size_t>(n), 0);
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v : g.neighbors(u)) nb[u] |= 1u << v;
  std::uint64_t tri = 0, tri_root = 0, sq = 0, sq_root = 0;
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v) {
      const int common = std::popcount(nb[u] & nb[v]);
      const std::uint64_t pairs = static_cast<std::uint64_t>(common) * (common - 1) / 2;
      sq += pairs;  // each 4-cycle is counted from both diagonals
      if (u == root || v == root) sq_root += pairs;
      if (nb[u] >> v & 1u) {
        tri += static_cast<std::uint64_t>(common);  // each triangle from its 3 edges
        if (u == root || v == root) tri_root += static_cast<std::uint64_t>(common);
      }
    }
  std::uint32_t seen = 1u, frontier = 1u;
  while (frontier) {
    std::uint32_t next = 0;
    for (std::uint32_t f = frontier; f; f &= f - 1) next |= nb[std::countr_zero(f)];
    frontier = next & ~seen;
    seen |= next;
  }
  const bool connected = std::popcount(seen) == n;
  return (tri / 3) | (tri_root / 2) << 12 | (sq / 2) << 24 | sq_root << 40 |
         static_cast<std::uint64_t>(connected) << 60;
}

}  // namespace detail

struct ReversibilityReport {
  std::int64_t trials = 0;
  std::int64_t moves = 0;       // trials with T_S(G) != G
  std::int64_t pair_classes = 0;
  double max_asymmetry = 0;     // |K(a,b) - K(b,a)| for the most asymmetric tested pair
  double sem = 0;               // its standard error
  double max_z = 0;
  bool pass = true;
};

/// Monte Carlo symmetry test of the resampling kernel at the uniform law:
/// G is drawn by the pairing model, the center is vertex 0, and transition
/// counts between signature classes are compared in both directions for the
/// `top` most visited unordered pairs. Passes iff every |z| <= 4.
inline ReversibilityReport reversibility_estimate(int d, int n, int ell, int R, std::int64_t trials,
                                                  std::uint64_t seed,
                                                  KernelVariant variant = KernelVariant::faithful, int jobs = 1,
                                                  int top = 50) {
  require(n <= 16, Errc::bad_params, "reversibility test needs n <= 16");
  require(trials >= 1 && ell >= 0 && R >= 0, Errc::bad_params, "bad reversibility parameters");
  SamplerConfig cfg;
  cfg.method = SamplerMethod::pairing_rejection;
  cfg.max_rejections = 1000000;
  using Counts = std::map<std::pair<std::uint64_t, std::uint64_t>, std::int64_t>;
  constexpr std::int64_t kChunk = 10000;
  const int chunks = static_cast<int>((trials + kChunk - 1) / kChunk);
  auto partial = run_trials<Counts>(chunks, seed, jobs, [&](int c, std::uint64_t chunk_seed) {
    Counts counts;
    Rng rng(chunk_seed);
    const std::int64_t begin = c * kChunk, end = std::min(trials, begin + kChunk);
    for (std::int64_t k = begin; k < end; ++k) {
      const RegularGraph g = sample_regular(d, n, cfg, rng.next());
      const RegularGraph g2 = detail::resample_once(g, 0, ell, R, rng, variant);
      if (g2 == g) continue;
      ++counts[{detail::signature(g, 0), detail::signature(g2, 0)}];
    }
    return counts;
  });
  Counts total;
  for (const auto& p : partial)
    for (const auto& [key, c] : p) total[key] += c;

  ReversibilityReport rep;
  rep.trials = trials;
  auto count = [&](std::uint64_t x, std::uint64_t y) -> std::int64_t {
    const auto it = total.find({x, y});
    return it == total.end() ? 0 : it->second;
  };
  std::map<std::pair<std::uint64_t, std::uint64_t>, std::int64_t> unordered;
  for (const auto& [key, c] : total) {
    rep.moves += c;
    if (key.first != key.second) unordered[std::minmax(key.first, key.second)] += c;
  }
  rep.pair_classes = static_cast<std::int64_t>(unordered.size());
  std::vector<std::pair<std::int64_t, std::pair<std::uint64_t, std::uint64_t>>> ranked;
  for (const auto& [key, c] : unordered) ranked.push_back({c, key});
  std::sort(ranked.begin(), ranked.end(), [](const auto& x, const auto& y) {
    return x.first != y.first ? x.first > y.first : x.second < y.second;
  });
  if (ranked.size() > static_cast<std::size_t>(top)) ranked.resize(static_cast<std::size_t>(top));
  for (const auto& [sum, key] : ranked) {
    const std::int64_t fwd = count(key.first, key.second), bwd = count(key.second, key.first);
    const double z = std::abs(static_cast<double>(fwd - bwd)) / std::sqrt(static_cast<double>(sum));
    if (z > rep.max_z) {
      rep.max_z = z;
      rep.max_asymmetry = std::abs(static_cast<double>(fwd - bwd)) / static_cast<double>(trials);
      rep.sem = std::sqrt(static_cast<double>(sum)) / static_cast<double>(trials);
    }
  }
  rep.pass = rep.max_z <= 4.0;
  return rep;
}

}  // namespace rlab
