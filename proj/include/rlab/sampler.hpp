#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "rlab/error.hpp"
#include "rlab/graph.hpp"
#include "rlab/rng.hpp"

namespace rlab {

enum class SamplerMethod { pairing_rejection, switch_chain };

constexpr std::string_view method_name(SamplerMethod m) {
  return m == SamplerMethod::pairing_rejection ? "pairing_rejection" : "switch_chain";
}

inline SamplerMethod parse_method(std::string_view s) {
  if (s == "pairing_rejection" || s == "pairing") return SamplerMethod::pairing_rejection;
  if (s == "switch_chain" || s == "switch") return SamplerMethod::switch_chain;
  fail(Errc::bad_params, "unknown sampler method '" + std::string(s) + "'");
}

struct SamplerConfig {
  SamplerMethod method = SamplerMethod::pairing_rejection;
  int max_rejections = 100000;
  // switch-chain steps = multiplier * n*d*ln(n*d)
  double burn_in_multiplier = 10.0;

  /// Pairing is exactly uniform but its acceptance rate decays like
  /// exp(-(d^2-1)/4), so it is only the default for d <= 5.
  static SamplerConfig defaults_for(int d) {
    SamplerConfig cfg;
    cfg.method = d <= 5 ? SamplerMethod::pairing_rejection : SamplerMethod::switch_chain;
    return cfg;
  }

  void validate() const {
    require(max_rejections >= 1, Errc::bad_params, "max_rejections must be >= 1");
    require(burn_in_multiplier > 0, Errc::bad_params, "burn_in_multiplier must be > 0");
  }
};

struct SamplerStats {
  std::int64_t rejections = 0;
  std::int64_t swaps_proposed = 0;
  std::int64_t swaps_accepted = 0;
};

namespace detail {

inline RegularGraph sample_pairing(int d, int n, int max_rejections, Rng& rng, SamplerStats& stats) {
  const std::size_t points = static_cast<std::size_t>(n) * d;
  std::vector<Vertex> owner(points);
  std::vector<Vertex> adj(points);
  std::vector<int> fill(static_cast<std::size_t>(n));
  std::vector<Edge> edges(points / 2);
  for (;;) {
    for (std::size_t p = 0; p < points; ++p) owner[p] = static_cast<Vertex>(p / d);
    rng.shuffle(owner.begin(), owner.end());
    std::fill(fill.begin(), fill.end(), 0);
    bool simple = true;
    for (std::size_t k = 0; k < points / 2 && simple; ++k) {
      const Vertex u = owner[2 * k];
      const Vertex v = owner[2 * k + 1];
      if (u == v) {
        simple = false;
        break;
      }
      const Vertex* row = adj.data() + static_cast<std::size_t>(u) * d;
      for (int i = 0; i < fill[u]; ++i)
        if (row[i] == v) simple = false;
      if (!simple) break;
      adj[static_cast<std::size_t>(u) * d + fill[u]++] = v;
      adj[static_cast<std::size_t>(v) * d + fill[v]++] = u;
      edges[k] = Edge::of(u, v);
    }
    if (simple) return RegularGraph::from_edges(d, n, edges);
    if (++stats.rejections >= max_rejections)
      fail(Errc::rejection_budget_exceeded,
           "pairing model rejected " + std::to_string(stats.rejections) + " times (d=" + std::to_string(d) +
               ", n=" + std::to_string(n) + ")");
  }
}

/// Deterministic circulant start: offsets 1..floor(d/2), plus the antipodal
/// matching when d is odd.
inline std::vector<Edge> circulant_edges(int d, int n) {
  std::vector<Edge> edges;
  for (int k = 1; k <= d / 2; ++k)
    for (Vertex v = 0; v < n; ++v) edges.push_back(Edge::of(v, static_cast<Vertex>((v + k) % n)));
  if (d % 2 == 1)
    for (Vertex v = 0; v < n / 2; ++v) edges.push_back(Edge::of(v, static_cast<Vertex>(v + n / 2)));
  return edges;
}

inline RegularGraph sample_switch_chain(int d, int n, double multiplier, Rng& rng, SamplerStats& stats) {
  std::vector<Edge> edges = circulant_edges(d, n);
  detail::MutableAdjacency adj(RegularGraph::from_edges(d, n, edges));
  const double nd = static_cast<double>(n) * d;
  const auto steps = static_cast<std::int64_t>(std::ceil(multiplier * nd * std::log(nd)));
  const auto m = static_cast<std::uint64_t>(edges.size());
  for (std::int64_t s = 0; s < steps; ++s) {
    ++stats.swaps_proposed;
    const auto i1 = rng.below(m);
    const auto i2 = rng.below(m);
    const bool flip = (rng.next() >> 63) != 0;
    if (i1 == i2) continue;
    const Vertex u = edges[i1].u, v = edges[i1].v;
    Vertex x = edges[i2].u, y = edges[i2].v;
    if (flip) std::swap(x, y);
    // {u,v},{x,y} -> {u,x},{v,y}
    if (u == x || u == y || v == x || v == y) continue;
    if (adj.has_edge(u, x) || adj.has_edge(v, y)) continue;
    adj.relink(u, v, x);
    adj.relink(v, u, y);
    adj.relink(x, y, u);
    adj.relink(y, x, v);
    edges[i1] = Edge::of(u, x);
    edges[i2] = Edge::of(v, y);
    ++stats.swaps_accepted;
  }
  return std::move(adj).freeze();
}

}  // namespace detail

/// Simple d-regular graph on n vertices. The pairing method is exactly
/// uniform; the switch chain is approximately uniform after its burn-in.
inline RegularGraph sample_regular(int d, int n, const SamplerConfig& cfg, std::uint64_t seed,
                                   SamplerStats* stats = nullptr) {
  cfg.validate();
  require(d >= 3, Errc::bad_params, "d must be at least 3");
  require(n > d, Errc::bad_params, "need n > d");
  require((static_cast<std::int64_t>(n) * d) % 2 == 0, Errc::bad_params, "n*d must be even");
  Rng rng(seed);
  SamplerStats local;
  SamplerStats& st = stats ? *stats : local;
  st = {};
  if (cfg.method == SamplerMethod::pairing_rejection)
    return detail::sample_pairing(d, n, cfg.max_rejections, rng, st);
  return detail::sample_switch_chain(d, n, cfg.burn_in_multiplier, rng, st);
}

/// GOE draw with E<A,M><B,M> = (2/N)<A,B>: off-diagonal variance 1/N,
/// diagonal variance 2/N.
inline Eigen::MatrixXd sample_goe(int n, Rng& rng) {
  require(n >= 1, Errc::bad_params, "GOE dimension must be positive");
  Eigen::MatrixXd m(n, n);
  const double off = std::sqrt(1.0 / n);
  const double diag = std::sqrt(2.0 / n);
  for (int i = 0; i < n; ++i) {
    m(i, i) = diag * rng.normal();
    for (int j = 0; j < i; ++j) m(i, j) = m(j, i) = off * rng.normal();
  }
  return m;
}

inline Eigen::MatrixXd sample_goe(int n, std::uint64_t seed) {
  Rng rng(seed);
  return sample_goe(n, rng);
}

/// GOE projected onto symmetric matrices with vanishing row sums.
struct ConstrainedGoeMatrix {
  Eigen::MatrixXd entries;

  int dimension() const { return static_cast<int>(entries.rows()); }
};

inline ConstrainedGoeMatrix sample_constrained_goe(int n, Rng& rng) {
  require(n >= 2, Errc::bad_params, "constrained GOE needs n >= 2");
  Eigen::MatrixXd m = sample_goe(n, rng);
  const Eigen::VectorXd row = m.rowwise().sum();
  const double total = row.sum();
  const Eigen::VectorXd g = (row.array() - total / (2.0 * n)) / n;
  ConstrainedGoeMatrix z;
  // m_ij - (g_i + g_j) keeps the result exactly symmetric.
  z.entries = m - (g.replicate(1, n) + g.transpose().replicate(n, 1));
  return z;
}

inline ConstrainedGoeMatrix sample_constrained_goe(int n, std::uint64_t seed) {
  Rng rng(seed);
  return sample_constrained_goe(n, rng);
}

/// Exact covariance E[Z_ij Z_kl] of the constrained GOE.
inline double constrained_goe_covariance(int n, int i, int j, int k, int l) {
  const double inv = 1.0 / n;
  auto delta = [](int a, int b) { return a == b ? 1.0 : 0.0; };
  return inv * (delta(i, k) - inv) * (delta(j, l) - inv) + inv * (delta(i, l) - inv) * (delta(j, k) - inv);
}

}  // namespace rlab
