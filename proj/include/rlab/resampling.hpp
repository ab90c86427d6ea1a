#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rlab/error.hpp"
#include "rlab/graph.hpp"
#include "rlab/rng.hpp"

namespace rlab {

struct OrientedEdge {
  Vertex from = 0;
  Vertex to = 0;

  friend auto operator<=>(const OrientedEdge&, const OrientedEdge&) = default;
};

/// Switching {(v1,v2),(v3,v4)}: edges {v1,v2},{v3,v4} become {v1,v4},{v2,v3}.
struct SimpleSwitch {
  OrientedEdge first;
  OrientedEdge second;
};

/// The switching that undoes `s` on the switched graph.
inline SimpleSwitch reverse_switch(const SimpleSwitch& s) {
  return {{s.first.from, s.second.to}, {s.second.from, s.first.to}};
}

namespace detail {

inline void apply_switch_in_place(MutableAdjacency& adj, const SimpleSwitch& s, Errc failure) {
  const Vertex v1 = s.first.from, v2 = s.first.to, v3 = s.second.from, v4 = s.second.to;
  if (v1 == v2 || v1 == v3 || v1 == v4 || v2 == v3 || v2 == v4 || v3 == v4)
    fail(failure == Errc::internal_inconsistency ? failure : Errc::vertices_not_distinct,
         "switch vertices are not distinct");
  if (!adj.has_edge(v1, v2) || !adj.has_edge(v3, v4))
    fail(failure == Errc::internal_inconsistency ? failure : Errc::edge_missing, "switched edge is absent");
  if (adj.has_edge(v1, v4) || adj.has_edge(v2, v3))
    fail(failure == Errc::internal_inconsistency ? failure : Errc::would_create_multi_edge,
         "switch would create a multi-edge");
  adj.relink(v1, v2, v4);
  adj.relink(v4, v3, v1);
  adj.relink(v2, v1, v3);
  adj.relink(v3, v4, v2);
}

}  // namespace detail

inline RegularGraph simple_switch(const RegularGraph& g, const SimpleSwitch& s) {
  for (Vertex v : {s.first.from, s.first.to, s.second.from, s.second.to}) g.check_vertex(v);
  detail::MutableAdjacency adj(g);
  detail::apply_switch_in_place(adj, s, Errc::bad_params);
  return std::move(adj).freeze();
}

/// Oriented edge boundary (l, a) of the radius-ell ball around o, with l
/// inside and a outside; sorted.
inline std::vector<OrientedEdge> boundary_edges(const RegularGraph& g, Vertex o, int ell) {
  require(ell >= 0, Errc::bad_params, "ell must be non-negative");
  const Ball b = ball(g, o, ell);
  std::vector<OrientedEdge> out;
  for (Vertex l : b.vertices)
    for (Vertex a : g.neighbors(l))
      if (!b.contains(a)) out.push_back({l, a});
  std::sort(out.begin(), out.end());
  return out;
}

/// Switching data S around a center vertex: boundary edges (l_a, a_a) and
/// proposals (b_a, c_a) drawn from the graph with the ball removed.
struct ResamplingData {
  Vertex center = 0;
  std::optional<Vertex> aux_neighbor;
  int ell = 0;
  std::vector<Vertex> ball_vertices;  // sorted vertex set of the ball
  std::vector<OrientedEdge> boundary;
  std::vector<OrientedEdge> proposals;

  int mu() const { return static_cast<int>(boundary.size()); }

  std::vector<char> ball_mask(int n) const {
    std::vector<char> mask(static_cast<std::size_t>(n), 0);
    for (Vertex v : ball_vertices) mask[v] = 1;
    return mask;
  }
};

struct AdmissibleSet {
  std::vector<bool> flags;
  int radius = 0;  // the isolation parameter R; balls use floor(R/4)

  int count() const { return static_cast<int>(std::count(flags.begin(), flags.end(), true)); }
};

inline int isolation_radius(int R) { return R / 4; }

/// Default isolation parameter: 4*floor(log_{d-1}(n)/4), so that R/4 >= 1
/// once n >= (d-1)^4.
inline int default_isolation_parameter(int d, int n) {
  const double levels = std::log(static_cast<double>(n)) / std::log(static_cast<double>(d - 1));
  return 4 * static_cast<int>(std::floor(levels / 4.0));
}

inline ResamplingData propose_resampling(const RegularGraph& g, Vertex o, int ell, Rng& rng) {
  g.check_vertex(o);
  ResamplingData s;
  s.center = o;
  s.ell = ell;
  s.boundary = boundary_edges(g, o, ell);
  s.ball_vertices = ball(g, o, ell).vertices;
  const auto mask = s.ball_mask(g.vertex_count());
  std::vector<Edge> outside;
  for (Vertex u = 0; u < g.vertex_count(); ++u) {
    if (mask[u]) continue;
    for (Vertex v : g.neighbors(u))
      if (u < v && !mask[v]) outside.push_back({u, v});
  }
  require(!outside.empty(), Errc::no_edges_outside, "no edges outside the ball");
  const auto oriented = static_cast<std::uint64_t>(outside.size()) * 2;
  s.proposals.reserve(s.boundary.size());
  for (std::size_t a = 0; a < s.boundary.size(); ++a) {
    const auto k = rng.below(oriented);
    const Edge& e = outside[k / 2];
    s.proposals.push_back(k % 2 == 0 ? OrientedEdge{e.u, e.v} : OrientedEdge{e.v, e.u});
  }
  return s;
}

inline ResamplingData propose_resampling(const RegularGraph& g, Vertex o, int ell, std::uint64_t seed) {
  Rng rng(seed);
  return propose_resampling(g, o, ell, rng);
}

namespace detail {

inline void check_data(const RegularGraph& g, const ResamplingData& s) {
  require(s.proposals.size() == s.boundary.size(), Errc::bad_params, "proposal count differs from mu");
  for (const auto& e : s.boundary) {
    g.check_vertex(e.from);
    g.check_vertex(e.to);
  }
  for (const auto& e : s.proposals) {
    g.check_vertex(e.from);
    g.check_vertex(e.to);
  }
}

/// Vertices within `r` of the triple {a, b, c} in the graph with the ball
/// removed, as a distance map (-1 = farther).
inline std::vector<int> triple_distances(const RegularGraph& g, const std::vector<char>& removed,
                                         const Vertex (&triple)[3], int r) {
  std::vector<int> dist(static_cast<std::size_t>(g.vertex_count()), -1);
  std::vector<Vertex> queue;
  for (Vertex v : triple)
    if (dist[v] < 0) {
      dist[v] = 0;
      queue.push_back(v);
    }
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const Vertex u = queue[head];
    if (dist[u] == r) continue;
    for (Vertex w : g.neighbors(u)) {
      if (dist[w] >= 0 || removed[w]) continue;
      dist[w] = dist[u] + 1;
      queue.push_back(w);
    }
  }
  return dist;
}

inline bool tree_condition(const RegularGraph& g, const std::vector<char>& removed, Vertex a, Vertex b,
                           Vertex c, int r) {
  if (a == b || a == c) return false;
  const Vertex centers[3] = {a, b, c};
  const Ball nb = ball_in_minor(g, centers, r, removed);
  std::vector<Edge> edges = nb.edges;
  const Edge added = Edge::of(a, b);
  if (std::binary_search(edges.begin(), edges.end(), added)) return false;
  edges.push_back(added);
  const auto ex = excess(nb.vertices, edges);
  return ex.excess == 0 && ex.components == 1;
}

}  // namespace detail

/// Indicator I_alpha: tree condition on the floor(R/4)-ball of
/// {a_alpha, b_alpha, c_alpha} plus the edge {a_alpha, b_alpha}, and
/// isolation (distance > floor(R/4)) from every other triple, both measured
/// with the ball removed.
inline bool admissibility(const RegularGraph& g, const ResamplingData& s, int alpha, int R) {
  detail::check_data(g, s);
  require(alpha >= 0 && alpha < s.mu(), Errc::bad_index, "switching index out of range");
  require(R >= 0, Errc::bad_params, "R must be non-negative");
  const int r = isolation_radius(R);
  const auto removed = s.ball_mask(g.vertex_count());
  const Vertex a = s.boundary[alpha].to, b = s.proposals[alpha].from, c = s.proposals[alpha].to;
  if (!detail::tree_condition(g, removed, a, b, c, r)) return false;
  const Vertex triple[3] = {a, b, c};
  const auto dist = detail::triple_distances(g, removed, triple, r);
  for (int beta = 0; beta < s.mu(); ++beta) {
    if (beta == alpha) continue;
    for (Vertex v : {s.boundary[beta].to, s.proposals[beta].from, s.proposals[beta].to})
      if (dist[v] >= 0) return false;
  }
  return true;
}

inline AdmissibleSet admissible_set(const RegularGraph& g, const ResamplingData& s, int R) {
  AdmissibleSet w;
  w.radius = R;
  w.flags.resize(static_cast<std::size_t>(s.mu()));
  for (int alpha = 0; alpha < s.mu(); ++alpha) w.flags[alpha] = admissibility(g, s, alpha, R);
  return w;
}

inline SimpleSwitch switch_of(const ResamplingData& s, int alpha) {
  return {s.boundary[alpha], s.proposals[alpha]};
}

/// T_S(G): performs {l,a},{b,c} -> {l,c},{a,b} for every switchable index.
/// A switch that fails on the current graph is a logic error, reported as
/// InternalInconsistency.
inline RegularGraph apply_resampling(const RegularGraph& g, const ResamplingData& s, const AdmissibleSet& w) {
  detail::check_data(g, s);
  require(static_cast<int>(w.flags.size()) == s.mu(), Errc::bad_params, "flag count differs from mu");
  detail::MutableAdjacency adj(g);
  for (int alpha = 0; alpha < s.mu(); ++alpha)
    if (w.flags[alpha]) detail::apply_switch_in_place(adj, switch_of(s, alpha), Errc::internal_inconsistency);
  return std::move(adj).freeze();
}

/// T(S): switched indices carry the reversing data (l, c), (b, a), so that
/// applying it to T_S(G) with the same flags restores G.
inline ResamplingData switched_data(const ResamplingData& s, const AdmissibleSet& w) {
  ResamplingData out = s;
  for (int alpha = 0; alpha < s.mu(); ++alpha) {
    if (!w.flags[alpha]) continue;
    const auto rev = reverse_switch(switch_of(s, alpha));
    out.boundary[alpha] = rev.first;
    out.proposals[alpha] = rev.second;
  }
  return out;
}

inline nlohmann::json to_json(const ResamplingData& s, const AdmissibleSet* w = nullptr) {
  nlohmann::json j;
  j["center"] = s.center;
  if (s.aux_neighbor) j["aux_neighbor"] = *s.aux_neighbor;
  j["ell"] = s.ell;
  j["mu"] = s.mu();
  auto pairs = [](const std::vector<OrientedEdge>& es) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& e : es) arr.push_back({e.from, e.to});
    return arr;
  };
  j["boundary"] = pairs(s.boundary);
  j["proposals"] = pairs(s.proposals);
  j["ball_vertices"] = s.ball_vertices;
  if (w) {
    j["flags"] = w->flags;
    j["R"] = w->radius;
  }
  return j;
}

inline ResamplingData resampling_from_json(const nlohmann::json& j) {
  ResamplingData s;
  s.center = j.at("center").get<Vertex>();
  if (j.contains("aux_neighbor")) s.aux_neighbor = j.at("aux_neighbor").get<Vertex>();
  s.ell = j.at("ell").get<int>();
  for (const auto& p : j.at("boundary")) s.boundary.push_back({p.at(0).get<Vertex>(), p.at(1).get<Vertex>()});
  for (const auto& p : j.at("proposals")) s.proposals.push_back({p.at(0).get<Vertex>(), p.at(1).get<Vertex>()});
  s.ball_vertices = j.at("ball_vertices").get<std::vector<Vertex>>();
  require(j.at("mu").get<int>() == s.mu(), Errc::parse_error, "mu does not match the boundary length");
  return s;
}

}  // namespace rlab
