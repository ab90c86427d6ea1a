#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "rlab/error.hpp"

namespace rlab {

using Vertex = std::int32_t;

/// Unordered edge stored with u < v.
struct Edge {
  Vertex u = 0;
  Vertex v = 0;

  static Edge of(Vertex a, Vertex b) { return a < b ? Edge{a, b} : Edge{b, a}; }
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

inline constexpr int kUnreachable = std::numeric_limits<int>::max();

class RegularGraph;

namespace detail {
class MutableAdjacency;
}

/// Simple d-regular graph on vertices 0..n-1. Immutable; neighbor rows are
/// sorted and stored contiguously.
class RegularGraph {
 public:
  RegularGraph() = default;

  /// Validating constructor (build_graph).
  static RegularGraph from_edges(int d, int n, std::span<const Edge> edges) {
    require(d >= 3, Errc::bad_params, "degree must be at least 3");
    require(n > d, Errc::bad_params, "need n > d");
    require((static_cast<std::int64_t>(n) * d) % 2 == 0, Errc::bad_params, "n*d must be even");
    std::vector<std::vector<Vertex>> rows(static_cast<std::size_t>(n));
    for (const Edge& e : edges) {
      require(e.u >= 0 && e.u < n && e.v >= 0 && e.v < n, Errc::bad_index,
              "edge {" + std::to_string(e.u) + "," + std::to_string(e.v) + "} out of range");
      require(e.u != e.v, Errc::not_simple, "loop at vertex " + std::to_string(e.u));
      rows[e.u].push_back(e.v);
      rows[e.v].push_back(e.u);
    }
    RegularGraph g;
    g.d_ = d;
    g.n_ = n;
    g.adj_.reserve(static_cast<std::size_t>(n) * d);
    for (Vertex v = 0; v < n; ++v) {
      auto& row = rows[v];
      std::sort(row.begin(), row.end());
      require(std::adjacent_find(row.begin(), row.end()) == row.end(), Errc::not_simple,
              "repeated edge at vertex " + std::to_string(v));
      require(static_cast<int>(row.size()) == d, Errc::not_regular,
              "vertex " + std::to_string(v) + " has degree " + std::to_string(row.size()));
      g.adj_.insert(g.adj_.end(), row.begin(), row.end());
    }
    return g;
  }

  int degree() const { return d_; }
  int vertex_count() const { return n_; }
  std::int64_t edge_count() const { return static_cast<std::int64_t>(n_) * d_ / 2; }

  std::span<const Vertex> neighbors(Vertex v) const {
    check_vertex(v);
    return {adj_.data() + static_cast<std::size_t>(v) * d_, static_cast<std::size_t>(d_)};
  }

  bool has_edge(Vertex u, Vertex v) const {
    const auto row = neighbors(u);
    check_vertex(v);
    return std::binary_search(row.begin(), row.end(), v);
  }

  /// Canonical, lexicographically sorted edge list (u < v).
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    out.reserve(static_cast<std::size_t>(edge_count()));
    for (Vertex u = 0; u < n_; ++u)
      for (Vertex v : neighbors(u))
        if (u < v) out.push_back({u, v});
    return out;
  }

  std::span<const Vertex> adjacency() const { return adj_; }

  void check_vertex(Vertex v) const {
    if (v < 0 || v >= n_) fail(Errc::bad_index, "vertex " + std::to_string(v) + " out of range");
  }

  friend bool operator==(const RegularGraph&, const RegularGraph&) = default;

 private:
  friend class detail::MutableAdjacency;

  int d_ = 0;
  int n_ = 0;
  std::vector<Vertex> adj_;
};

namespace detail {

/// Working copy for edge rewiring. Rows are unsorted while mutating and
/// re-sorted on `freeze`.
class MutableAdjacency {
 public:
  explicit MutableAdjacency(const RegularGraph& g) : d_(g.d_), n_(g.n_), adj_(g.adj_) {}

  bool has_edge(Vertex u, Vertex v) const {
    const Vertex* row = adj_.data() + static_cast<std::size_t>(u) * d_;
    return std::find(row, row + d_, v) != row + d_;
  }

  /// Replace v by w in the row of u. Caller guarantees v is present.
  void relink(Vertex u, Vertex v, Vertex w) {
    Vertex* row = adj_.data() + static_cast<std::size_t>(u) * d_;
    *std::find(row, row + d_, v) = w;
  }

  RegularGraph freeze() && {
    for (Vertex v = 0; v < n_; ++v) {
      auto first = adj_.begin() + static_cast<std::ptrdiff_t>(v) * d_;
      std::sort(first, first + d_);
    }
    RegularGraph g;
    g.d_ = d_;
    g.n_ = n_;
    g.adj_ = std::move(adj_);
    return g;
  }

 private:
  int d_;
  int n_;
  std::vector<Vertex> adj_;
};

}  // namespace detail

inline RegularGraph build_graph(int d, int n, std::span<const Edge> edges) {
  return RegularGraph::from_edges(d, n, edges);
}

/// Radius-r neighbourhood of a vertex set, with the induced edges.
struct Ball {
  std::vector<Vertex> centers;
  int radius = 0;
  std::vector<Vertex> vertices;  // sorted
  std::vector<int> depth;        // distance to the centers, parallel to `vertices`
  std::vector<Edge> edges;       // induced, sorted, u < v

  int index_of(Vertex v) const {
    auto it = std::lower_bound(vertices.begin(), vertices.end(), v);
    if (it == vertices.end() || *it != v) return -1;
    return static_cast<int>(it - vertices.begin());
  }
  bool contains(Vertex v) const { return index_of(v) >= 0; }
};

/// BFS ball in the graph with the vertices flagged in `removed` deleted
/// (pass an empty span for the full graph).
inline Ball ball_in_minor(const RegularGraph& g, std::span<const Vertex> centers, int r,
                          std::span<const char> removed) {
  require(!centers.empty(), Errc::bad_params, "ball needs at least one center");
  require(r >= 0, Errc::bad_params, "ball radius must be non-negative");
  const int n = g.vertex_count();
  auto is_removed = [&](Vertex v) { return !removed.empty() && removed[v]; };
  std::vector<int> dist(static_cast<std::size_t>(n), -1);
  std::vector<Vertex> order;
  for (Vertex c : centers) {
    g.check_vertex(c);
    require(!is_removed(c), Errc::bad_params, "ball center lies in the removed set");
    if (dist[c] < 0) {
      dist[c] = 0;
      order.push_back(c);
    }
  }
  for (std::size_t head = 0; head < order.size(); ++head) {
    const Vertex u = order[head];
    if (dist[u] == r) continue;
    for (Vertex v : g.neighbors(u)) {
      if (dist[v] >= 0 || is_removed(v)) continue;
      dist[v] = dist[u] + 1;
      order.push_back(v);
    }
  }
  Ball b;
  b.centers.assign(centers.begin(), centers.end());
  std::sort(b.centers.begin(), b.centers.end());
  b.centers.erase(std::unique(b.centers.begin(), b.centers.end()), b.centers.end());
  b.radius = r;
  b.vertices = order;
  std::sort(b.vertices.begin(), b.vertices.end());
  b.depth.reserve(b.vertices.size());
  for (Vertex v : b.vertices) {
    b.depth.push_back(dist[v]);
    for (Vertex w : g.neighbors(v))
      if (v < w && dist[w] >= 0) b.edges.push_back({v, w});
  }
  std::sort(b.edges.begin(), b.edges.end());
  return b;
}

inline Ball ball(const RegularGraph& g, std::span<const Vertex> centers, int r) {
  return ball_in_minor(g, centers, r, {});
}

inline Ball ball(const RegularGraph& g, Vertex center, int r) {
  const Vertex c[1] = {center};
  return ball(g, c, r);
}

inline int graph_distance(const RegularGraph& g, Vertex u, Vertex v) {
  g.check_vertex(u);
  g.check_vertex(v);
  if (u == v) return 0;
  std::vector<int> dist(static_cast<std::size_t>(g.vertex_count()), -1);
  std::vector<Vertex> queue{u};
  dist[u] = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const Vertex x = queue[head];
    for (Vertex y : g.neighbors(x)) {
      if (dist[y] >= 0) continue;
      dist[y] = dist[x] + 1;
      if (y == v) return dist[y];
      queue.push_back(y);
    }
  }
  return kUnreachable;
}

struct ExcessReport {
  std::int64_t edges = 0;
  std::int64_t vertices = 0;
  std::int64_t components = 0;
  std::int64_t excess = 0;

  bool is_forest() const { return excess == 0; }
};

namespace detail {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent_[a] = b;
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace detail

/// Cycle rank of a subgraph given by its (sorted) vertex list and edges.
inline ExcessReport excess(std::span<const Vertex> vertices, std::span<const Edge> edges) {
  auto index = [&](Vertex v) {
    auto it = std::lower_bound(vertices.begin(), vertices.end(), v);
    require(it != vertices.end() && *it == v, Errc::bad_index, "edge endpoint outside vertex set");
    return static_cast<std::size_t>(it - vertices.begin());
  };
  detail::DisjointSets sets(vertices.size());
  std::int64_t merges = 0;
  for (const Edge& e : edges)
    if (sets.unite(index(e.u), index(e.v))) ++merges;
  ExcessReport rep;
  rep.vertices = static_cast<std::int64_t>(vertices.size());
  rep.edges = static_cast<std::int64_t>(edges.size());
  rep.components = rep.vertices - merges;
  rep.excess = rep.edges - rep.vertices + rep.components;
  return rep;
}

inline ExcessReport excess(const Ball& b) { return excess(b.vertices, b.edges); }

struct OmegaBarReport {
  std::int64_t non_tree_vertex_count = 0;
  std::int64_t max_excess = 0;
  bool pass = false;
};

/// Tree-neighbourhood diagnostic: counts vertices whose radius-R ball has a
/// cycle; passes iff no ball has excess above omega_d.
inline OmegaBarReport omega_bar_report(const RegularGraph& g, int radius, int omega_d = 1) {
  require(radius >= 1, Errc::bad_params, "radius must be at least 1");
  require(omega_d >= 1, Errc::bad_params, "omega_d must be at least 1");
  OmegaBarReport rep;
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    const auto ex = excess(ball(g, v, radius));
    if (ex.excess > 0) ++rep.non_tree_vertex_count;
    rep.max_excess = std::max(rep.max_excess, ex.excess);
  }
  rep.pass = rep.max_excess <= omega_d;
  return rep;
}

}  // namespace rlab
