#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "rlab/error.hpp"
#include "rlab/graph.hpp"
#include "rlab/laws.hpp"

namespace rlab {

enum class TreeKind { regular, ary };

struct TreeGreenQuery {
  int d = 3;
  cplx z{0, 1};
  int dist = 0;
  std::optional<int> anc;  // depth of the nearest common ancestor (ary tree only)
  TreeKind kind = TreeKind::regular;
};

/// Green's function of the infinite d-regular tree, or of the infinite
/// (d-1)-ary tree rooted at o.
inline cplx tree_green(const TreeGreenQuery& q) {
  require(q.z.imag() > 0, Errc::bad_params, "tree Green's function needs Im z > 0");
  require(q.dist >= 0, Errc::bad_params, "distance must be non-negative");
  const cplx m = m_sc(q.z);
  const cplx md = m_d(q.d, q.z);
  const cplx ratio = -m / std::sqrt(q.d - 1.0);
  const cplx decay = std::pow(ratio, q.dist);
  if (q.kind == TreeKind::regular) return md * decay;
  require(q.anc.has_value(), Errc::missing_anc, "ary-tree query needs anc");
  require(*q.anc >= 0, Errc::bad_params, "anc must be non-negative");
  return md * (1.0 - std::pow(ratio, 2 * *q.anc + 2)) * decay;
}

enum class WeightConvention { boundary_only, degree_deficit };

struct ExtensionWeightSpec {
  cplx delta;
  WeightConvention convention = WeightConvention::degree_deficit;
  cplx w;
};

/// Dense P on the kept vertices of a ball; rows follow `vertices`.
struct ExtensionMatrix {
  std::vector<Vertex> vertices;  // sorted
  Eigen::MatrixXcd P;

  int index_of(Vertex v) const {
    auto it = std::lower_bound(vertices.begin(), vertices.end(), v);
    require(it != vertices.end() && *it == v, Errc::bad_index, "vertex not in the extension");
    return static_cast<int>(it - vertices.begin());
  }
  cplx at(Vertex i, Vertex j) const { return P(index_of(i), index_of(j)); }
};

/// (A_ball/sqrt(d-1) - w - weights)^{-1}. Degree-deficit weights are
/// (d - D_ii) delta/(d-1) with D the degree inside the ball before any
/// removal; boundary-only weights put delta on the deepest layer.
inline ExtensionMatrix p_extension(int d, const Ball& b, const ExtensionWeightSpec& spec,
                                   std::span<const Vertex> removed = {}) {
  detail::check_degree(d);
  const int size = static_cast<int>(b.vertices.size());
  std::vector<int> inner_degree(static_cast<std::size_t>(size), 0);
  for (const Edge& e : b.edges) {
    ++inner_degree[b.index_of(e.u)];
    ++inner_degree[b.index_of(e.v)];
  }
  std::vector<char> dropped(static_cast<std::size_t>(size), 0);
  for (Vertex v : removed) {
    const int k = b.index_of(v);
    require(k >= 0, Errc::bad_index, "removed vertex outside the ball");
    dropped[k] = 1;
  }
  ExtensionMatrix out;
  std::vector<int> slot(static_cast<std::size_t>(size), -1);
  for (int k = 0; k < size; ++k)
    if (!dropped[k]) {
      slot[k] = static_cast<int>(out.vertices.size());
      out.vertices.push_back(b.vertices[k]);
    }
  const int m = static_cast<int>(out.vertices.size());
  require(m > 0, Errc::bad_params, "every vertex of the ball was removed");
  const double scale = 1.0 / std::sqrt(d - 1.0);
  const int deepest = b.depth.empty() ? 0 : *std::max_element(b.depth.begin(), b.depth.end());
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(m, m);
  for (const Edge& e : b.edges) {
    const int i = slot[b.index_of(e.u)], j = slot[b.index_of(e.v)];
    if (i < 0 || j < 0) continue;
    a(i, j) = a(j, i) = scale;
  }
  for (int k = 0; k < size; ++k) {
    const int i = slot[k];
    if (i < 0) continue;
    cplx weight = 0;
    if (spec.convention == WeightConvention::degree_deficit)
      weight = static_cast<double>(d - inner_degree[k]) * spec.delta / (d - 1.0);
    else if (b.depth[k] == deepest)
      weight = spec.delta;
    a(i, i) = -spec.w - weight;
  }
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(a);
  require(lu.rcond() > 1e-14, Errc::singular_system,
          "extension matrix is singular");
  out.P = lu.inverse();
  return out;
}

/// Truncated tree of depth ell as a Ball rooted at vertex 0: the d-regular
/// tree, or the (d-1)-ary tree when `ary` is set. Vertices are numbered in
/// BFS order.
inline Ball truncated_tree_ball(int d, int ell, bool ary) {
  detail::check_degree(d);
  require(ell >= 0, Errc::bad_params, "ell must be non-negative");
  Ball b;
  b.centers = {0};
  b.radius = ell;
  b.vertices = {0};
  b.depth = {0};
  std::size_t level_begin = 0;
  for (int depth = 1; depth <= ell; ++depth) {
    const std::size_t level_end = b.vertices.size();
    for (std::size_t k = level_begin; k < level_end; ++k) {
      const int children = (k == 0 && !ary) ? d : d - 1;
      for (int c = 0; c < children; ++c) {
        const auto v = static_cast<Vertex>(b.vertices.size());
        b.vertices.push_back(v);
        b.depth.push_back(depth);
        b.edges.push_back({static_cast<Vertex>(k), v});
      }
    }
    level_begin = level_end;
  }
  std::sort(b.edges.begin(), b.edges.end());
  return b;
}

namespace detail {

// First-order forward-mode value in the two arguments (delta, w).
struct Dual2 {
  cplx v, d1, d2;

  friend Dual2 operator+(const Dual2& a, const Dual2& b) { return {a.v + b.v, a.d1 + b.d1, a.d2 + b.d2}; }
  friend Dual2 operator-(const Dual2& a) { return {-a.v, -a.d1, -a.d2}; }
  friend Dual2 operator*(cplx c, const Dual2& a) { return {c * a.v, c * a.d1, c * a.d2}; }
  friend Dual2 inverse(const Dual2& a) {
    const cplx r = 1.0 / a.v;
    return {r, -r * r * a.d1, -r * r * a.d2};
  }
};

inline cplx inverse(cplx x) { return 1.0 / x; }

template <class T>
T last_layer(int ell, const T& delta, const T& w) {
  T a = inverse(-w + -delta);
  for (int j = 1; j < ell; ++j) a = inverse(-w + -a);
  return a;
}

template <class T>
T y_rec(int ell, const T& delta, const T& w) {
  if (ell == 0) return inverse(-w + -delta);
  return inverse(-w + -last_layer(ell, delta, w));
}

template <class T>
T x_rec(int d, int ell, const T& delta, const T& w) {
  const cplx c = d / (d - 1.0);
  if (ell == 0) return inverse(-w + -(c * delta));
  return inverse(-w + -(c * last_layer(ell, delta, w)));
}

}  // namespace detail

/// P_oo on the depth-ell (d-1)-ary tree with weight delta on the last
/// layer only.
inline cplx y_ell(int d, int ell, cplx delta, cplx w) {
  detail::check_degree(d);
  require(ell >= 0, Errc::bad_params, "ell must be non-negative");
  return detail::y_rec(ell, delta, w);
}

/// P_oo on the depth-ell d-regular tree with degree-deficit weights.
inline cplx x_ell(int d, int ell, cplx delta, cplx w) {
  detail::check_degree(d);
  require(ell >= 0, Errc::bad_params, "ell must be non-negative");
  return detail::x_rec(d, ell, delta, w);
}

struct Derivatives {
  cplx value, d_delta, d_w;
};

inline Derivatives y_ell_derivatives(int d, int ell, cplx delta, cplx w) {
  detail::check_degree(d);
  const auto r = detail::y_rec(ell, detail::Dual2{delta, 1, 0}, detail::Dual2{w, 0, 1});
  return {r.v, r.d1, r.d2};
}

inline Derivatives x_ell_derivatives(int d, int ell, cplx delta, cplx w) {
  detail::check_degree(d);
  const auto r = detail::x_rec(d, ell, detail::Dual2{delta, 1, 0}, detail::Dual2{w, 0, 1});
  return {r.v, r.d1, r.d2};
}

/// Coefficients of the second-order expansion of Y_ell around
/// (m_sc(z), z).
struct YExpansion {
  cplx linear_delta;  // m^{2l+2}
  cplx linear_w;      // m^2 + m^4 + ... + m^{2l+2}
  cplx quadratic;     // coefficient of (delta - m)^2
};

inline YExpansion y_expansion(int d, int ell, cplx z) {
  const cplx m = m_sc(z), md = m_d(d, z);
  const cplx m2 = m * m;
  const cplx top = std::pow(m2, ell + 1);
  cplx sum = 0, p = 1;
  for (int k = 1; k <= ell + 1; ++k) {
    p *= m2;
    sum += p;
  }
  const cplx quad = top * md * ((1.0 - top) / (d - 1.0) + (d - 2.0) / (d - 1.0) * (1.0 - top) / (1.0 - m2));
  return {top, sum, quad};
}

struct ExpansionPoint {
  cplx delta_offset;
  cplx w_offset;
  cplx value;     // Y_ell(m + delta_offset, z + w_offset)
  double residual;  // |Y - m - linear - quadratic|
};

struct ExpansionReport {
  int d = 3;
  int ell = 0;
  cplx z;
  YExpansion coefficients;
  std::vector<ExpansionPoint> points;
  cplx fd_linear_delta;  // central difference in delta
  cplx fd_linear_w;      // central difference in w
  cplx ad_linear_delta;  // forward-mode derivative
  cplx ad_linear_w;
};

/// Evaluates the second-order expansion at each (delta, w) offset pair.
/// Offsets must satisfy ell^2 |offset| <= 1/2.
inline ExpansionReport expansion_check(int d, int ell, cplx z, std::span<const cplx> delta_offsets,
                                       std::span<const cplx> w_offsets, double fd_step = 1e-5) {
  detail::check_degree(d);
  require(ell >= 0, Errc::bad_params, "ell must be non-negative");
  require(z.imag() > 0, Errc::bad_params, "expansion needs Im z > 0");
  require(delta_offsets.size() == w_offsets.size(), Errc::bad_params, "offset lists differ in length");
  const double l2 = std::max(1.0, static_cast<double>(ell) * ell);
  for (std::size_t k = 0; k < delta_offsets.size(); ++k)
    require(l2 * std::abs(delta_offsets[k]) <= 0.5 && l2 * std::abs(w_offsets[k]) <= 0.5, Errc::offsets_too_large,
            "offsets are too large for the expansion");
  ExpansionReport rep;
  rep.d = d;
  rep.ell = ell;
  rep.z = z;
  rep.coefficients = y_expansion(d, ell, z);
  const cplx m = m_sc(z);
  const auto& c = rep.coefficients;
  for (std::size_t k = 0; k < delta_offsets.size(); ++k) {
    const cplx dd = delta_offsets[k], dw = w_offsets[k];
    const cplx y = y_ell(d, ell, m + dd, z + dw);
    const cplx model = m + c.linear_delta * dd + c.linear_w * dw + c.quadratic * dd * dd;
    rep.points.push_back({dd, dw, y, std::abs(y - model)});
  }
  const double h = fd_step;
  rep.fd_linear_delta = (y_ell(d, ell, m + h, z) - y_ell(d, ell, m - h, z)) / (2 * h);
  rep.fd_linear_w = (y_ell(d, ell, m, z + h) - y_ell(d, ell, m, z - h)) / (2 * h);
  const auto ad = y_ell_derivatives(d, ell, m, z);
  rep.ad_linear_delta = ad.d_delta;
  rep.ad_linear_w = ad.d_w;
  return rep;
}

}  // namespace rlab
