#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include <nlohmann/json.hpp>

#include "rlab/error.hpp"
#include "rlab/graph.hpp"
#include "rlab/green_tree.hpp"
#include "rlab/laws.hpp"
#include "rlab/rng.hpp"
#include "rlab/sampler.hpp"
#include "rlab/spectral.hpp"

namespace rlab {

struct VertexPair {
  Vertex i = 0;
  Vertex j = 0;
};

struct LocalLawReport {
  cplx z;
  double t = 0;
  int R = 0;
  cplx z_t;
  cplx m_N;
  cplx Q;
  double max_tree_err = 0;
  double q_err = 0;
  double m_err = 0;
  std::vector<VertexPair> pairs;

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["z"] = {z.real(), z.imag()};
    j["z_t"] = {z_t.real(), z_t.imag()};
    j["t"] = t;
    j["R"] = R;
    j["m_N"] = {m_N.real(), m_N.imag()};
    j["Q"] = {Q.real(), Q.imag()};
    j["max_tree_err"] = max_tree_err;
    j["q_err"] = q_err;
    j["m_err"] = m_err;
    nlohmann::json ps = nlohmann::json::array();
    for (const auto& p : pairs) ps.push_back({p.i, p.j});
    j["pairs"] = ps;
    return j;
  }
};

/// Coincident and adjacent pairs: all of them when n <= 500, otherwise
/// `count` pairs, half coincident and half adjacent, drawn from `seed`.
inline std::vector<VertexPair> local_law_pairs(const RegularGraph& g, std::uint64_t seed, int count = 200) {
  std::vector<VertexPair> out;
  const int n = g.vertex_count();
  if (n <= 500) {
    for (Vertex i = 0; i < n; ++i) {
      out.push_back({i, i});
      for (Vertex j : g.neighbors(i))
        if (i < j) out.push_back({i, j});
    }
    return out;
  }
  Rng rng(seed);
  for (int k = 0; k < count; ++k) {
    const auto i = static_cast<Vertex>(rng.below(static_cast<std::uint64_t>(n)));
    if (k % 2 == 0) {
      out.push_back({i, i});
    } else {
      const auto nb = g.neighbors(i);
      out.push_back({i, nb[rng.below(nb.size())]});
    }
  }
  return out;
}

/// Spectral data of H(t) = H + sqrt(t) Z for one graph, reused across
/// spectral parameters.
class LocalLawProbe {
 public:
  LocalLawProbe(const RegularGraph& g, double t, std::uint64_t seed, int dense_cap = kDefaultDenseCap)
      : g_(g), t_(t), seed_(seed), resolvent_(decompose(g, t, seed, dense_cap)) {}

  const RegularGraph& graph() const { return g_; }
  double t() const { return t_; }
  const Eigen::VectorXd& eigenvalues() const { return resolvent_.eigenvalues(); }

  LocalLawReport evaluate(cplx z, int R) {
    require(z.imag() > 0, Errc::bad_params, "local law needs Im z > 0");
    require(R >= 0, Errc::bad_params, "R must be non-negative");
    const int d = g_.degree();
    LocalLawReport rep;
    rep.z = z;
    rep.t = t_;
    rep.R = R;
    rep.z_t = t_ > 0 ? free_conv_m(d, z, t_).z_t : z;
    const cplx msc = m_sc(rep.z_t), md = m_d(d, rep.z_t);
    resolvent_.set_z(z);
    rep.m_N = resolvent_.stieltjes();
    rep.Q = q_statistic_from(g_, [&](Vertex i, Vertex j) { return resolvent_.entry(i, j); });
    rep.m_err = std::abs(rep.m_N - md);
    rep.q_err = std::abs(rep.Q - msc);
    rep.pairs = local_law_pairs(g_, derive_seed(seed_, 1));
    const ExtensionWeightSpec spec{msc, WeightConvention::degree_deficit, rep.z_t};
    for (const auto& p : rep.pairs) {
      const Vertex centers[2] = {p.i, p.j};
      const Ball b = ball(g_, centers, R);
      const cplx tree = p_extension(d, b, spec).at(p.i, p.j);
      rep.max_tree_err = std::max(rep.max_tree_err, std::abs(resolvent_.entry(p.i, p.j) - tree));
    }
    return rep;
  }

 private:
  static SpectralResolvent decompose(const RegularGraph& g, double t, std::uint64_t seed, int dense_cap) {
    require(t >= 0, Errc::bad_params, "t must be non-negative");
    require(g.vertex_count() <= dense_cap, Errc::dense_cap_exceeded, "graph exceeds the dense cap");
    Eigen::MatrixXd h = NormalizedAdjacency(g).dense();
    if (t > 0) h += std::sqrt(t) * sample_constrained_goe(g.vertex_count(), seed).entries;
    auto spec = symmetric_spectrum(h, true);
    return SpectralResolvent(spec);
  }

  RegularGraph g_;
  double t_;
  std::uint64_t seed_;
  SpectralResolvent resolvent_;
};

/// Compares G(z) of H(t) with the tree extension P(B_R({i,j}), z_t,
/// m_sc(z_t)) on coincident and adjacent pairs, Q with m_sc(z_t) and m_N
/// with m_d(z_t), where z_t = z + t m_d(z, t).
inline LocalLawReport local_law_report(const RegularGraph& g, cplx z, double t, int R, std::uint64_t seed = 0) {
  LocalLawProbe probe(g, t, seed);
  return probe.evaluate(z, R);
}

}  // namespace rlab
