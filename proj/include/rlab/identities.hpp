#pragma once

#include <algorithm>
#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "rlab/error.hpp"
#include "rlab/graph.hpp"
#include "rlab/green_tree.hpp"
#include "rlab/laws.hpp"
#include "rlab/resampling.hpp"
#include "rlab/sampler.hpp"
#include "rlab/spectral.hpp"

namespace rlab {

/// Low-rank factorization H~ - H = U V^T, supported on the vertices whose
/// rows change.
struct LowRankUpdate {
  std::vector<Vertex> support;  // sorted
  Eigen::MatrixXd U;            // n x r
  Eigen::MatrixXd V;            // n x r
  int rank() const { return static_cast<int>(U.cols()); }
};

inline LowRankUpdate low_rank_difference(const Eigen::MatrixXd& h, const Eigen::MatrixXd& h2) {
  const Eigen::MatrixXd diff = h2 - h;
  const int n = static_cast<int>(h.rows());
  LowRankUpdate out;
  for (int i = 0; i < n; ++i)
    if (diff.row(i).cwiseAbs().maxCoeff() > 0) out.support.push_back(i);
  const int s = static_cast<int>(out.support.size());
  Eigen::MatrixXd block(s, s);
  for (int a = 0; a < s; ++a)
    for (int b = 0; b < s; ++b) block(a, b) = diff(out.support[a], out.support[b]);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(block);
  std::vector<int> keep;
  const double cut = 1e-12 * std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  for (int k = 0; k < s; ++k)
    if (std::abs(es.eigenvalues()[k]) > cut) keep.push_back(k);
  const int r = static_cast<int>(keep.size());
  out.U = Eigen::MatrixXd::Zero(n, r);
  out.V = Eigen::MatrixXd::Zero(n, r);
  for (int c = 0; c < r; ++c)
    for (int a = 0; a < s; ++a) {
      const double q = es.eigenvectors()(a, keep[c]);
      out.U(out.support[a], c) = q * es.eigenvalues()[keep[c]];
      out.V(out.support[a], c) = q;
    }
  return out;
}

struct WoodburyReport {
  double resolvent_residual = 0;   // G~ - G - G~ (H - H~) G
  double woodbury_residual = 0;    // G~ - (G - G U (I + V^T G U)^{-1} V^T G)
  double f_matrix_residual = 0;    // Xi + Xi L~ Xi + U (I + V^T L U)^{-1} V^T on the ball
  double inverse_residual = 0;     // max over both resolvents of |(H - z) G - I|
  int rank = 0;
  int switched = 0;
  int ball_size = 0;
};

/// Checks the exact identities relating the resolvents of G and of the
/// resampled graph T_S(G). The F-matrix check uses the degree-deficit
/// extension with delta = m_sc(z) on the radius-`radius` ball around the
/// center and the switched vertices; the same vertex set is used in both
/// graphs.
inline WoodburyReport woodbury_suite(const RegularGraph& g, const ResamplingData& s, const AdmissibleSet& w,
                                     cplx z, int radius = 1, int dense_cap = kDefaultDenseCap) {
  require(z.imag() > 0, Errc::bad_params, "identities need Im z > 0");
  require(g.vertex_count() <= dense_cap, Errc::dense_cap_exceeded, "graph exceeds the dense cap");
  const RegularGraph g2 = apply_resampling(g, s, w);
  require(!(g2 == g), Errc::no_switch_applied, "resampling did not change the graph");
  WoodburyReport rep;
  rep.switched = w.count();
  const Eigen::MatrixXd h = NormalizedAdjacency(g).dense();
  const Eigen::MatrixXd h2 = NormalizedAdjacency(g2).dense();
  const Eigen::MatrixXcd G = resolvent(h, z).G;
  const Eigen::MatrixXcd G2 = resolvent(h2, z).G;
  rep.inverse_residual = std::max(inverse_residual(h, G, z), inverse_residual(h2, G2, z));
  rep.resolvent_residual = (G2 - G - G2 * (h - h2).cast<cplx>() * G).cwiseAbs().maxCoeff();

  const LowRankUpdate upd = low_rank_difference(h, h2);
  rep.rank = upd.rank();
  const Eigen::MatrixXcd U = upd.U.cast<cplx>(), V = upd.V.cast<cplx>();
  const Eigen::MatrixXcd GU = G * U;
  const Eigen::MatrixXcd core = Eigen::MatrixXcd::Identity(rep.rank, rep.rank) + V.transpose() * GU;
  const Eigen::MatrixXcd wood = G - GU * core.partialPivLu().solve(V.transpose() * G);
  rep.woodbury_residual = (G2 - wood).cwiseAbs().maxCoeff();

  std::vector<Vertex> seeds{s.center};
  for (int a = 0; a < s.mu(); ++a)
    if (w.flags[a])
      for (Vertex v : {s.boundary[a].from, s.boundary[a].to, s.proposals[a].from, s.proposals[a].to}) seeds.push_back(v);
  const Ball b = ball(g, seeds, radius);
  Ball b2 = b;
  b2.edges.clear();
  for (Vertex u : b.vertices)
    for (Vertex v : g2.neighbors(u))
      if (u < v && b.contains(v)) b2.edges.push_back({u, v});
  std::sort(b2.edges.begin(), b2.edges.end());
  rep.ball_size = static_cast<int>(b.vertices.size());
  const ExtensionWeightSpec spec{m_sc(z), WeightConvention::degree_deficit, z};
  const Eigen::MatrixXcd L = p_extension(g.degree(), b, spec).P;
  const Eigen::MatrixXcd Lt = p_extension(g.degree(), b2, spec).P;
  const int m = rep.ball_size;
  Eigen::MatrixXcd xi(m, m), Ub(m, rep.rank), Vb(m, rep.rank);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) xi(i, j) = -(h2(b.vertices[i], b.vertices[j]) - h(b.vertices[i], b.vertices[j]));
    Ub.row(i) = U.row(b.vertices[i]);
    Vb.row(i) = V.row(b.vertices[i]);
  }
  const Eigen::MatrixXcd f_direct = xi + xi * Lt * xi;
  const Eigen::MatrixXcd core_l = Eigen::MatrixXcd::Identity(rep.rank, rep.rank) + Vb.transpose() * L * Ub;
  const Eigen::MatrixXcd f_closed = -Ub * core_l.partialPivLu().solve(Vb.transpose());
  rep.f_matrix_residual = (f_direct - f_closed).cwiseAbs().maxCoeff();
  return rep;
}

struct IdentityFixtureReport {
  std::uint64_t seed = 0;
  int n = 0;
  cplx z;
  double ward_residual = 0;
  double schur_residual = 0;
  double row_sum_residual = 0;
  WoodburyReport woodbury;
  double max_residual() const {
    return std::max({ward_residual, schur_residual, row_sum_residual, woodbury.resolvent_residual,
                     woodbury.woodbury_residual, woodbury.f_matrix_residual, woodbury.inverse_residual});
  }
};

/// One randomized fixture: a sampled graph, a resampling around a random
/// center, and every exact identity evaluated at z. Proposals are redrawn
/// until at least one index is switchable.
inline IdentityFixtureReport identity_fixture(int d, int n, int ell, int R, cplx z, std::uint64_t seed) {
  Rng rng(seed);
  const RegularGraph g = sample_regular(d, n, SamplerConfig::defaults_for(d), rng.next());
  const Eigen::MatrixXd h = NormalizedAdjacency(g).dense();
  IdentityFixtureReport rep;
  rep.seed = seed;
  rep.n = n;
  rep.z = z;
  const Eigen::MatrixXcd G = resolvent(h, z).G;
  rep.ward_residual = ward_residual(G, z);
  rep.row_sum_residual = row_sum_residual(G, d / std::sqrt(d - 1.0), z);
  rep.schur_residual = schur_residual(h, z, static_cast<Vertex>(rng.below(static_cast<std::uint64_t>(n))));
  for (int attempt = 0; attempt < 1000; ++attempt) {
    const auto o = static_cast<Vertex>(rng.below(static_cast<std::uint64_t>(n)));
    const ResamplingData s = propose_resampling(g, o, ell, rng);
    const AdmissibleSet w = admissible_set(g, s, R);
    if (w.count() == 0) continue;
    rep.woodbury = woodbury_suite(g, s, w, z);
    return rep;
  }
  fail(Errc::no_switch_applied, "no admissible resampling found for the fixture");
}

}  // namespace rlab
