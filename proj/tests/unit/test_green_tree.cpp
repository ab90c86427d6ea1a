#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "rlab/green_tree.hpp"
#include "rlab/sampler.hpp"

using namespace rlab;

namespace {

std::vector<cplx> z_grid50() {
  std::vector<cplx> z;
  for (double x : {-2.5, -1.9, -1.0, -0.3, 0.0, 0.4, 1.2, 1.8, 2.1, 3.0})
    for (double y : {0.01, 0.1, 0.5, 1.0, 4.0}) z.emplace_back(x, y);
  return z;
}

// Parent links of a BFS-numbered truncated tree.
std::vector<int> parents(const Ball& b) {
  std::vector<int> p(b.vertices.size(), -1);
  for (const Edge& e : b.edges) p[e.v] = e.u;  // BFS numbering: parent < child
  return p;
}

std::vector<int> path_to_root(const std::vector<int>& parent, int v) {
  std::vector<int> path{v};
  while (parent[path.back()] >= 0) path.push_back(parent[path.back()]);
  return path;
}

Errc code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return Errc::internal_inconsistency;
}

}  // namespace

TEST(TreeGreen, ClosedFormBasics) {
  for (cplx z : {cplx(0, 1), cplx(1.5, 0.2)}) {
    EXPECT_EQ(tree_green({3, z, 0, {}, TreeKind::regular}), m_d(3, z));
    const cplx r = -m_sc(z) / std::sqrt(3.0);
    EXPECT_NEAR(std::abs(tree_green({4, z, 3, {}, TreeKind::regular}) - m_d(4, z) * r * r * r), 0, 1e-15);
  }
  EXPECT_EQ(code_of([] { tree_green({3, cplx(0, 1), 1, {}, TreeKind::ary}); }), Errc::missing_anc);
  EXPECT_EQ(code_of([] { tree_green({3, cplx(0, -1), 1, {}, TreeKind::regular}); }), Errc::bad_params);
  EXPECT_EQ(code_of([] { tree_green({3, cplx(0, 1), -1, {}, TreeKind::regular}); }), Errc::bad_params);
}

TEST(TreeGreen, RegularTreeMatchesTruncatedInverse) {
  // With delta = m_sc the degree-deficit weights are the exact self-energy
  // of the missing branches, so the finite inverse is the infinite tree's.
  for (int d : {3, 4}) {
    const Ball b = truncated_tree_ball(d, 4, false);
    for (cplx z : {cplx(0.3, 0.4), cplx(-2.2, 0.05)}) {
      const auto p = p_extension(d, b, {m_sc(z), WeightConvention::degree_deficit, z});
      for (std::size_t v = 0; v < b.vertices.size(); v += 3) {
        const int dist = b.depth[v];
        EXPECT_NEAR(std::abs(p.P(0, static_cast<int>(v)) - tree_green({d, z, dist, {}, TreeKind::regular})), 0, 1e-10);
      }
    }
  }
}

TEST(TreeGreen, AryTreeMatchesTruncatedInverse) {
  const int d = 3;
  const Ball b = truncated_tree_ball(d, 5, true);
  const auto parent = parents(b);
  const cplx z(0.7, 0.3);
  const auto p = p_extension(d, b, {m_sc(z), WeightConvention::boundary_only, z});
  int checked = 0;
  for (std::size_t i = 0; i < b.vertices.size(); i += 5)
    for (std::size_t j = 0; j < b.vertices.size(); j += 7) {
      const auto pi = path_to_root(parent, static_cast<int>(i));
      const auto pj = path_to_root(parent, static_cast<int>(j));
      // Walk both root paths from the root end to find the common ancestor.
      std::size_t a = pi.size(), c = pj.size();
      while (a > 0 && c > 0 && pi[a - 1] == pj[c - 1]) {
        --a;
        --c;
      }
      const int anc = b.depth[pi[a]];
      const int dist = static_cast<int>(a + c);
      const cplx expect = tree_green({d, z, dist, anc, TreeKind::ary});
      // Only vertices away from the truncation see the infinite tree.
      if (b.depth[i] + b.depth[j] > 10) continue;
      EXPECT_NEAR(std::abs(p.P(static_cast<int>(i), static_cast<int>(j)) - expect), 0, 1e-10) << i << " " << j;
      ++checked;
    }
  EXPECT_GT(checked, 50);
  EXPECT_NEAR(std::abs(p.P(0, 0) - m_sc(z)), 0, 1e-12);
}

TEST(Extension, SingleVertexAndTreeBallGiveKestenMcKay) {
  for (cplx z : z_grid50()) {
    Ball single;
    single.centers = {0};
    single.vertices = {0};
    single.depth = {0};
    const auto p = p_extension(3, single, {m_sc(z), WeightConvention::degree_deficit, z});
    EXPECT_NEAR(std::abs(p.P(0, 0) - m_d(3, z)), 0, 1e-12);
  }
  const auto g = sample_regular(3, 2000, SamplerConfig{}, 5);
  Vertex o = 0;
  while (excess(ball(g, o, 4)).excess != 0) ++o;
  const Ball b = ball(g, o, 3);
  for (cplx z : {cplx(0, 1), cplx(1.9, 0.01), cplx(-0.5, 0.2)}) {
    const auto p = p_extension(3, b, {m_sc(z), WeightConvention::degree_deficit, z});
    EXPECT_NEAR(std::abs(p.at(o, o) - m_d(3, z)), 0, 1e-10);
  }
}

TEST(Extension, RemovedVerticesMatchSubmatrixInverse) {
  const Ball b = truncated_tree_ball(3, 2, false);
  const cplx z(0.1, 0.5), delta(0.2, 0.3);
  const std::vector<Vertex> removed{0};
  const auto p = p_extension(3, b, {delta, WeightConvention::degree_deficit, z}, removed);
  ASSERT_EQ(p.vertices.size(), 9u);
  // Removing the root leaves three disjoint stars; weights keep the
  // degrees of the full ball.
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(10, 10);
  for (const Edge& e : b.edges) a(e.u, e.v) = a(e.v, e.u) = 1 / std::sqrt(2.0);
  std::vector<int> deg(10, 0);
  for (const Edge& e : b.edges) ++deg[e.u], ++deg[e.v];
  for (int k = 0; k < 10; ++k) a(k, k) = -z - static_cast<double>(3 - deg[k]) * delta / 2.0;
  const Eigen::MatrixXcd sub = a.bottomRightCorner(9, 9).inverse();
  EXPECT_LE((sub - p.P).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_EQ(p.at(1, 4), p.P(0, 3));
  EXPECT_EQ(code_of([&] { p.at(0, 1); }), Errc::bad_index);
  std::vector<Vertex> all(b.vertices.begin(), b.vertices.end());
  EXPECT_EQ(code_of([&] { p_extension(3, b, {delta, WeightConvention::degree_deficit, z}, all); }), Errc::bad_params);
}

TEST(FixedPoints, YAndXOverGrid) {
  for (int d : {3, 4, 10})
    for (int ell = 0; ell <= 12; ++ell)
      for (cplx z : z_grid50()) {
        EXPECT_LE(std::abs(y_ell(d, ell, m_sc(z), z) - m_sc(z)), 1e-12) << d << " " << ell << " " << z;
        EXPECT_LE(std::abs(x_ell(d, ell, m_sc(z), z) - m_d(d, z)), 1e-12) << d << " " << ell << " " << z;
      }
}

TEST(FixedPoints, RecursionsMatchMatrixOracles) {
  const std::vector<cplx> deltas{cplx(0.3, 0.2), cplx(-0.4, 0.9), cplx(0, 0.05)};
  const std::vector<cplx> ws{cplx(0.5, 0.5), cplx(-1.7, 0.1), cplx(2.5, 1)};
  for (int d : {3, 4})
    for (int ell = 0; ell <= 5; ++ell)
      for (std::size_t k = 0; k < deltas.size(); ++k) {
        const Ball ary = truncated_tree_ball(d, ell, true);
        const Ball reg = truncated_tree_ball(d, ell, false);
        const cplx y = p_extension(d, ary, {deltas[k], WeightConvention::boundary_only, ws[k]}).P(0, 0);
        const cplx x = p_extension(d, reg, {deltas[k], WeightConvention::degree_deficit, ws[k]}).P(0, 0);
        EXPECT_NEAR(std::abs(y_ell(d, ell, deltas[k], ws[k]) - y), 0, 1e-12);
        EXPECT_NEAR(std::abs(x_ell(d, ell, deltas[k], ws[k]) - x), 0, 1e-12);
      }
}

TEST(FixedPoints, ConjugateSymmetry) {
  const cplx delta(0.3, 0.4), w(-0.6, 0.7);
  for (int ell : {0, 3, 8}) {
    EXPECT_NEAR(std::abs(y_ell(3, ell, std::conj(delta), std::conj(w)) - std::conj(y_ell(3, ell, delta, w))), 0, 1e-15);
    EXPECT_NEAR(std::abs(x_ell(4, ell, std::conj(delta), std::conj(w)) - std::conj(x_ell(4, ell, delta, w))), 0, 1e-15);
  }
}

TEST(Expansion, CoefficientsMatchCompositionRule) {
  // Y is the (ell+1)-fold composition of f(a) = 1/(-w - a), with f' = m^2
  // and f'' = 2 m^3 at the fixed point a = m.
  for (int d : {3, 4, 10})
    for (int ell : {0, 1, 4, 9})
      for (cplx z : {cplx(0, 1), cplx(1.5, 0.3)}) {
        const cplx m = m_sc(z), m2 = m * m;
        cplx g1 = 1, g2 = 0, lw = 0;
        for (int n = 1; n <= ell + 1; ++n) {
          g2 = 2.0 * m * m2 * g1 * g1 + m2 * g2;
          g1 *= m2;
          lw = m2 * (1.0 + lw);
        }
        const auto c = y_expansion(d, ell, z);
        EXPECT_NEAR(std::abs(c.linear_delta - g1), 0, 1e-13);
        EXPECT_NEAR(std::abs(c.linear_w - lw), 0, 1e-13);
        EXPECT_NEAR(std::abs(c.quadratic - g2 / 2.0), 0, 1e-13);
      }
}

TEST(Expansion, DerivativesAgreeWithDifferences) {
  for (int ell : {0, 2, 6}) {
    const cplx z(0.4, 0.6);
    const auto rep = expansion_check(3, ell, z, {}, {});
    EXPECT_LE(std::abs(rep.ad_linear_delta - rep.fd_linear_delta), 1e-8);
    EXPECT_LE(std::abs(rep.ad_linear_w - rep.fd_linear_w), 1e-8);
    EXPECT_LE(std::abs(rep.ad_linear_delta - rep.coefficients.linear_delta), 1e-13);
    EXPECT_LE(std::abs(rep.ad_linear_w - rep.coefficients.linear_w), 1e-13);
    const cplx delta(0.2, 0.5), w(0.1, 0.8), h = 1e-6;
    const auto xd = x_ell_derivatives(4, ell, delta, w);
    EXPECT_EQ(xd.value, x_ell(4, ell, delta, w));
    EXPECT_NEAR(std::abs(xd.d_delta - (x_ell(4, ell, delta + h, w) - x_ell(4, ell, delta - h, w)) / (2.0 * h)), 0, 1e-8);
    EXPECT_NEAR(std::abs(xd.d_w - (x_ell(4, ell, delta, w + h) - x_ell(4, ell, delta, w - h)) / (2.0 * h)), 0, 1e-8);
  }
}

TEST(Expansion, ResidualIsThirdOrder) {
  for (int ell : {1, 3}) {
    const cplx z(0.2, 0.5);
    std::vector<cplx> dd, dw;
    for (double s = 0.02; s > 1e-3; s /= 2) {
      dd.push_back(cplx(s, 0.5 * s) / (1.0 * ell * ell));
      dw.push_back(0);  // the model has no w^2 or cross terms
    }
    const auto rep = expansion_check(3, ell, z, dd, dw);
    for (std::size_t k = 1; k < rep.points.size(); ++k)
      EXPECT_GE(rep.points[k - 1].residual / rep.points[k].residual, 6) << ell << " " << k;
  }
  const cplx big[1] = {cplx(0.2, 0)};
  const cplx zero[1] = {cplx(0, 0)};
  EXPECT_EQ(code_of([&] { expansion_check(3, 2, cplx(0, 1), big, zero); }), Errc::offsets_too_large);
}
