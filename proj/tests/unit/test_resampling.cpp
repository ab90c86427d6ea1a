#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <set>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "fixtures.hpp"
#include "rlab/exchangeability.hpp"
#include "rlab/resampling.hpp"
#include "rlab/sampler.hpp"

using namespace rlab;

namespace {

std::set<Edge> edge_set(const RegularGraph& g) {
  const auto e = g.edges();
  return {e.begin(), e.end()};
}

std::size_t removed_edges(const RegularGraph& a, const RegularGraph& b) {
  const auto ea = edge_set(a), eb = edge_set(b);
  std::size_t k = 0;
  for (const Edge& e : ea) k += !eb.count(e);
  return k;
}

Errc switch_error(const RegularGraph& g, SimpleSwitch s) {
  try {
    simple_switch(g, s);
  } catch (const Error& e) {
    return e.code();
  }
  return Errc::internal_inconsistency;
}

RegularGraph big_graph() { return sample_regular(3, 2000, SamplerConfig{}, 2024); }

}  // namespace

TEST(Switching, PreservesDegreesAndChangesTwoEdges) {
  const auto g = fixtures::moebius_ladder(8);
  const SimpleSwitch s{{0, 1}, {4, 5}};  // adds {0,5} and {1,4}
  const auto g2 = simple_switch(g, s);
  EXPECT_EQ(g2.edge_count(), g.edge_count());
  EXPECT_TRUE(g2.has_edge(0, 5));
  EXPECT_TRUE(g2.has_edge(1, 4));
  EXPECT_FALSE(g2.has_edge(0, 1));
  EXPECT_EQ(removed_edges(g, g2), 2u);
  EXPECT_EQ(build_graph(3, 8, g2.edges()), g2);
}

TEST(Switching, ReverseSwitchRestoresGraph) {
  const auto g = sample_regular(3, 30, SamplerConfig{}, 8);
  const auto edges = g.edges();
  int done = 0;
  for (std::size_t i = 0; i < edges.size() && done < 20; ++i)
    for (std::size_t j = i + 1; j < edges.size() && done < 20; ++j) {
      const SimpleSwitch s{{edges[i].u, edges[i].v}, {edges[j].u, edges[j].v}};
      RegularGraph g2;
      try {
        g2 = simple_switch(g, s);
      } catch (const Error&) {
        continue;
      }
      EXPECT_EQ(simple_switch(g2, reverse_switch(s)), g);
      ++done;
    }
  EXPECT_EQ(done, 20);
}

TEST(Switching, Errors) {
  const auto g = fixtures::moebius_ladder(8);
  EXPECT_EQ(switch_error(g, {{0, 1}, {1, 2}}), Errc::vertices_not_distinct);
  EXPECT_EQ(switch_error(g, {{0, 2}, {4, 5}}), Errc::edge_missing);
  // {0,4} is a chord, so (0,1),(5,4) would add it twice.
  EXPECT_EQ(switch_error(g, {{0, 1}, {5, 4}}), Errc::would_create_multi_edge);
  EXPECT_EQ(switch_error(g, {{0, 1}, {4, 99}}), Errc::bad_index);
}

TEST(Boundary, CountsOnFixtures) {
  const auto q3 = fixtures::cube();
  EXPECT_EQ(boundary_edges(q3, 0, 1).size(), 6u);
  const auto b0 = boundary_edges(q3, 5, 0);
  ASSERT_EQ(b0.size(), 3u);
  for (const auto& e : b0) EXPECT_EQ(e.from, 5);
  EXPECT_TRUE(std::is_sorted(b0.begin(), b0.end()));
}

TEST(Boundary, TreeLikeCenterHasFullBoundary) {
  const auto g = big_graph();
  int checked = 0;
  for (Vertex o = 0; o < 200; ++o)
    for (int ell : {0, 1, 2}) {
      if (excess(ball(g, o, ell + 1)).excess != 0) continue;
      EXPECT_EQ(boundary_edges(g, o, ell).size(), static_cast<std::size_t>(3 << ell));
      ++checked;
    }
  EXPECT_GT(checked, 300);
}

TEST(Proposals, DeterministicAndOutsideTheBall) {
  const auto g = big_graph();
  const auto s = propose_resampling(g, 10, 2, 5);
  const auto t = propose_resampling(g, 10, 2, 5);
  EXPECT_EQ(s.proposals, t.proposals);
  EXPECT_EQ(s.mu(), static_cast<int>(s.boundary.size()));
  EXPECT_EQ(s.proposals.size(), s.boundary.size());
  const auto mask = s.ball_mask(g.vertex_count());
  for (const auto& p : s.proposals) {
    EXPECT_FALSE(mask[p.from]);
    EXPECT_FALSE(mask[p.to]);
    EXPECT_TRUE(g.has_edge(p.from, p.to));
  }
  if (excess(ball(g, 10, 3)).excess == 0) {
    EXPECT_EQ(s.mu(), 12);
  }
}

TEST(Proposals, NoEdgesOutside) {
  try {
    propose_resampling(fixtures::k4(), 0, 1, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::no_edges_outside);
  }
}

TEST(Proposals, FirstProposalIsUniform) {
  const auto g = sample_regular(3, 16, SamplerConfig{}, 3);
  const int draws = 100000;
  std::map<OrientedEdge, int> counts;
  Rng rng(17);
  for (int k = 0; k < draws; ++k) ++counts[propose_resampling(g, 0, 1, rng).proposals[0]];
  const auto s = propose_resampling(g, 0, 1, 1);
  const auto mask = s.ball_mask(16);
  int cells = 0;
  for (const Edge& e : g.edges()) cells += 2 * (!mask[e.u] && !mask[e.v]);
  ASSERT_EQ(static_cast<int>(counts.size()), cells);
  const double expect = static_cast<double>(draws) / cells;
  double chi2 = 0;
  for (const auto& [edge, c] : counts) chi2 += (c - expect) * (c - expect) / expect;
  const boost::math::chi_squared dist(cells - 1);
  EXPECT_LT(chi2, boost::math::quantile(boost::math::complement(dist, 0.001)));
}

TEST(Admissibility, SharedVertexFailsIsolation) {
  const auto g = big_graph();
  auto s = propose_resampling(g, 0, 1, 3);
  s.proposals[1] = {s.proposals[0].to, s.proposals[0].from};
  for (int R : {0, 4, 8}) {
    EXPECT_FALSE(admissibility(g, s, 0, R));
    EXPECT_FALSE(admissibility(g, s, 1, R));
  }
}

TEST(Admissibility, CycleNearProposalFailsTreeCondition) {
  // Every vertex of the ladder lies on a 4-cycle, found once the balls
  // reach radius 2.
  const auto g = fixtures::moebius_ladder(40);
  const auto s = propose_resampling(g, 0, 0, 7);
  const auto w = admissible_set(g, s, 8);
  EXPECT_EQ(w.count(), 0);
  EXPECT_EQ(apply_resampling(g, s, w), g);
}

TEST(Admissibility, FarApartTreeLikeProposalsAreAllAdmissible) {
  const auto g = big_graph();
  Vertex o = 0;
  while (excess(ball(g, o, 3)).excess != 0) ++o;
  auto s = propose_resampling(g, o, 1, 1);
  // Hand-pick proposals: tree-like radius-3 neighbourhoods, pairwise far
  // apart and far from the ball.
  std::vector<Vertex> used{o};
  s.proposals.clear();
  for (Vertex b = 0; b < g.vertex_count() && static_cast<int>(s.proposals.size()) < s.mu(); ++b) {
    if (excess(ball(g, b, 3)).excess != 0) continue;
    bool far = true;
    for (Vertex u : used) far = far && graph_distance(g, u, b) >= 8;
    const Vertex a = s.boundary[s.proposals.size()].to;
    far = far && graph_distance(g, a, b) >= 8;
    if (!far) continue;
    s.proposals.push_back({b, g.neighbors(b)[0]});
    used.push_back(b);
  }
  ASSERT_EQ(static_cast<int>(s.proposals.size()), s.mu());
  const auto w = admissible_set(g, s, 4);
  EXPECT_EQ(w.count(), s.mu());
  for (int a = 0; a < s.mu(); ++a) EXPECT_EQ(w.flags[a], admissibility(g, s, a, 4));
  const auto g2 = apply_resampling(g, s, w);
  EXPECT_EQ(removed_edges(g, g2), static_cast<std::size_t>(2 * s.mu()));
  for (int a = 0; a < s.mu(); ++a) {
    EXPECT_TRUE(g2.has_edge(s.boundary[a].from, s.proposals[a].to));
    EXPECT_TRUE(g2.has_edge(s.boundary[a].to, s.proposals[a].from));
  }
}

TEST(Admissibility, MostIndicesSwitchableOnLargeGraphs) {
  // The failure rate decays like 1/n; with R = 12 the radius-3 balls around
  // the 12 triples still collide often at n = 2000.
  auto fraction = [](int n, int R) {
    const auto g = sample_regular(3, n, SamplerConfig{}, 2024);
    Rng rng(4);
    long total = 0, good = 0;
    for (int k = 0; k < 1000; ++k) {
      const auto o = static_cast<Vertex>(rng.below(static_cast<std::uint64_t>(n)));
      const auto s = propose_resampling(g, o, 2, rng);
      total += s.mu();
      good += admissible_set(g, s, R).count();
    }
    return static_cast<double>(good) / total;
  };
  const double small = fraction(2000, 12);
  EXPECT_GE(small, 0.35);
  EXPECT_LE(small, 0.55);
  EXPECT_GE(fraction(2000, 4), 0.85);
  EXPECT_GE(fraction(20000, 12), 0.9);
}

TEST(Resampling, OutputIsValidAndSwitchedDataInverts) {
  const auto g = big_graph();
  Rng rng(6);
  const int R = default_isolation_parameter(3, 2000);
  EXPECT_EQ(R, 8);
  for (int k = 0; k < 50; ++k) {
    const auto o = static_cast<Vertex>(rng.below(2000));
    const auto s = propose_resampling(g, o, 1, rng);
    const auto w = admissible_set(g, s, R);
    const auto g2 = apply_resampling(g, s, w);
    EXPECT_EQ(build_graph(3, 2000, g2.edges()), g2);
    EXPECT_EQ(removed_edges(g, g2), static_cast<std::size_t>(2 * w.count()));
    EXPECT_EQ(apply_resampling(g2, switched_data(s, w), w), g);
  }
}

TEST(Resampling, EmptyAdmissibleSetIsIdentity) {
  const auto g = big_graph();
  const auto s = propose_resampling(g, 3, 1, 2);
  AdmissibleSet none;
  none.flags.assign(static_cast<std::size_t>(s.mu()), false);
  EXPECT_EQ(apply_resampling(g, s, none), g);
}

TEST(Resampling, DefaultIsolationParameter) {
  EXPECT_EQ(default_isolation_parameter(3, 8), 0);
  EXPECT_EQ(default_isolation_parameter(3, 16), 4);
  EXPECT_EQ(default_isolation_parameter(3, 1000), 8);
  EXPECT_EQ(isolation_radius(12), 3);
}

TEST(Resampling, JsonRoundTrip) {
  const auto g = big_graph();
  const auto s = propose_resampling(g, 9, 2, 3);
  const auto w = admissible_set(g, s, 8);
  const auto j = to_json(s, &w);
  EXPECT_EQ(j.at("mu").get<int>(), s.mu());
  const auto back = resampling_from_json(j);
  EXPECT_EQ(back.center, s.center);
  EXPECT_EQ(back.ell, s.ell);
  EXPECT_EQ(back.boundary, s.boundary);
  EXPECT_EQ(back.proposals, s.proposals);
  EXPECT_EQ(apply_resampling(g, back, w), apply_resampling(g, s, w));
}

TEST(Exchangeability, SingleStateIsSymmetric) {
  const auto rep = reversibility_estimate(3, 4, 0, 0, 2000, 1);
  EXPECT_EQ(rep.moves, 0);
  EXPECT_TRUE(rep.pass);
}

TEST(Exchangeability, SmallRunsAreDeterministicAndIndependentOfJobs) {
  const auto a = reversibility_estimate(3, 8, 0, 0, 30000, 5, KernelVariant::faithful, 1);
  const auto b = reversibility_estimate(3, 8, 0, 0, 30000, 5, KernelVariant::faithful, 3);
  EXPECT_EQ(a.moves, b.moves);
  EXPECT_EQ(a.max_z, b.max_z);
  EXPECT_GT(a.moves, 0);
  EXPECT_TRUE(a.pass);
}
