// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails. Pass a list of criterion numbers to run a subset.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <set>
#include <string>
#include <vector>

#include "rlab/rlab.hpp"
#include "rlab/tw1_oracle.hpp"

using namespace rlab;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::vector<cplx> grid50() {
  std::vector<cplx> z;
  for (double x : {-2.5, -1.9, -1.0, -0.3, 0.0, 0.4, 1.2, 1.8, 2.1, 3.0})
    for (double y : {0.01, 0.1, 0.5, 1.0, 4.0}) z.emplace_back(x, y);
  return z;
}

ExperimentConfig base(int n, int trials, std::uint64_t seed) {
  ExperimentConfig cfg;
  cfg.d = 3;
  cfg.n = n;
  cfg.trials = trials;
  cfg.seed = seed;
  cfg.sampler = SamplerConfig::defaults_for(3);
  return cfg;
}

Outcome identities() {
  ExperimentConfig cfg = base(200, 50, 101);
  cfg.ell = 1;
  cfg.R = default_isolation_parameter(3, 200);
  cfg.z_grid = {cplx(0, 1), cplx(0.5, 0.5), cplx(2, 0.1)};
  const SummaryReport r = identity_suite(cfg);
  int switched = 0;
  for (const auto& t : r.trials) switched += t["switched"].get<int>();
  return {r.pass, fmt("max residual %.2e over 50 fixtures (%d switches)", r.summary["max_residual"].get<double>(),
                      switched)};
}

Outcome fixed_points() {
  double worst_y = 0, worst_x = 0;
  for (int d : {3, 4, 10})
    for (int ell = 0; ell <= 12; ++ell)
      for (cplx z : grid50()) {
        worst_y = std::max(worst_y, std::abs(y_ell(d, ell, m_sc(z), z) - m_sc(z)));
        worst_x = std::max(worst_x, std::abs(x_ell(d, ell, m_sc(z), z) - m_d(d, z)));
      }
  return {worst_y <= 1e-12 && worst_x <= 1e-12, fmt("max |Y - m_sc| %.2e, max |X - m_d| %.2e", worst_y, worst_x)};
}

Outcome expansion() {
  double worst_lin = 0, worst_ratio = 1e300;
  for (int d : {3, 4, 10})
    for (int ell : {0, 1, 2, 4, 8})
      for (cplx z : {cplx(0.2, 0.5), cplx(0, 1), cplx(-1.2, 0.3)}) {
        std::vector<cplx> dd, dw;
        const double l2 = std::max(1, ell * ell);
        // Offsets near the allowed maximum keep the residuals above rounding.
        for (double s = 0.4; s > 0.02; s /= 2) {
          dd.push_back(cplx(s, 0.5 * s) / l2);
          dw.push_back(0);
        }
        const auto rep = expansion_check(d, ell, z, dd, dw);
        const cplx target = std::pow(m_sc(z), 2 * ell + 2);
        worst_lin = std::max(worst_lin, std::abs(rep.fd_linear_delta - target) / std::abs(target));
        for (std::size_t k = 1; k < rep.points.size(); ++k)
          worst_ratio = std::min(worst_ratio, rep.points[k - 1].residual / rep.points[k].residual);
      }
  return {worst_lin <= 0.01 && worst_ratio >= 6,
          fmt("linear coefficient rel. error %.2e, min residual ratio on halving %.2f", worst_lin, worst_ratio)};
}

Outcome known_spectra() {
  const double s = std::sqrt(2.0);
  std::vector<Edge> k4e{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
  const auto k4 = full_spectrum(NormalizedAdjacency(build_graph(3, 4, k4e)), false);
  std::vector<Edge> pe;
  for (int i = 0; i < 5; ++i) {
    pe.push_back(Edge::of(i, (i + 1) % 5));
    pe.push_back(Edge::of(i, i + 5));
    pe.push_back(Edge::of(5 + i, 5 + (i + 2) % 5));
  }
  const auto pet = full_spectrum(NormalizedAdjacency(build_graph(3, 10, pe)), false);
  const std::vector<double> k4_exact{3 / s, -1 / s, -1 / s, -1 / s};
  const std::vector<double> pet_exact{3 / s, 1 / s, 1 / s, 1 / s, 1 / s, 1 / s, -2 / s, -2 / s, -2 / s, -2 / s};
  double known = 0;
  for (int k = 0; k < 4; ++k) known = std::max(known, std::abs(k4.eigenvalues[k] - k4_exact[k]));
  for (int k = 0; k < 10; ++k) known = std::max(known, std::abs(pet.eigenvalues[k] - pet_exact[k]));

  double lambda1 = 0, tr1 = 0, tr2 = 0;
  int graphs = 0;
  for (int d : {3, 4, 7})
    for (int n : {20, 101 + (d % 2 ? 1 : 0), 400})
      for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        const auto g = sample_regular(d, n, SamplerConfig::defaults_for(d), seed * 1000 + n);
        const auto e = full_spectrum(NormalizedAdjacency(g), false).eigenvalues;
        lambda1 = std::max(lambda1, std::abs(e[0] - d / std::sqrt(d - 1.0)));
        const double want2 = n * d / (d - 1.0);
        tr1 = std::max(tr1, std::abs(e.sum()) / want2);
        tr2 = std::max(tr2, std::abs(e.squaredNorm() - want2) / want2);
        ++graphs;
      }
  return {known <= 1e-9 && lambda1 <= 1e-10 && tr1 <= 1e-6 && tr2 <= 1e-6,
          fmt("K4/Petersen error %.1e; over %d graphs: lambda_1 error %.1e, |sum| %.1e, sum^2 rel %.1e", known, graphs,
              lambda1, tr1, tr2)};
}

Outcome free_convolution() {
  double residual = 0;
  for (int d : {3, 4, 10})
    for (cplx z : grid50())
      for (double t : {0.01, 0.1, 0.5, 1.0}) residual = std::max(residual, free_conv_m(d, z, t).residual);
  bool ok = residual <= 1e-12;
  std::string detail = fmt("residual %.1e;", residual);
  for (int d : {3, 4, 10}) {
    const double a = edge_constant(d);
    auto r3 = [&](double t) { return (edge_location(d, t).xi_t - 2 - a * a * t * t / 4) / (t * t * t); };
    // Bounded: no larger than the t -> 0 limit of the same ratio.
    const double limit = std::abs(r3(1e-4));
    double worst = 0;
    for (double t : {0.1, 0.05, 0.025}) worst = std::max(worst, std::abs(r3(t)));
    const double slope = (edge_location(d, 0.01).E_t - 2) / 0.01, target = (d - 1.0) / (d - 2.0);
    const double rel = std::abs(slope - target) / target;
    ok = ok && worst <= 1.01 * limit && rel <= 0.05;
    detail += fmt(" d=%d: max|r3| %.1f (limit %.1f), slope err %.1f%%;", d, worst, limit, 100 * rel);
  }
  return {ok, detail};
}

Outcome constrained_goe() {
  const int draws = 100000;
  const int quads[][4] = {{0, 1, 0, 1}, {0, 1, 0, 2}, {0, 1, 2, 3}, {0, 0, 0, 0}, {0, 0, 1, 1}, {0, 0, 0, 1}};
  constexpr int kQuads = 6;
  double worst_z = 0, row = 0;
  for (int n : {5, 10, 20}) {
    Rng rng(derive_seed(606, static_cast<std::uint64_t>(n)));
    std::vector<std::vector<double>> prod(kQuads, std::vector<double>(draws));
    for (int k = 0; k < draws; ++k) {
      const auto z = sample_constrained_goe(n, rng);
      row = std::max(row, z.entries.rowwise().sum().cwiseAbs().maxCoeff());
      for (int q = 0; q < kQuads; ++q)
        prod[q][k] = z.entries(quads[q][0], quads[q][1]) * z.entries(quads[q][2], quads[q][3]);
    }
    for (int q = 0; q < kQuads; ++q) {
      const Moments m = moments(prod[q]);
      const double exact = constrained_goe_covariance(n, quads[q][0], quads[q][1], quads[q][2], quads[q][3]);
      worst_z = std::max(worst_z, std::abs(m.mean - exact) / m.sem);
    }
  }
  double trivial = 0;
  for (double t : {0.05, 0.1, 0.3, 1.0}) {
    ExperimentConfig cfg = base(200, 3, 607);
    cfg.t = t;
    const SummaryReport r = gaussian_divisible_experiment(cfg);
    trivial = std::max(trivial, r.summary["max_trivial_error"].get<double>());
  }
  return {row <= 1e-12 && worst_z <= 5 && trivial <= 1e-10,
          fmt("row sums %.1e; max covariance deviation %.2f SE; lambda_1(H(t)) error %.1e", row, worst_z, trivial)};
}

std::vector<cplx> local_law_grid() {
  std::vector<cplx> g;
  for (double eta : {0.3, 1.0})
    for (double e : {-1.9, -1.5, -0.5, 0.0, 0.5, 1.5, 1.9}) g.emplace_back(e, eta);
  for (double e : {-2.5, 2.5}) g.emplace_back(e, 0.05);
  return g;
}

Outcome local_law() {
  ExperimentConfig cfg = base(1000, 20, 707);
  cfg.R = 3;
  cfg.z_grid = local_law_grid();
  const SummaryReport r = local_law_experiment(cfg);
  std::string detail =
      fmt("fraction %.2f; mean m_err %.3f, q_err %.3f, tree %.3f", r.summary["fraction_passing"].get<double>(),
          r.summary["m_err"]["mean"].get<double>(), r.summary["q_err"]["mean"].get<double>(),
          r.summary["max_tree_err"]["mean"].get<double>());
  // Report-only: bulk points at eta = 0.05.
  const RegularGraph g = sample_regular(3, 1000, cfg.sampler, derive_seed(707, 99));
  LocalLawProbe probe(g, 0.0, 1);
  double tree = 0, merr = 0;
  for (double e : {-1.5, 0.0, 1.5}) {
    const LocalLawReport rep = probe.evaluate(cplx(e, 0.05), 3);
    tree = std::max(tree, rep.max_tree_err);
    merr = std::max(merr, rep.m_err);
  }
  detail += fmt("; diagnostic eta=0.05 bulk: m_err %.3f, tree %.3f", merr, tree);
  return {r.pass, detail};
}

Outcome rigidity() {
  const SummaryReport r = rigidity_experiment(base(2000, 20, 808));
  return {r.pass, fmt("fraction within 15: %.2f; max statistic mean %.2f", r.summary["fraction_within_bound"].get<double>(),
                      r.summary["max_scaled"]["mean"].get<double>())};
}

Outcome edge() {
  ExperimentConfig cfg = base(4000, 200, 909);
  cfg.extremes = ExtremeMethod::lanczos;
  const SummaryReport r = edge_universality_experiment(cfg);
  const auto& a = r.summary["lambda2"];
  const auto& b = r.summary["minus_lambdaN"];
  return {r.pass, fmt("lambda_2: KS %.3f mean %.3f; -lambda_N: KS %.3f mean %.3f; correlation %.3f",
                      a["ks"].get<double>(), a["mean"].get<double>(), b["ks"].get<double>(), b["mean"].get<double>(),
                      r.summary["correlation"].get<double>())};
}

Outcome ramanujan() {
  const SummaryReport r = ramanujan_fraction(base(1000, 400, 1010));
  return {r.pass, fmt("fraction %.3f, 95%% CI [%.3f, %.3f], asymptotic target 0.69", r.summary["fraction"].get<double>(),
                      r.summary["ci95"][0].get<double>(), r.summary["ci95"][1].get<double>())};
}

Outcome exchangeability() {
  const auto good = reversibility_estimate(3, 8, 0, 0, 1000000, 1111, KernelVariant::faithful);
  const auto bad = reversibility_estimate(3, 8, 0, 0, 1000000, 1111, KernelVariant::skip_admissibility);
  return {good.pass && !bad.pass, fmt("faithful kernel max z %.2f (%lld moves); mutated kernel max z %.2f", good.max_z,
                                      static_cast<long long>(good.moves), bad.max_z)};
}

Outcome loop_equations() {
  ExperimentConfig cfg = base(200, 10000, 1212);
  const SummaryReport goe = loop_equation_check(cfg, LoopEnsemble::goe, cplx(0.5, 0.5));
  const SummaryReport trend = loop_equation_trend(base(500, 1, 1213), {{500, 400}, {2000, 80}});
  std::string detail = fmt("GOE |bracket| %.2e vs 3 SEM %.2e; edge bracket:", goe.summary["magnitude"].get<double>(),
                           3 * goe.summary["sem"].get<double>());
  for (const auto& t : trend.trials)
    detail += fmt(" n=%d %.3e +- %.1e", t["n"].get<int>(), t["magnitude"].get<double>(), t["sem"].get<double>());
  return {goe.pass && trend.pass, detail};
}

Outcome tw1_table() {
  const auto& table = Tw1Table::builtin();
  bool monotone = true;
  for (std::size_t k = 1; k < table.values().size(); ++k) monotone = monotone && table.values()[k] > table.values()[k - 1];
  const double f0 = tw1_cdf(0);
  double worst = 0;
  for (double s = -9.99; s < 6; s += 0.24) worst = std::max(worst, std::abs(tw1_cdf(s) - tw1_oracle::fredholm_cdf(s, 140)));
  return {monotone && f0 >= 0.828 && f0 <= 0.836 && worst <= 1e-4,
          fmt("monotone %s; F1(0) = %.5f; held-out interpolation error %.1e", monotone ? "yes" : "no", f0, worst)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"exact identities", identities},
      {"tree fixed points", fixed_points},
      {"Y expansion", expansion},
      {"known spectra and traces", known_spectra},
      {"free convolution", free_convolution},
      {"constrained GOE", constrained_goe},
      {"local laws", local_law},
      {"rigidity", rigidity},
      {"edge universality", edge},
      {"Ramanujan fraction", ramanujan},
      {"exchangeability", exchangeability},
      {"loop equations", loop_equations},
      {"TW1 table", tw1_table},
  };
  std::set<int> only;
  for (int k = 1; k < argc; ++k) only.insert(std::atoi(argv[k]));
  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const int id = static_cast<int>(k) + 1;
    if (!only.empty() && !only.count(id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failures += !o.pass;
    std::printf("%s %2d %s: %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", id, criteria[k].first, o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return failures ? 1 : 0;
}
