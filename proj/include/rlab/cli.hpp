#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rlab/error.hpp"
#include "rlab/experiments.hpp"
#include "rlab/graph_io.hpp"
#include "rlab/laws.hpp"
#include "rlab/local_law.hpp"
#include "rlab/report.hpp"
#include "rlab/resampling.hpp"
#include "rlab/sampler.hpp"
#include "rlab/spectral.hpp"

namespace rlab::cli {

enum ExitCode : int { kOk = 0, kThresholdFailed = 1, kUsage = 2 };

/// Default spectral grid for `locallaw`: bulk points at eta in {0.3, 1}
/// and points outside the spectrum at eta = 0.05.
inline std::vector<cplx> default_local_law_grid() {
  std::vector<cplx> g;
  for (double eta : {0.3, 1.0})
    for (double e : {-1.9, -1.5, -0.5, 0.0, 0.5, 1.5, 1.9}) g.emplace_back(e, eta);
  for (double e : {-2.5, 2.5}) g.emplace_back(e, 0.05);
  return g;
}

inline std::vector<cplx> default_identity_grid() { return {cplx(0, 1), cplx(0.5, 0.5), cplx(2, 0.1)}; }

struct Params {
  int d = 3;
  int n = 100;
  int trials = 1;
  std::uint64_t seed = 1;
  int ell = 1;
  int radius = 3;
  double t = 0;
  double z_re = 0;
  double z_im = 1;
  std::string in;
  std::string out;
  std::string format = "json";
  int jobs = 1;
  std::string method;
  std::string config;
  std::string ensemble = "goe";
  int center = 0;
};

namespace detail {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Command {
  CLI::App* app = nullptr;
  Params p;
  std::vector<std::string> flags;  // option names (without dashes) accepted by this command
};

inline void add(Command& c, const std::string& name, auto& field, const std::string& help) {
  c.app->add_option("--" + name, field, help)->capture_default_str();
  c.flags.push_back(name);
}

inline void add_graph_source(Command& c) {
  add(c, "d", c.p.d, "degree");
  add(c, "n", c.p.n, "vertex count");
  add(c, "seed", c.p.seed, "master seed");
  add(c, "method", c.p.method, "sampler: pairing or switch_chain (default: pairing for d <= 5)");
}

inline void add_experiment(Command& c) {
  add_graph_source(c);
  add(c, "trials", c.p.trials, "number of trials");
  add(c, "jobs", c.p.jobs, "worker threads; output does not depend on it");
  add(c, "out", c.p.out, "output path (default: standard output)");
  add(c, "format", c.p.format, "report format: json or csv");
}

inline void add_z(Command& c) {
  add(c, "z-re", c.p.z_re, "real part of the spectral parameter");
  add(c, "z-im", c.p.z_im, "imaginary part of the spectral parameter");
}

inline json flag_value(const CLI::Option* opt) {
  const auto r = opt->results();
  return r.empty() ? json() : json(r.front());
}

/// Applies `--config` values for every flag not given on the command line.
inline void merge_config(Command& c) {
  if (c.p.config.empty()) return;
  std::ifstream in(c.p.config);
  if (!in) throw UsageError("cannot open config " + c.p.config);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw UsageError(std::string("bad config JSON: ") + e.what());
  }
  if (!j.is_object()) throw UsageError("config must be a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (it.key() == "config") throw UsageError("config files cannot nest");
    CLI::Option* opt = c.app->get_option_no_throw("--" + it.key());
    if (!opt) throw UsageError("unknown config key '" + it.key() + "'");
    if (opt->count() > 0) continue;  // the command line wins
    const json& v = it.value();
    const std::string text = v.is_string() ? v.get<std::string>() : v.dump();
    opt->add_result(text);
    try {
      opt->run_callback();
    } catch (const CLI::Error& e) {
      throw UsageError("bad config value for '" + it.key() + "': " + e.what());
    }
  }
}

inline SamplerConfig sampler_for(const Params& p) {
  SamplerConfig s = SamplerConfig::defaults_for(p.d);
  if (!p.method.empty()) s.method = parse_method(p.method);
  return s;
}

inline json resolved(const Command& c) {
  json j;
  j["command"] = c.app->get_name();
  for (const auto& name : c.flags) {
    if (name == "config") continue;
    const CLI::Option* opt = c.app->get_option("--" + name);
    json v;
    if (name == "d") v = c.p.d;
    else if (name == "n") v = c.p.n;
    else if (name == "trials") v = c.p.trials;
    else if (name == "seed") v = c.p.seed;
    else if (name == "ell") v = c.p.ell;
    else if (name == "radius") v = c.p.radius;
    else if (name == "t") v = c.p.t;
    else if (name == "z-re") v = c.p.z_re;
    else if (name == "z-im") v = c.p.z_im;
    else if (name == "jobs") v = c.p.jobs;
    else if (name == "center") v = c.p.center;
    else if (name == "method")
      v = sampler_for(c.p).method == SamplerMethod::pairing_rejection ? "pairing" : "switch_chain";
    else v = flag_value(opt).is_null() ? json(opt->get_default_str()) : flag_value(opt);
    j[name] = v;
  }
  return j;
}

inline bool given(const Command& c, const std::string& name) {
  const CLI::Option* opt = c.app->get_option_no_throw("--" + name);
  return opt && opt->count() > 0;
}

inline ExperimentConfig experiment_config(const Command& c) {
  ExperimentConfig cfg;
  cfg.d = c.p.d;
  cfg.n = c.p.n;
  cfg.trials = c.p.trials;
  cfg.seed = c.p.seed;
  cfg.jobs = c.p.jobs;
  cfg.ell = c.p.ell;
  cfg.R = c.p.radius;
  cfg.t = c.p.t;
  cfg.sampler = sampler_for(c.p);
  if (given(c, "z-re") || given(c, "z-im")) cfg.z_grid = {cplx(c.p.z_re, c.p.z_im)};
  return cfg;
}

inline RegularGraph input_graph(const Params& p) {
  if (!p.in.empty()) return read_rrg1_file(p.in);
  return sample_regular(p.d, p.n, sampler_for(p), p.seed);
}

inline void emit(const Params& p, const std::string& text, std::ostream& out) {
  if (p.out.empty())
    out << text;
  else
    write_text_file(p.out, text);
}

inline std::string format_double(double v) {
  std::string s;
  rlab::detail::format_double(s, v);
  return s;
}

inline int finish(const Command& c, SummaryReport r, std::ostream& out, std::ostream& err) {
  r.params["cli"] = resolved(c);
  const ReportFormat f = parse_format(c.p.format);
  emit(c.p, render_report(r, f), out);
  if (f == ReportFormat::csv) err << "# config " << resolved(c).dump() << '\n';
  return r.pass ? kOk : kThresholdFailed;
}

}  // namespace detail

/// Entry point of the `ramanujan-lab` tool. Returns the process exit code:
/// 0 when every threshold is met, 1 when one fails, 2 on usage errors.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Spectral experiments on random regular graphs", "ramanujan-lab"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kCodeVersion));
  std::vector<detail::Command> cmds;
  cmds.reserve(10);
  auto command = [&](const std::string& name, const std::string& help, int n, int trials) -> detail::Command& {
    cmds.emplace_back();
    auto& c = cmds.back();
    c.app = app.add_subcommand(name, help);
    c.p.n = n;
    c.p.trials = trials;
    detail::add(c, "config", c.p.config, "JSON file of flag values; flags given on the command line win");
    return c;
  };

  auto& sample = command("sample", "sample a random d-regular graph and write it as RRG1", 100, 1);
  detail::add_graph_source(sample);
  detail::add(sample, "out", sample.p.out, "output path (default: standard output)");

  auto& spectrum = command("spectrum", "eigenvalues of the normalized adjacency matrix, descending", 100, 1);
  detail::add_graph_source(spectrum);
  detail::add(spectrum, "in", spectrum.p.in, "RRG1 graph (default: sample one)");
  detail::add(spectrum, "out", spectrum.p.out, "output path (default: standard output)");
  spectrum.p.format = "csv";
  detail::add(spectrum, "format", spectrum.p.format, "csv or json");

  auto& rigidity = command("rigidity", "eigenvalue rigidity against the classical locations", 2000, 20);
  detail::add_experiment(rigidity);

  auto& edge = command("edge", "edge statistics of lambda_2 and lambda_N against Tracy-Widom", 4000, 200);
  detail::add_experiment(edge);

  auto& ramanujan = command("ramanujan", "fraction of sampled graphs that are Ramanujan", 1000, 400);
  detail::add_experiment(ramanujan);

  auto& locallaw = command("locallaw", "resolvent entries against tree Green's functions", 1000, 20);
  detail::add_experiment(locallaw);
  detail::add(locallaw, "in", locallaw.p.in, "RRG1 graph: report on this graph only");
  detail::add(locallaw, "radius", locallaw.p.radius, "ball radius of the tree approximation");
  detail::add(locallaw, "t", locallaw.p.t, "Gaussian component: H + sqrt(t) Z");
  detail::add_z(locallaw);

  auto& sw = command("switch", "one local resampling step around a center", 100, 1);
  detail::add_graph_source(sw);
  detail::add(sw, "in", sw.p.in, "RRG1 graph (default: sample one)");
  detail::add(sw, "out", sw.p.out, "write the switched graph here as RRG1");
  detail::add(sw, "ell", sw.p.ell, "radius of the resampled ball");
  sw.p.radius = 0;
  detail::add(sw, "radius", sw.p.radius, "admissibility radius R");
  detail::add(sw, "center", sw.p.center, "center vertex");

  auto& freeconv = command("freeconv", "free convolution of Kesten-McKay with a semicircle", 0, 1);
  detail::add(freeconv, "d", freeconv.p.d, "degree");
  freeconv.p.t = 0.1;
  detail::add(freeconv, "t", freeconv.p.t, "semicircle variance");
  detail::add_z(freeconv);
  detail::add(freeconv, "out", freeconv.p.out, "output path (default: standard output)");

  auto& loopcheck = command("loopcheck", "first-order loop equation brackets", 200, 10000);
  detail::add_experiment(loopcheck);
  detail::add(loopcheck, "ensemble", loopcheck.p.ensemble, "goe or rrg_edge");
  detail::add_z(loopcheck);

  auto& identities = command("identities", "exact resolvent identities on randomized fixtures", 200, 50);
  detail::add_experiment(identities);
  identities.p.ell = 1;
  identities.p.radius = 4;
  detail::add(identities, "ell", identities.p.ell, "radius of the resampled ball");
  detail::add(identities, "radius", identities.p.radius, "admissibility radius R");
  detail::add_z(identities);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  detail::Command* c = nullptr;
  for (auto& cmd : cmds)
    if (cmd.app->parsed()) c = &cmd;
  if (!c) return kUsage;
  const std::string name = c->app->get_name();
  const Params& p = c->p;

  try {
    detail::merge_config(*c);
    if (name == "sample") {
      const RegularGraph g = detail::input_graph(p);
      detail::emit(p, to_rrg1(g), out);
      err << "# config " << detail::resolved(*c).dump() << '\n';
      return kOk;
    }
    if (name == "spectrum") {
      const RegularGraph g = detail::input_graph(p);
      const auto spec = full_spectrum(NormalizedAdjacency(g), false);
      const ReportFormat f = parse_format(p.format);
      std::string text;
      if (f == ReportFormat::csv) {
        text = "index,eigenvalue\n";
        for (int k = 0; k < spec.size(); ++k)
          text += std::to_string(k + 1) + "," + detail::format_double(spec.eigenvalues[k]) + "\n";
        err << "# config " << detail::resolved(*c).dump() << '\n';
      } else {
        json j;
        j["config"] = detail::resolved(*c);
        j["d"] = g.degree();
        j["n"] = g.vertex_count();
        j["eigenvalues"] = std::vector<double>(spec.eigenvalues.begin(), spec.eigenvalues.end());
        text = stable_dump(j);
      }
      detail::emit(p, text, out);
      return kOk;
    }
    if (name == "rigidity") return detail::finish(*c, rigidity_experiment(detail::experiment_config(*c)), out, err);
    if (name == "edge") return detail::finish(*c, edge_universality_experiment(detail::experiment_config(*c)), out, err);
    if (name == "ramanujan") return detail::finish(*c, ramanujan_fraction(detail::experiment_config(*c)), out, err);
    if (name == "locallaw") {
      ExperimentConfig cfg = detail::experiment_config(*c);
      if (!detail::given(*c, "z-re") && !detail::given(*c, "z-im")) cfg.z_grid = default_local_law_grid();
      if (p.in.empty()) return detail::finish(*c, local_law_experiment(cfg), out, err);
      const RegularGraph g = read_rrg1_file(p.in);
      LocalLawProbe probe(g, cfg.t, cfg.seed, cfg.dense_cap);
      json j;
      j["config"] = detail::resolved(*c);
      j["reports"] = json::array();
      bool pass = true;
      for (cplx z : cfg.z_grid) {
        const LocalLawReport rep = probe.evaluate(z, cfg.R);
        pass = pass && rep.m_err <= kLocalMBound && rep.q_err <= kLocalQBound && rep.max_tree_err <= kLocalTreeBound;
        j["reports"].push_back(rep.to_json());
      }
      j["pass"] = pass;
      detail::emit(p, stable_dump(j), out);
      return pass ? kOk : kThresholdFailed;
    }
    if (name == "switch") {
      const RegularGraph g = detail::input_graph(p);
      require(p.center >= 0 && p.center < g.vertex_count(), Errc::bad_index, "center out of range");
      const ResamplingData s = propose_resampling(g, static_cast<Vertex>(p.center), p.ell, derive_seed(p.seed, 1));
      const AdmissibleSet w = admissible_set(g, s, p.radius);
      const RegularGraph g2 = apply_resampling(g, s, w);
      json j;
      j["config"] = detail::resolved(*c);
      j["resampling"] = to_json(s, &w);
      j["changed"] = !(g2 == g);
      if (!p.out.empty()) write_rrg1_file(p.out, g2);
      out << stable_dump(j);
      return kOk;
    }
    if (name == "freeconv") {
      const cplx z(p.z_re, p.z_im);
      const FreeConvolutionPoint fc = free_conv_m(p.d, z, p.t);
      json j;
      j["config"] = detail::resolved(*c);
      j["m"] = {fc.m.real(), fc.m.imag()};
      j["z_t"] = {fc.z_t.real(), fc.z_t.imag()};
      j["iterations"] = fc.iterations;
      j["residual"] = fc.residual;
      if (p.t > 0) {
        const EdgeData e = edge_location(p.d, p.t);
        j["xi_t"] = e.xi_t;
        j["E_t"] = e.E_t;
      }
      j["edge_constant"] = edge_constant(p.d);
      j["pass"] = fc.residual <= 1e-12;
      detail::emit(p, stable_dump(j), out);
      return fc.residual <= 1e-12 ? kOk : kThresholdFailed;
    }
    if (name == "loopcheck") {
      const ExperimentConfig cfg = detail::experiment_config(*c);
      const LoopEnsemble ens = parse_ensemble(p.ensemble);
      std::optional<cplx> z;
      if (detail::given(*c, "z-re") || detail::given(*c, "z-im")) z = cplx(p.z_re, p.z_im);
      else if (ens == LoopEnsemble::goe) z = cplx(0.5, 0.5);
      return detail::finish(*c, loop_equation_check(cfg, ens, z), out, err);
    }
    if (name == "identities") {
      ExperimentConfig cfg = detail::experiment_config(*c);
      if (!detail::given(*c, "z-re") && !detail::given(*c, "z-im")) cfg.z_grid = default_identity_grid();
      return detail::finish(*c, identity_suite(cfg), out, err);
    }
  } catch (const detail::UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    err << "error [" << errc_name(e.code()) << "]: " << e.what() << '\n';
    switch (e.code()) {
      case Errc::no_convergence:
      case Errc::singular_system:
      case Errc::rejection_budget_exceeded:
      case Errc::internal_inconsistency:
        return kThresholdFailed;
      default:
        return kUsage;
    }
  }
  return kUsage;
}

}  // namespace rlab::cli
