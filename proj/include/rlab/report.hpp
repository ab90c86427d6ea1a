#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rlab/error.hpp"
#include "rlab/rng.hpp"

namespace rlab {

inline constexpr const char* kCodeVersion = "ramanujan-lab 1.0.0";

using json = nlohmann::json;

/// Experiment output: per-trial records plus a summary. `params` holds the
/// fully resolved configuration.
struct SummaryReport {
  std::string experiment;
  json params = json::object();
  std::uint64_t seed = 0;
  std::vector<json> trials;
  json summary = json::object();
  json provenance = json::object();
  bool pass = true;

  json to_json() const {
    json j;
    j["experiment"] = experiment;
    j["params"] = params;
    j["seed"] = seed;
    j["trials"] = trials;
    j["summary"] = summary;
    j["pass"] = pass;
    json prov = provenance;
    prov["code_version"] = kCodeVersion;
    prov["rng"] = std::string(kRngAlgorithm);
    j["provenance"] = prov;
    return j;
  }

  static SummaryReport from_json(const json& j) {
    SummaryReport r;
    r.experiment = j.at("experiment").get<std::string>();
    r.params = j.at("params");
    r.seed = j.at("seed").get<std::uint64_t>();
    r.trials = j.at("trials").get<std::vector<json>>();
    r.summary = j.at("summary");
    r.pass = j.at("pass").get<bool>();
    r.provenance = j.at("provenance");
    return r;
  }
};

namespace detail {

inline void format_double(std::string& out, double v) {
  if (!std::isfinite(v)) {
    out += "null";
    return;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s(buf);
  // Keep floats recognizable as floats on read-back.
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  out += s;
}

inline void dump_stable(const json& j, std::string& out, int indent, int level) {
  const std::string pad(static_cast<std::size_t>(indent * (level + 1)), ' ');
  const std::string close_pad(static_cast<std::size_t>(indent * level), ' ');
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {  // std::map order: sorted keys
        if (!first) out += ",\n";
        first = false;
        out += pad + json(it.key()).dump() + ": ";
        dump_stable(it.value(), out, indent, level + 1);
      }
      out += "\n" + close_pad + "}";
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      for (std::size_t k = 0; k < j.size(); ++k) {
        if (k) out += ",\n";
        out += pad;
        dump_stable(j[k], out, indent, level + 1);
      }
      out += "\n" + close_pad + "]";
      return;
    }
    case json::value_t::number_float:
      format_double(out, j.get<double>());
      return;
    default:
      out += j.dump();
  }
}

}  // namespace detail

/// Deterministic JSON text: sorted keys, doubles with 17 significant digits.
inline std::string stable_dump(const json& j, int indent = 2) {
  std::string out;
  detail::dump_stable(j, out, indent, 0);
  out += '\n';
  return out;
}

/// One CSV row per trial, columns = the sorted scalar keys of the first
/// trial record.
inline std::string trials_csv(const SummaryReport& r) {
  std::ostringstream os;
  if (r.trials.empty()) return {};
  std::vector<std::string> cols;
  for (auto it = r.trials.front().begin(); it != r.trials.front().end(); ++it)
    if (it.value().is_primitive()) cols.push_back(it.key());
  for (std::size_t c = 0; c < cols.size(); ++c) os << (c ? "," : "") << cols[c];
  os << '\n';
  for (const auto& t : r.trials) {
    for (std::size_t c = 0; c < cols.size(); ++c) {
      if (c) os << ',';
      const auto& v = t.contains(cols[c]) ? t.at(cols[c]) : json();
      if (v.is_number_float()) {
        std::string s;
        detail::format_double(s, v.get<double>());
        os << s;
      } else if (v.is_string()) {
        os << v.get<std::string>();
      } else if (!v.is_null()) {
        os << v.dump();
      }
    }
    os << '\n';
  }
  return os.str();
}

enum class ReportFormat { json, csv };

inline ReportFormat parse_format(const std::string& s) {
  if (s == "json") return ReportFormat::json;
  if (s == "csv") return ReportFormat::csv;
  fail(Errc::bad_params, "unknown format '" + s + "'");
}

inline std::string render_report(const SummaryReport& r, ReportFormat f) {
  return f == ReportFormat::json ? stable_dump(r.to_json()) : trials_csv(r);
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), Errc::io_error, "cannot write " + path);
  out << text;
  require(static_cast<bool>(out), Errc::io_error, "write failed for " + path);
}

inline void write_report(const SummaryReport& r, const std::string& path, ReportFormat f) {
  write_text_file(path, render_report(r, f));
}

inline SummaryReport read_report(const std::string& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), Errc::io_error, "cannot open " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    fail(Errc::parse_error, std::string("bad report JSON: ") + e.what());
  }
  return SummaryReport::from_json(j);
}

}  // namespace rlab
