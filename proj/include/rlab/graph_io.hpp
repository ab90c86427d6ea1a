#pragma once

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "rlab/graph.hpp"

namespace rlab {

// RRG1 text format:
//   RRG1 <d> <n> <m>
//   <u> <v>            (m lines, u < v, lexicographically sorted)

inline void write_rrg1(std::ostream& out, const RegularGraph& g) {
  const auto edges = g.edges();
  out << "RRG1 " << g.degree() << ' ' << g.vertex_count() << ' ' << edges.size() << '\n';
  for (const Edge& e : edges) out << e.u << ' ' << e.v << '\n';
}

inline std::string to_rrg1(const RegularGraph& g) {
  std::ostringstream os;
  write_rrg1(os, g);
  return os.str();
}

inline RegularGraph read_rrg1(std::istream& in) {
  std::string line;
  require(static_cast<bool>(std::getline(in, line)), Errc::parse_error, "empty RRG1 input");
  std::istringstream header(line);
  std::string magic;
  long long d = 0, n = 0, m = 0;
  require(static_cast<bool>(header >> magic >> d >> n >> m) && magic == "RRG1", Errc::parse_error,
          "bad RRG1 header: '" + line + "'");
  std::string trailing;
  require(!(header >> trailing), Errc::parse_error, "trailing tokens in RRG1 header");
  require(d > 0 && n > 0 && m >= 0 && d < (1LL << 30) && n < (1LL << 30), Errc::parse_error,
          "RRG1 header values out of range");
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(m));
  for (long long k = 0; k < m; ++k) {
    require(static_cast<bool>(std::getline(in, line)), Errc::parse_error,
            "RRG1 truncated after " + std::to_string(k) + " edges");
    std::istringstream row(line);
    long long u = 0, v = 0;
    require(static_cast<bool>(row >> u >> v) && !(row >> trailing), Errc::parse_error,
            "bad RRG1 edge line: '" + line + "'");
    require(u >= 0 && v >= 0 && u < n && v < n, Errc::bad_index, "RRG1 edge out of range: '" + line + "'");
    edges.push_back(Edge::of(static_cast<Vertex>(u), static_cast<Vertex>(v)));
  }
  while (std::getline(in, line))
    require(line.find_first_not_of(" \t\r") == std::string::npos, Errc::parse_error,
            "unexpected content after RRG1 edge list");
  require(m == n * d / 2, Errc::not_regular, "edge count does not match n*d/2");
  return build_graph(static_cast<int>(d), static_cast<int>(n), edges);
}

inline RegularGraph read_rrg1_file(const std::string& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), Errc::io_error, "cannot open " + path);
  return read_rrg1(in);
}

inline void write_rrg1_file(const std::string& path, const RegularGraph& g) {
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), Errc::io_error, "cannot write " + path);
  write_rrg1(out, g);
  require(static_cast<bool>(out), Errc::io_error, "write failed for " + path);
}

}  // namespace rlab
