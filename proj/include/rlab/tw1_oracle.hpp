#pragma once

// Tracy-Widom (beta = 1) CDF from the Fredholm determinant
//   F1(s) = det(I - K_s) on L^2(0, inf),  K_s(x, y) = Ai((x + y)/2 + s) / 2,
// discretized by Gauss-Legendre (Bornemann's method). Used offline to build
// the embedded table and by the tests; needs Boost.Math.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/special_functions/airy.hpp>

#include "rlab/quadrature.hpp"

namespace rlab::tw1_oracle {

inline double fredholm_cdf(double s, int nodes = 100) {
  const double length = std::max(14.0, 14.0 - s);
  const GaussLegendre rule = gauss_legendre(nodes);
  std::vector<double> x(nodes), sw(nodes);
  for (int i = 0; i < nodes; ++i) {
    x[i] = 0.5 * length * (rule.nodes[i] + 1.0);
    sw[i] = std::sqrt(0.5 * length * rule.weights[i]);
  }
  Eigen::MatrixXd a(nodes, nodes);
  for (int i = 0; i < nodes; ++i)
    for (int j = 0; j <= i; ++j) {
      const double k = 0.5 * boost::math::airy_ai(0.5 * (x[i] + x[j]) + s);
      a(i, j) = a(j, i) = -sw[i] * k * sw[j];
    }
  a.diagonal().array() += 1.0;
  return a.partialPivLu().determinant();
}

/// Leading left-tail shape |s|^{-1/16} exp(-|s|^3/24 - |s|^{3/2}/(3 sqrt 2)),
/// without its constant.
inline double left_tail_shape(double s) {
  const double a = -s;
  return std::pow(a, -1.0 / 16.0) * std::exp(-a * a * a / 24.0 - std::pow(a, 1.5) / (3.0 * std::numbers::sqrt2));
}

/// Leading right-tail shape s^{-3/4} exp(-(2/3) s^{3/2}) / (4 sqrt(pi)) of
/// 1 - F1(s).
inline double right_tail_shape(double s) {
  return std::pow(s, -0.75) * std::exp(-2.0 / 3.0 * std::pow(s, 1.5)) / (4.0 * std::sqrt(std::numbers::pi));
}

/// The determinant keeps about six significant digits down to s = -10
/// with this many nodes.
inline constexpr int kTableNodes = 140;

inline double cdf(double s) { return fredholm_cdf(s, kTableNodes); }

}  // namespace rlab::tw1_oracle
