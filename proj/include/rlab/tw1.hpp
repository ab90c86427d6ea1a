#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "rlab/error.hpp"
#include "rlab/quadrature.hpp"
#include "rlab/tw1_v1_data.hpp"  // generated: kTw1V1Csv

namespace rlab {

/// Tabulated Tracy-Widom (beta = 1) CDF with monotone cubic interpolation
/// and asymptotic tails outside the grid.
class Tw1Table {
 public:
  /// Parses "s,F1" rows; lines starting with '#' and the header are skipped.
  static Tw1Table parse(std::string_view csv) {
    Tw1Table t;
    std::size_t pos = 0;
    while (pos < csv.size()) {
      std::size_t end = csv.find('\n', pos);
      if (end == std::string_view::npos) end = csv.size();
      std::string_view line = csv.substr(pos, end - pos);
      pos = end + 1;
      while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.remove_suffix(1);
      if (line.empty() || line.front() == '#' || line == "s,F1") continue;
      const auto comma = line.find(',');
      require(comma != std::string_view::npos, Errc::parse_error, "bad TW1 row: " + std::string(line));
      t.s_.push_back(parse_double(line.substr(0, comma)));
      t.f_.push_back(parse_double(line.substr(comma + 1)));
    }
    require(t.s_.size() >= 3, Errc::parse_error, "TW1 table too short");
    for (std::size_t k = 1; k < t.s_.size(); ++k)
      require(t.s_[k] > t.s_[k - 1], Errc::parse_error, "TW1 grid must be strictly increasing");
    t.build_slopes();
    return t;
  }

  static const Tw1Table& builtin() {
    static const Tw1Table table = parse(kTw1V1Csv);
    return table;
  }

  const std::vector<double>& grid() const { return s_; }
  const std::vector<double>& values() const { return f_; }

  double cdf(double s) const {
    if (s <= s_.front()) return f_.front() * left_shape(s) / left_shape(s_.front());
    if (s >= s_.back()) return 1.0 - (1.0 - f_.back()) * right_shape(s) / right_shape(s_.back());
    const std::size_t k = static_cast<std::size_t>(std::upper_bound(s_.begin(), s_.end(), s) - s_.begin()) - 1;
    const double h = s_[k + 1] - s_[k];
    const double u = (s - s_[k]) / h;
    const double u2 = u * u, u3 = u2 * u;
    return (2 * u3 - 3 * u2 + 1) * f_[k] + (u3 - 2 * u2 + u) * h * m_[k] + (-2 * u3 + 3 * u2) * f_[k + 1] +
           (u3 - u2) * h * m_[k + 1];
  }

  /// Mean b - int_a^b F + int_b^inf (1 - F) - int_-inf^a F, with the
  /// interpolant integrated exactly on [a, b] and the tail models beyond.
  double mean() const {
    double integral = 0;
    for (std::size_t k = 0; k + 1 < s_.size(); ++k) {
      const double h = s_[k + 1] - s_[k];
      integral += h * (f_[k] + f_[k + 1]) / 2 + h * h * (m_[k] - m_[k + 1]) / 12;
    }
    const GaussLegendre rule = gauss_legendre(64);
    const double a = s_.front(), b = s_.back();
    const double left = rule.integrate([&](double s) { return cdf(s); }, a - 8.0, a);
    const double right = rule.integrate([&](double s) { return 1.0 - cdf(s); }, b, b + 8.0);
    return b - integral + right - left;
  }

 private:
  static double parse_double(std::string_view text) {
    while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
    double v = 0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    require(res.ec == std::errc() && res.ptr == text.data() + text.size(), Errc::parse_error,
            "bad number in TW1 table: " + std::string(text));
    return v;
  }

  // Left tail |s|^{-1/16} exp(-|s|^3/24 - |s|^{3/2}/(3 sqrt 2)).
  static double left_shape(double s) {
    const double a = -s;
    return std::pow(a, -1.0 / 16.0) * std::exp(-a * a * a / 24.0 - std::pow(a, 1.5) / (3.0 * std::numbers::sqrt2));
  }

  // Right tail of 1 - F: s^{-3/4} exp(-(2/3) s^{3/2}).
  static double right_shape(double s) { return std::pow(s, -0.75) * std::exp(-2.0 / 3.0 * std::pow(s, 1.5)); }

  // Fritsch-Butland slopes (the PCHIP rule), which keep the interpolant
  // monotone between monotone data.
  void build_slopes() {
    const std::size_t n = s_.size();
    std::vector<double> h(n - 1), delta(n - 1);
    for (std::size_t k = 0; k + 1 < n; ++k) {
      h[k] = s_[k + 1] - s_[k];
      delta[k] = (f_[k + 1] - f_[k]) / h[k];
    }
    m_.assign(n, 0.0);
    for (std::size_t k = 1; k + 1 < n; ++k) {
      if (delta[k - 1] * delta[k] <= 0) continue;
      const double w1 = 2 * h[k] + h[k - 1], w2 = h[k] + 2 * h[k - 1];
      m_[k] = (w1 + w2) / (w1 / delta[k - 1] + w2 / delta[k]);
    }
    auto end_slope = [](double h0, double h1, double d0, double d1) {
      double m = ((2 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
      if (m * d0 <= 0) return 0.0;
      if (d0 * d1 <= 0 && std::abs(m) > std::abs(3 * d0)) return 3 * d0;
      return m;
    };
    m_[0] = end_slope(h[0], h[1], delta[0], delta[1]);
    m_[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
  }

  std::vector<double> s_, f_, m_;
};

inline double tw1_cdf(double s) { return Tw1Table::builtin().cdf(s); }

}  // namespace rlab
