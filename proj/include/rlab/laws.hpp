#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "rlab/error.hpp"
#include "rlab/quadrature.hpp"

namespace rlab {

using cplx = std::complex<double>;

namespace detail {

inline void check_degree(int d) { require(d >= 3, Errc::bad_params, "d must be at least 3"); }

// sqrt(z-2) sqrt(z+2): the branch of sqrt(z^2-4) that behaves like z at
// infinity, analytic off [-2, 2].
inline cplx edge_sqrt(cplx z) {
  if (z.imag() == 0) z.imag(0.0);  // fold -0.0 onto the upper side
  return std::sqrt(z - 2.0) * std::sqrt(z + 2.0);
}

inline void check_off_support(cplx z) {
  if (z.imag() == 0 && std::abs(z.real()) <= 2.0)
    fail(Errc::on_support, "real spectral parameter inside [-2, 2]");
}

}  // namespace detail

/// Semicircle Stieltjes transform, the root of m^2 + z m + 1 = 0 with
/// Im m > 0 on the upper half-plane and |m| < 1 on the real axis.
inline cplx m_sc(cplx z) {
  detail::check_off_support(z);
  if (z.imag() < 0) return std::conj(m_sc(std::conj(z)));
  return -2.0 / (z + detail::edge_sqrt(z));
}

/// d/dz m_sc = -m / (2m + z).
inline cplx m_sc_prime(cplx z) {
  const cplx m = m_sc(z);
  return -m / (2.0 * m + z);
}

/// Kesten-McKay Stieltjes transform 1/(-z - d m_sc/(d-1)).
inline cplx m_d(int d, cplx z) {
  detail::check_degree(d);
  const double c = d / (d - 1.0);
  return 1.0 / (-z - c * m_sc(z));
}

/// The rationalized closed form (d-1)(-(d-2)z + d s)/(2(d^2 - (d-1)z^2)).
inline cplx m_d_closed_form(int d, cplx z) {
  detail::check_degree(d);
  detail::check_off_support(z);
  if (z.imag() < 0) return std::conj(m_d_closed_form(d, std::conj(z)));
  const cplx s = detail::edge_sqrt(z);
  return (d - 1.0) * (-(d - 2.0) * z + static_cast<double>(d) * s) /
         (2.0 * (static_cast<double>(d) * d - (d - 1.0) * z * z));
}

inline cplx m_d_prime(int d, cplx z) {
  const double c = d / (d - 1.0);
  const cplx m = m_d(d, z);
  return m * m * (1.0 + c * m_sc_prime(z));
}

/// A = d(d-1)/(d-2)^2.
inline double edge_constant(int d) {
  detail::check_degree(d);
  return d * (d - 1.0) / ((d - 2.0) * (d - 2.0));
}

inline double km_density(int d, double x) {
  detail::check_degree(d);
  if (std::abs(x) >= 2.0) return 0.0;
  return std::sqrt(4.0 - x * x) / (2.0 * std::numbers::pi * (1.0 + 1.0 / (d - 1.0) - x * x / d));
}

namespace detail {

// Integrand of the upper tail in theta, x = 2 cos(theta).
inline double km_theta_density(int d, double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  return 2.0 * s * s / (std::numbers::pi * (1.0 + 1.0 / (d - 1.0) - 4.0 * c * c / d));
}

inline const GaussLegendre& km_rule() {
  static const GaussLegendre rule = gauss_legendre(64);
  return rule;
}

// Panels keep the nearby complex poles of the integrand (d = 3) from
// limiting the accuracy.
inline double km_theta_mass(int d, double a, double b) {
  constexpr int kPanels = 4;
  const auto& rule = km_rule();
  double s = 0;
  for (int p = 0; p < kPanels; ++p) {
    const double lo = a + (b - a) * p / kPanels, hi = a + (b - a) * (p + 1) / kPanels;
    s += rule.integrate([&](double th) { return km_theta_density(d, th); }, lo, hi);
  }
  return s;
}

}  // namespace detail

/// Mass of rho_d on [x, 2].
inline double km_upper_cdf(int d, double x) {
  detail::check_degree(d);
  if (x >= 2.0) return 0.0;
  if (x <= -2.0) return 1.0;
  return detail::km_theta_mass(d, 0.0, std::acos(x / 2.0));
}

/// gamma_2 > ... > gamma_N solving mass(gamma_i, 2) = (i - 3/2)/(N - 1): midpoint
/// quantiles of the N - 1 nontrivial eigenvalues, so gamma_i = -gamma_{N+2-i}.
inline std::vector<double> classical_locations(int d, int n) {
  detail::check_degree(d);
  require(n >= 3, Errc::bad_params, "need n >= 3");
  constexpr int kTable = 512;
  std::array<double, kTable + 1> theta{}, mass{};
  for (int k = 0; k <= kTable; ++k) theta[k] = std::numbers::pi * k / kTable;
  mass[0] = 0;
  for (int k = 1; k <= kTable; ++k) mass[k] = mass[k - 1] + detail::km_theta_mass(d, theta[k - 1], theta[k]);

  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n - 1));
  for (int i = 2; i <= n; ++i) {
    const double target = (i - 1.5) / (n - 1.0);
    const auto it = std::upper_bound(mass.begin(), mass.end(), target);
    const int k = std::clamp(static_cast<int>(it - mass.begin()), 1, kTable);
    double lo = theta[k - 1], hi = theta[k];
    const double base = mass[k - 1];
    // Newton in theta inside the bracket, with bisection as the fallback.
    double th = 0.5 * (lo + hi);
    for (int iter = 0; iter < 100; ++iter) {
      const double f = base + detail::km_theta_mass(d, theta[k - 1], th) - target;
      if (std::abs(f) <= 1e-15) break;
      if (f > 0)
        hi = th;
      else
        lo = th;
      const double step = th - f / detail::km_theta_density(d, th);
      th = (step > lo && step < hi) ? step : 0.5 * (lo + hi);
      if (hi - lo < 1e-16) break;
    }
    out.push_back(2.0 * std::cos(th));
  }
  return out;
}

struct FreeConvolutionPoint {
  int d = 3;
  cplx z;
  double t = 0;
  cplx m;    // m_d(z, t)
  cplx z_t;  // z + t m
  int iterations = 0;
  double residual = 0;
};

/// Solves m = m_d(z + t m) by damped Newton from m_d(z).
inline FreeConvolutionPoint free_conv_m(int d, cplx z, double t) {
  detail::check_degree(d);
  require(z.imag() > 0, Errc::bad_params, "free convolution needs Im z > 0");
  require(t >= 0, Errc::bad_params, "t must be non-negative");
  FreeConvolutionPoint p;
  p.d = d;
  p.z = z;
  p.t = t;
  cplx m = m_d(d, z);
  auto residual = [&](cplx x) { return x - m_d(d, z + t * x); };
  cplx f = residual(m);
  int it = 0;
  for (; it < 500 && std::abs(f) > 1e-14; ++it) {
    const cplx fp = 1.0 - t * m_d_prime(d, z + t * m);
    cplx step = f / fp;
    double damping = 1.0;
    cplx next = m - step;
    cplx fn;
    for (int half = 0; half < 60; ++half) {
      if (next.imag() > 0) {
        fn = residual(next);
        if (std::abs(fn) < std::abs(f)) break;
      }
      damping *= 0.5;
      next = m - damping * step;
    }
    if (!(next.imag() > 0)) fail(Errc::no_convergence, "free convolution left the upper half-plane");
    fn = residual(next);
    m = next;
    f = fn;
  }
  if (std::abs(f) > 1e-12) fail(Errc::no_convergence, "free convolution fixed point did not converge");
  p.m = m;
  p.z_t = z + t * m;
  p.iterations = it;
  p.residual = std::abs(f);
  return p;
}

struct EdgeData {
  int d = 3;
  double t = 0;
  double xi_t = 2;
  double E_t = 2;
  double edge_constant = 0;
};

/// xi_t > 2 with m_d'(xi_t) = 1/t, and E_t = xi_t - t m_d(xi_t).
inline EdgeData edge_location(int d, double t) {
  detail::check_degree(d);
  require(t > 0 && t <= 1, Errc::bad_params, "edge location needs 0 < t <= 1");
  auto g = [&](double xi) { return m_d_prime(d, cplx(xi, 0)).real() - 1.0 / t; };
  double lo = 2.0, hi = 2.0 + 10.0 * t;
  for (int grow = 0; g(hi) > 0; ++grow) {
    if (grow > 60) fail(Errc::no_root, "could not bracket xi_t");
    lo = hi;
    hi = 2.0 + 2.0 * (hi - 2.0);
  }
  // m_d' decreases on (2, inf) from +inf; bisection to machine precision.
  for (int it = 0; it < 200 && hi - lo > 0; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (mid == 2.0 || g(mid) > 0)
      lo = mid;
    else
      hi = mid;
  }
  EdgeData e;
  e.d = d;
  e.t = t;
  e.xi_t = 0.5 * (lo + hi);
  e.E_t = e.xi_t - t * m_d(d, cplx(e.xi_t, 0)).real();
  e.edge_constant = edge_constant(d);
  return e;
}

}  // namespace rlab
