#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <vector>

#include "rlab/error.hpp"

namespace rlab {

/// Two-sided Kolmogorov distance between the empirical CDF of `samples`
/// and `cdf`, checked on both sides of every jump. Sorts a copy.
inline double ks_distance(std::span<const double> samples, const std::function<double(double)>& cdf) {
  require(!samples.empty(), Errc::empty, "KS distance of an empty sample");
  std::vector<double> x(samples.begin(), samples.end());
  std::sort(x.begin(), x.end());
  const double m = static_cast<double>(x.size());
  double worst = 0;
  for (std::size_t k = 0; k < x.size();) {
    std::size_t j = k;
    while (j < x.size() && x[j] == x[k]) ++j;
    const double f = cdf(x[k]);
    worst = std::max({worst, std::abs(f - k / m), std::abs(j / m - f)});
    k = j;
  }
  return worst;
}

struct Moments {
  double mean = 0;
  double variance = 0;  // unbiased
  double sem = 0;
  std::size_t count = 0;
};

inline Moments moments(std::span<const double> x) {
  require(!x.empty(), Errc::empty, "moments of an empty sample");
  Moments m;
  m.count = x.size();
  double mean = 0, m2 = 0;
  std::size_t k = 0;
  for (double v : x) {  // Welford
    ++k;
    const double delta = v - mean;
    mean += delta / static_cast<double>(k);
    m2 += delta * (v - mean);
  }
  m.mean = mean;
  m.variance = x.size() > 1 ? m2 / static_cast<double>(x.size() - 1) : 0.0;
  m.sem = std::sqrt(m.variance / static_cast<double>(x.size()));
  return m;
}

struct Interval {
  double lo = 0;
  double hi = 0;
};

/// Wilson score interval for a binomial proportion.
inline Interval wilson_interval(std::size_t successes, std::size_t trials, double zq = 1.959963984540054) {
  require(trials > 0, Errc::empty, "no trials");
  const double n = static_cast<double>(trials);
  const double p = successes / n;
  const double denom = 1 + zq * zq / n;
  const double center = (p + zq * zq / (2 * n)) / denom;
  const double half = zq * std::sqrt(p * (1 - p) / n + zq * zq / (4 * n * n)) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

inline double correlation(std::span<const double> x, std::span<const double> y) {
  require(x.size() == y.size() && x.size() >= 2, Errc::bad_params, "correlation needs two equal samples");
  const double mx = moments(x).mean, my = moments(y).mean;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sxy += (x[k] - mx) * (y[k] - my);
    sxx += (x[k] - mx) * (x[k] - mx);
    syy += (y[k] - my) * (y[k] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

struct Histogram {
  double lo = 0;
  double hi = 0;
  std::vector<std::size_t> counts;
};

inline Histogram histogram(std::span<const double> x, double lo, double hi, int bins) {
  require(bins >= 1 && hi > lo, Errc::bad_params, "bad histogram range");
  Histogram h{lo, hi, std::vector<std::size_t>(static_cast<std::size_t>(bins), 0)};
  for (double v : x) {
    if (v < lo || v >= hi) continue;
    const auto k = static_cast<std::size_t>((v - lo) / (hi - lo) * bins);
    ++h.counts[std::min(k, h.counts.size() - 1)];
  }
  return h;
}

}  // namespace rlab
