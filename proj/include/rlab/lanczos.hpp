#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "rlab/error.hpp"
#include "rlab/rng.hpp"
#include "rlab/spectral.hpp"

namespace rlab {

struct LanczosOptions {
  double tolerance = 1e-10;  // Ritz residual |beta_m s_{m,j}|
  int max_iterations = 400;
  int restarts = 1;
  int check_every = 5;
};

struct ExtremeEigs {
  std::vector<double> top;     // lambda_2 >= lambda_3 >= ...
  std::vector<double> bottom;  // lambda_N <= lambda_{N-1} <= ...
  int iterations = 0;
  double max_residual = 0;
};

namespace detail {

// Orthogonalize against the basis columns [0, m) and the optional deflation
// vector, twice (classical Gram-Schmidt, repeated).
inline void reorthogonalize(Eigen::VectorXd& w, const Eigen::MatrixXd& basis, int m, bool deflate) {
  for (int pass = 0; pass < 2; ++pass) {
    if (deflate) w.array() -= w.mean();
    if (m > 0) {
      const Eigen::VectorXd c = basis.leftCols(m).transpose() * w;
      w.noalias() -= basis.leftCols(m) * c;
    }
  }
}

inline Eigen::VectorXd random_start(int n, Rng& rng, const Eigen::MatrixXd& basis, int m, bool deflate) {
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = rng.normal();
  reorthogonalize(v, basis, m, deflate);
  return v;
}

}  // namespace detail

/// Lanczos with full reorthogonalization for the k largest and k smallest
/// eigenvalues of a symmetric operator, both taken from one Krylov run.
/// With `deflate_ones` the constant vector is projected out at every step.
/// Invariant subspaces (breakdown) are continued with a fresh random
/// direction, so repeated eigenvalues are resolved.
template <class Apply>
ExtremeEigs lanczos_extremes(Apply&& apply, int n, int k, std::uint64_t seed, bool deflate_ones,
                             const LanczosOptions& opt = {}) {
  require(k >= 1, Errc::bad_params, "k must be at least 1");
  const int dim = n - (deflate_ones ? 1 : 0);
  require(dim >= 1, Errc::bad_params, "operator has no nontrivial subspace");
  const int want = std::min(k, dim);
  Rng rng(seed);

  Eigen::VectorXd start = detail::random_start(n, rng, Eigen::MatrixXd(), 0, deflate_ones);
  ExtremeEigs out;
  for (int attempt = 0; attempt <= opt.restarts; ++attempt) {
    const int cap = std::min(opt.max_iterations, dim);
    Eigen::MatrixXd basis(n, cap);
    std::vector<double> alpha, beta;  // beta[j] couples j and j+1
    Eigen::VectorXd v = start / start.norm();
    Eigen::VectorXd w(n);
    bool converged = false;
    Eigen::VectorXd theta;
    Eigen::MatrixXd s;
    int m = 0;
    for (; m < cap;) {
      basis.col(m) = v;
      apply(v, w);
      const double a = v.dot(w);
      alpha.push_back(a);
      ++m;
      detail::reorthogonalize(w, basis, m, deflate_ones);
      double b = w.norm();
      const bool exhausted = m == cap;
      const bool check = exhausted || m % opt.check_every == 0 || b < 1e-12;
      if (check) {
        Eigen::VectorXd d = Eigen::Map<Eigen::VectorXd>(alpha.data(), m);
        Eigen::VectorXd e(std::max(m - 1, 0));
        for (int j = 0; j + 1 < m; ++j) e[j] = beta[j];
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
        es.computeFromTridiagonal(d, e, Eigen::ComputeEigenvectors);
        theta = es.eigenvalues();
        s = es.eigenvectors();
        if (m >= 2 * want || m == dim) {
          double worst = 0;
          for (int j = 0; j < want; ++j) {
            worst = std::max(worst, std::abs(b * s(m - 1, m - 1 - j)));
            worst = std::max(worst, std::abs(b * s(m - 1, j)));
          }
          out.max_residual = worst;
          if (worst <= opt.tolerance || m == dim) {
            converged = true;
            break;
          }
        }
      }
      if (exhausted) break;
      if (b < 1e-12) {
        // Invariant subspace: continue in an orthogonal random direction.
        w = detail::random_start(n, rng, basis, m, deflate_ones);
        b = 0;
        beta.push_back(0.0);
        v = w / w.norm();
        continue;
      }
      beta.push_back(b);
      v = w / b;
    }
    out.iterations += m;
    if (converged || attempt == opt.restarts) {
      require(converged, Errc::no_convergence,
              "Lanczos did not reach the residual tolerance (residual " + std::to_string(out.max_residual) + ")");
      out.top.clear();
      out.bottom.clear();
      for (int j = 0; j < want; ++j) {
        out.top.push_back(theta[m - 1 - j]);
        out.bottom.push_back(theta[j]);
      }
      return out;
    }
    // Restart from the sum of the wanted Ritz vectors.
    Eigen::VectorXd y = Eigen::VectorXd::Zero(m);
    for (int j = 0; j < want; ++j) y += s.col(m - 1 - j) + s.col(j);
    start = basis.leftCols(m) * y;
    detail::reorthogonalize(start, Eigen::MatrixXd(), 0, deflate_ones);
  }
  fail(Errc::no_convergence, "Lanczos did not converge");
}

/// Extreme nontrivial eigenvalues of H: the constant eigenvector is deflated.
inline ExtremeEigs extreme_eigs(const NormalizedAdjacency& h, int k, std::uint64_t seed,
                                const LanczosOptions& opt = {}) {
  return lanczos_extremes([&](const Eigen::VectorXd& x, Eigen::VectorXd& y) { h.apply(x, y); }, h.size(), k,
                          seed, true, opt);
}

}  // namespace rlab
