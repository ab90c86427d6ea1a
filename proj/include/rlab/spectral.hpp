#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "rlab/error.hpp"
#include "rlab/graph.hpp"

namespace rlab {

using cplx = std::complex<double>;

inline constexpr int kDefaultDenseCap = 6000;

/// H = A / sqrt(d-1), applied matrix-free or densified.
class NormalizedAdjacency {
 public:
  explicit NormalizedAdjacency(RegularGraph g)
      : g_(std::move(g)), scale_(1.0 / std::sqrt(static_cast<double>(g_.degree() - 1))) {}

  const RegularGraph& graph() const { return g_; }
  int size() const { return g_.vertex_count(); }
  double scale() const { return scale_; }
  double trivial_eigenvalue() const { return g_.degree() * scale_; }

  void apply(const Eigen::VectorXd& x, Eigen::VectorXd& y) const {
    const int n = size();
    y.resize(n);
    for (Vertex u = 0; u < n; ++u) {
      double s = 0;
      for (Vertex v : g_.neighbors(u)) s += x[v];
      y[u] = scale_ * s;
    }
  }

  Eigen::MatrixXd dense() const {
    const int n = size();
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
    for (Vertex u = 0; u < n; ++u)
      for (Vertex v : g_.neighbors(u)) h(u, v) = scale_;
    return h;
  }

 private:
  RegularGraph g_;
  double scale_;
};

inline NormalizedAdjacency normalized_adjacency(const RegularGraph& g) { return NormalizedAdjacency(g); }

struct SpectralDecomposition {
  Eigen::VectorXd eigenvalues;                 // descending
  std::optional<Eigen::MatrixXd> eigenvectors;  // column k pairs with eigenvalues[k]
  std::optional<double> residual;               // max |Hu - lambda u|, when vectors are kept

  int size() const { return static_cast<int>(eigenvalues.size()); }
};

/// Dense symmetric eigensolver. Eigen's tridiagonalization + implicit QR
/// stands in for a hand-written Householder/QL pair.
inline SpectralDecomposition symmetric_spectrum(const Eigen::MatrixXd& h, bool want_vectors) {
  require(h.rows() == h.cols(), Errc::bad_params, "matrix must be square");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
      h, want_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  require(es.info() == Eigen::Success, Errc::no_convergence, "symmetric eigensolver did not converge");
  SpectralDecomposition out;
  out.eigenvalues = es.eigenvalues().reverse();
  if (want_vectors) {
    Eigen::MatrixXd vecs = es.eigenvectors().rowwise().reverse();
    out.residual = ((h * vecs) - vecs * out.eigenvalues.asDiagonal()).colwise().norm().maxCoeff();
    out.eigenvectors = std::move(vecs);
  }
  return out;
}

inline SpectralDecomposition full_spectrum(const NormalizedAdjacency& h, bool want_vectors,
                                           int dense_cap = kDefaultDenseCap) {
  require(h.size() <= dense_cap, Errc::dense_cap_exceeded,
          "n=" + std::to_string(h.size()) + " exceeds the dense cap " + std::to_string(dense_cap));
  return symmetric_spectrum(h.dense(), want_vectors);
}

/// Resolvent of the minor H^{(X)}; rows and columns follow `kept`.
struct ResolventSlice {
  cplx z;
  Eigen::MatrixXcd G;
  std::vector<Vertex> removed;  // sorted
  std::vector<Vertex> kept;     // sorted

  int index_of(Vertex v) const {
    auto it = std::lower_bound(kept.begin(), kept.end(), v);
    require(it != kept.end() && *it == v, Errc::bad_index, "vertex " + std::to_string(v) + " is removed");
    return static_cast<int>(it - kept.begin());
  }
  cplx at(Vertex i, Vertex j) const { return G(index_of(i), index_of(j)); }
};

inline ResolventSlice resolvent(const Eigen::MatrixXd& h, cplx z, std::span<const Vertex> removed = {}) {
  require(z.imag() >= 0, Errc::bad_params, "resolvent needs Im z >= 0");
  const int n = static_cast<int>(h.rows());
  ResolventSlice r;
  r.z = z;
  r.removed.assign(removed.begin(), removed.end());
  std::sort(r.removed.begin(), r.removed.end());
  r.removed.erase(std::unique(r.removed.begin(), r.removed.end()), r.removed.end());
  for (Vertex v : r.removed) require(v >= 0 && v < n, Errc::bad_index, "removed vertex out of range");
  for (Vertex v = 0; v < n; ++v)
    if (!std::binary_search(r.removed.begin(), r.removed.end(), v)) r.kept.push_back(v);
  const int m = static_cast<int>(r.kept.size());
  Eigen::MatrixXcd a(m, m);
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < m; ++i) a(i, j) = h(r.kept[i], r.kept[j]);
  a.diagonal().array() -= z;
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(a);
  if (z.imag() == 0) {
    const double rc = lu.rcond();
    require(rc > 1e-14, Errc::singular_system, "H - z is singular at real z");
  }
  r.G = lu.inverse();
  return r;
}

inline ResolventSlice resolvent(const NormalizedAdjacency& h, cplx z, std::span<const Vertex> removed = {},
                                int dense_cap = kDefaultDenseCap) {
  require(h.size() <= dense_cap, Errc::dense_cap_exceeded, "resolvent exceeds the dense cap");
  return resolvent(h.dense(), z, removed);
}

/// m_N(z) = (1/N) sum 1/(lambda_i - z).
inline cplx stieltjes(const Eigen::VectorXd& eigenvalues, cplx z) {
  cplx s = 0;
  for (double l : eigenvalues) s += 1.0 / (l - z);
  return s / static_cast<double>(eigenvalues.size());
}

inline cplx stieltjes(const SpectralDecomposition& spec, cplx z) { return stieltjes(spec.eigenvalues, z); }

inline cplx stieltjes(const ResolventSlice& r) { return r.G.trace() / static_cast<double>(r.G.rows()); }

/// d/dz m_N(z) = (1/N) sum (lambda_i - z)^{-2}.
inline cplx stieltjes_derivative(const Eigen::VectorXd& eigenvalues, cplx z) {
  cplx s = 0;
  for (double l : eigenvalues) s += 1.0 / ((l - z) * (l - z));
  return s / static_cast<double>(eigenvalues.size());
}

/// Q = (1/Nd) sum over ordered adjacent pairs (i,j) of G^{(i)}_jj, using
/// G^{(i)}_jj = G_jj - G_ij^2 / G_ii.
template <class Entry>
cplx q_statistic_from(const RegularGraph& g, Entry&& entry) {
  cplx s = 0;
  const int n = g.vertex_count();
  std::vector<cplx> diag(static_cast<std::size_t>(n));
  for (Vertex i = 0; i < n; ++i) diag[i] = entry(i, i);
  for (Vertex i = 0; i < n; ++i)
    for (Vertex j : g.neighbors(i)) {
      const cplx gij = entry(i, j);
      s += diag[j] - gij * gij / diag[i];
    }
  return s / (static_cast<double>(n) * g.degree());
}

inline cplx q_statistic(const RegularGraph& g, const Eigen::MatrixXcd& G) {
  return q_statistic_from(g, [&](Vertex i, Vertex j) { return G(i, j); });
}

inline cplx q_statistic(const NormalizedAdjacency& h, cplx z, int dense_cap = kDefaultDenseCap) {
  const auto r = resolvent(h, z, {}, dense_cap);
  return q_statistic(h.graph(), r.G);
}

/// Resolvent entries from an eigendecomposition, for when many spectral
/// parameters are needed on one matrix.
class SpectralResolvent {
 public:
  SpectralResolvent(Eigen::VectorXd values, Eigen::MatrixXd vectors)
      : values_(std::move(values)), vectors_(std::move(vectors)) {
    require(vectors_.cols() == values_.size(), Errc::bad_params, "eigenvector count mismatch");
  }

  explicit SpectralResolvent(const SpectralDecomposition& spec)
      : SpectralResolvent(spec.eigenvalues, spec.eigenvectors ? *spec.eigenvectors : Eigen::MatrixXd()) {
    require(spec.eigenvectors.has_value(), Errc::vectors_missing, "decomposition has no eigenvectors");
  }

  int size() const { return static_cast<int>(vectors_.rows()); }
  const Eigen::VectorXd& eigenvalues() const { return values_; }

  void set_z(cplx z) {
    z_ = z;
    weights_ = (values_.array().cast<cplx>() - z).inverse();
  }
  cplx z() const { return z_; }

  cplx entry(Vertex i, Vertex j) const {
    const auto ui = vectors_.row(i).transpose().cast<cplx>();
    const auto uj = vectors_.row(j).transpose().cast<cplx>();
    return (ui.array() * weights_.array() * uj.array()).sum();
  }

  cplx stieltjes() const { return weights_.mean(); }

 private:
  Eigen::VectorXd values_;
  Eigen::MatrixXd vectors_;
  Eigen::VectorXcd weights_;
  cplx z_{0, 1};
};

/// max over eigenvectors of |u|_inf^2, skipping column 0 (the trivial
/// vector) unless asked.
inline double delocalization(const SpectralDecomposition& spec, bool include_trivial = false) {
  require(spec.eigenvectors.has_value(), Errc::vectors_missing, "decomposition has no eigenvectors");
  const auto& u = *spec.eigenvectors;
  double best = 0;
  for (int k = include_trivial ? 0 : 1; k < u.cols(); ++k) best = std::max(best, u.col(k).cwiseAbs2().maxCoeff());
  return best;
}

/// max_i |sum_j |G_ij|^2 - Im G_ii / eta|.
inline double ward_residual(const Eigen::MatrixXcd& G, cplx z) {
  double worst = 0;
  for (int i = 0; i < G.rows(); ++i) {
    const double lhs = G.row(i).cwiseAbs2().sum();
    worst = std::max(worst, std::abs(lhs - G(i, i).imag() / z.imag()));
  }
  return worst;
}

/// Compares G^{(k)} from a direct minor solve with G_ij - G_ik G_kj / G_kk.
inline double schur_residual(const Eigen::MatrixXd& h, cplx z, Vertex k) {
  const auto full = resolvent(h, z);
  const Vertex removed[1] = {k};
  const auto minor = resolvent(h, z, removed);
  double worst = 0;
  for (std::size_t a = 0; a < minor.kept.size(); ++a)
    for (std::size_t b = 0; b < minor.kept.size(); ++b) {
      const Vertex i = minor.kept[a], j = minor.kept[b];
      const cplx formula = full.G(i, j) - full.G(i, k) * full.G(k, j) / full.G(k, k);
      worst = std::max(worst, std::abs(formula - minor.G(static_cast<int>(a), static_cast<int>(b))));
    }
  return worst;
}

/// max_y |sum_x G_xy - 1/(d/sqrt(d-1) - z)|.
inline double row_sum_residual(const Eigen::MatrixXcd& G, double trivial_eigenvalue, cplx z) {
  const cplx target = 1.0 / (trivial_eigenvalue - z);
  return (G.colwise().sum().array() - target).abs().maxCoeff();
}

/// max |(H - z) G - I|.
inline double inverse_residual(const Eigen::MatrixXd& h, const Eigen::MatrixXcd& G, cplx z) {
  Eigen::MatrixXcd a = h.cast<cplx>();
  a.diagonal().array() -= z;
  return (a * G - Eigen::MatrixXcd::Identity(G.rows(), G.cols())).cwiseAbs().maxCoeff();
}

}  // namespace rlab
