#pragma once

// Dense complex linear algebra used throughout the library: matrix tuples,
// spectra and eigenvalue clustering, norms, direct sums, similarity, and
// membership tests for the invertible set and the set
// { x : sigma(x) and sigma(-x) are disjoint }.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numeric>
#include <utility>
#include <vector>

#include "ncfree/errors.hpp"

namespace ncfree {

using cd = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;

inline constexpr double kDefaultTol = 1e-10;

/// A level-n point of M^d: d square complex matrices of a common size n >= 1.
class MatrixTuple {
 public:
  MatrixTuple() = default;

  explicit MatrixTuple(std::vector<CMatrix> entries) : entries_(std::move(entries)) {
    if (entries_.empty()) throw DimensionError("matrix tuple must have at least one component");
    const Eigen::Index n = entries_.front().rows();
    if (n < 1) throw DimensionError("matrix tuple level must be at least 1");
    for (const auto& m : entries_) {
      if (m.rows() != n || m.cols() != n)
        throw DimensionError("matrix tuple components must be square of identical size");
    }
  }

  MatrixTuple(std::initializer_list<CMatrix> entries)
      : MatrixTuple(std::vector<CMatrix>(entries)) {}

  std::size_t d() const noexcept { return entries_.size(); }
  Eigen::Index n() const noexcept { return entries_.empty() ? 0 : entries_.front().rows(); }
  const CMatrix& operator[](std::size_t j) const { return entries_.at(j); }
  const std::vector<CMatrix>& entries() const noexcept { return entries_; }

  auto begin() const noexcept { return entries_.begin(); }
  auto end() const noexcept { return entries_.end(); }

 private:
  std::vector<CMatrix> entries_;
};

// ---------------------------------------------------------------------------
// Norms and singular values

inline Eigen::VectorXd singular_values(const CMatrix& x) {
  if (x.size() == 0) return Eigen::VectorXd();
  Eigen::JacobiSVD<CMatrix> svd(x);
  return svd.singularValues();
}

/// Largest singular value.
inline double op_norm(const CMatrix& x) {
  if (x.size() == 0) return 0.0;
  return singular_values(x)(0);
}

inline double op_norm(const MatrixTuple& x) {
  double m = 0.0;
  for (const auto& c : x) m = std::max(m, op_norm(c));
  return m;
}

/// ||a - b|| / (1 + ||b||) in operator norm.
inline double relative_residual(const CMatrix& a, const CMatrix& b) {
  return op_norm(a - b) / (1.0 + op_norm(b));
}

inline double commutator_norm(const CMatrix& a, const CMatrix& b) {
  return op_norm(a * b - b * a);
}

/// Smallest singular value strictly above tol times the largest.
inline bool in_I(const CMatrix& x, double tol = kDefaultTol) {
  const Eigen::VectorXd s = singular_values(x);
  if (s.size() == 0 || s(0) == 0.0) return false;
  return s(s.size() - 1) > tol * s(0);
}

/// Numerical rank with singular values below rel_tol * largest counted as zero.
inline Eigen::Index numerical_rank(const CMatrix& x, double rel_tol = kDefaultTol, double scale = -1.0) {
  const Eigen::VectorXd s = singular_values(x);
  if (s.size() == 0) return 0;
  const double ref = scale >= 0.0 ? scale : s(0);
  if (ref == 0.0) return 0;
  Eigen::Index r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > rel_tol * ref) ++r;
  return r;
}

/// Inverse with the library-wide singularity threshold.
inline CMatrix checked_inverse(const CMatrix& x, double tol = kDefaultTol) {
  if (!in_I(x, tol)) throw PreconditionError("matrix is numerically singular");
  return x.fullPivLu().inverse();
}

// ---------------------------------------------------------------------------
// Spectra

inline bool complex_lex_less(cd a, cd b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

/// A group of eigenvalues produced by single-linkage clustering.
struct Cluster {
  cd center;                 // mean of the members
  std::vector<cd> members;   // with multiplicity
  double spread = 0.0;       // max |member - center|
};

/// Eigenvalues with algebraic multiplicity, sorted by (real, imaginary).
struct Spectrum {
  std::vector<cd> eigenvalues;

  std::size_t size() const noexcept { return eigenvalues.size(); }

  double spectral_radius() const {
    double r = 0.0;
    for (cd z : eigenvalues) r = std::max(r, std::abs(z));
    return r;
  }

  /// Single-linkage grouping: eigenvalues closer than gap share a cluster.
  std::vector<Cluster> cluster(double gap) const {
    const std::size_t m = eigenvalues.size();
    std::vector<std::size_t> parent(m);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t i) {
      while (parent[i] != i) i = parent[i] = parent[parent[i]];
      return i;
    };
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = i + 1; j < m; ++j)
        if (std::abs(eigenvalues[i] - eigenvalues[j]) <= gap) parent[find(i)] = find(j);

    std::vector<Cluster> out;
    std::vector<std::size_t> slot(m, m);
    for (std::size_t i = 0; i < m; ++i) {
      const std::size_t root = find(i);
      if (slot[root] == m) {
        slot[root] = out.size();
        out.emplace_back();
      }
      out[slot[root]].members.push_back(eigenvalues[i]);
    }
    for (auto& c : out) {
      cd sum = 0.0;
      for (cd z : c.members) sum += z;
      c.center = sum / static_cast<double>(c.members.size());
      for (cd z : c.members) c.spread = std::max(c.spread, std::abs(z - c.center));
    }
    std::sort(out.begin(), out.end(),
              [](const Cluster& a, const Cluster& b) { return complex_lex_less(a.center, b.center); });
    return out;
  }
};

inline Spectrum spectrum(const CMatrix& x) {
  Spectrum s;
  if (x.rows() != x.cols()) throw DimensionError("spectrum of a non-square matrix");
  if (x.rows() == 0) return s;
  Eigen::ComplexEigenSolver<CMatrix> solver(x, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) throw NumericalError("eigensolver failed to converge");
  const auto& ev = solver.eigenvalues();
  s.eigenvalues.assign(ev.data(), ev.data() + ev.size());
  std::sort(s.eigenvalues.begin(), s.eigenvalues.end(), complex_lex_less);
  return s;
}

/// True iff sigma(x) and sigma(-x) are disjoint, i.e. min |l_i + l_j| stays
/// above tol * (1 + max |l|). Any singular x fails because 0 pairs with itself.
inline bool in_Q(const CMatrix& x, double tol = kDefaultTol) {
  const Spectrum s = spectrum(x);
  const double scale = tol * (1.0 + s.spectral_radius());
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = i; j < s.size(); ++j)
      if (std::abs(s.eigenvalues[i] + s.eigenvalues[j]) <= scale) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Direct sums and similarity

inline CMatrix direct_sum(const CMatrix& a, const CMatrix& b) {
  CMatrix out = CMatrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  out.topLeftCorner(a.rows(), a.cols()) = a;
  out.bottomRightCorner(b.rows(), b.cols()) = b;
  return out;
}

inline MatrixTuple direct_sum(const MatrixTuple& x, const MatrixTuple& y) {
  if (x.d() != y.d()) throw DimensionError("direct sum of tuples with different d");
  std::vector<CMatrix> parts;
  parts.reserve(x.d());
  for (std::size_t j = 0; j < x.d(); ++j) parts.push_back(direct_sum(x[j], y[j]));
  return MatrixTuple(std::move(parts));
}

/// s^{-1} x s.
inline CMatrix conjugate(const CMatrix& s, const CMatrix& x) {
  if (!in_I(s)) throw PreconditionError("conjugating matrix is singular");
  const CMatrix sinv = s.fullPivLu().inverse();
  return sinv * x * s;
}

/// Componentwise s^{-1} x^j s.
inline MatrixTuple conjugate(const CMatrix& s, const MatrixTuple& x) {
  if (!in_I(s)) throw PreconditionError("conjugating matrix is singular");
  const CMatrix sinv = s.fullPivLu().inverse();
  std::vector<CMatrix> parts;
  parts.reserve(x.d());
  for (const auto& c : x) parts.push_back(sinv * c * s);
  return MatrixTuple(std::move(parts));
}

inline CMatrix diagonal(std::initializer_list<cd> values) {
  Eigen::VectorXcd v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (cd z : values) v(i++) = z;
  return v.asDiagonal();
}

inline CMatrix scalar_matrix(cd value, Eigen::Index n) {
  return value * CMatrix::Identity(n, n);
}

// ---------------------------------------------------------------------------
// alg(x): the unital algebra generated by x

/// Orthonormal basis (as vectorized columns) of span{I, x, x^2, ...}, built
/// Arnoldi-style so clustered spectra do not wreck the conditioning.
inline CMatrix krylov_basis(const CMatrix& x) {
  const Eigen::Index n = x.rows();
  const Eigen::Index nn = n * n;
  CMatrix basis(nn, 0);
  const double xnorm = std::max(op_norm(x), std::numeric_limits<double>::min());
  const CMatrix xs = x / xnorm;

  CMatrix current = CMatrix::Identity(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::VectorXcd v = Eigen::Map<const Eigen::VectorXcd>(current.data(), nn);
    const double before = v.norm();
    for (int pass = 0; pass < 2; ++pass)
      if (basis.cols() > 0) v -= basis * (basis.adjoint() * v);
    const double after = v.norm();
    if (after <= 1e-10 * std::max(before, 1e-300)) break;
    v /= after;
    basis.conservativeResize(nn, basis.cols() + 1);
    basis.col(basis.cols() - 1) = v;
    // next candidate: x times the newest basis element
    Eigen::Map<const CMatrix> q(basis.col(basis.cols() - 1).data(), n, n);
    current = xs * q;
  }
  return basis;
}

/// Relative least-squares residual of y against span{I, x, ..., x^{n-1}}.
inline double alg_residual(const CMatrix& x, const CMatrix& y) {
  const Eigen::Index nn = x.rows() * x.rows();
  const CMatrix basis = krylov_basis(x);
  Eigen::VectorXcd v = Eigen::Map<const Eigen::VectorXcd>(y.data(), nn);
  const double ynorm = v.norm();
  if (ynorm == 0.0) return 0.0;
  const Eigen::VectorXcd r = v - basis * (basis.adjoint() * v);
  return r.norm() / ynorm;
}

}  // namespace ncfree
