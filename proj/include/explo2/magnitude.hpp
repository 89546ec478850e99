#pragma once

// Distance and similarity matrices of finite Euclidean point sets, their
// weightings and magnitude.
//
// For a distance matrix d and scale t > 0 the similarity matrix is
// Z = exp[-t d] (entrywise). A weighting w solves Z w = 1 and the magnitude is
// the sum of its components. For Euclidean point sets Z is positive definite,
// so everything here goes through one Cholesky factorization of Z.

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <Eigen/LU>

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "explo2/errors.hpp"

namespace explo2 {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Diagonal shift applied once when the Cholesky factorization of Z fails.
inline constexpr double kFactorizationJitter = 1e-10;

/// Symmetric, zero-diagonal, nonnegative matrix of pairwise distances.
template <typename Scalar>
class DistanceMatrix {
 public:
  /// Wraps explicit entries. Entries must be finite and nonnegative, the
  /// diagonal exactly zero and the matrix symmetric to 1e-12 relative; the
  /// stored copy is symmetrized exactly.
  static DistanceMatrix from_entries(const Matrix<Scalar>& entries) {
    const Eigen::Index n = entries.rows();
    if (n == 0 || entries.cols() != n) {
      throw InputError("distance matrix must be square and nonempty");
    }
    if (!entries.allFinite()) throw InputError("distance matrix has non-finite entries");
    if ((entries.array() < Scalar(0)).any()) throw InputError("distance matrix has negative entries");
    const Scalar scale = entries.cwiseAbs().maxCoeff();
    Matrix<Scalar> sym(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      if (entries(i, i) != Scalar(0)) throw InputError("distance matrix diagonal must be zero");
      sym(i, i) = Scalar(0);
      for (Eigen::Index j = i + 1; j < n; ++j) {
        if (std::abs(entries(i, j) - entries(j, i)) > Scalar(1e-12) * scale) {
          throw InputError("distance matrix is not symmetric");
        }
        sym(i, j) = sym(j, i) = (entries(i, j) + entries(j, i)) / Scalar(2);
      }
    }
    return DistanceMatrix(std::move(sym));
  }

  Eigen::Index size() const { return entries_.rows(); }
  const Matrix<Scalar>& entries() const { return entries_; }
  Scalar operator()(Eigen::Index i, Eigen::Index j) const { return entries_(i, j); }
  Scalar diameter() const { return entries_.maxCoeff(); }

 private:
  template <typename Derived>
  friend DistanceMatrix<typename Derived::Scalar> distance_matrix(const Eigen::MatrixBase<Derived>&);

  explicit DistanceMatrix(Matrix<Scalar> entries) : entries_(std::move(entries)) {}

  Matrix<Scalar> entries_;
};

/// Euclidean pairwise distances between the rows of `points`.
template <typename Derived>
DistanceMatrix<typename Derived::Scalar> distance_matrix(const Eigen::MatrixBase<Derived>& points) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n = points.rows();
  if (n == 0) throw InputError("distance_matrix needs at least one point");
  if (!points.allFinite()) throw InputError("distance_matrix: non-finite coordinate");
  Matrix<Scalar> d(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    d(i, i) = Scalar(0);
    for (Eigen::Index j = i + 1; j < n; ++j) {
      d(i, j) = d(j, i) = (points.row(i) - points.row(j)).norm();
    }
  }
  return DistanceMatrix<Scalar>(std::move(d));
}

namespace detail {

// Index of the first pivot at which an unblocked Cholesky of `a` breaks down,
// or npos if it goes through.
template <typename Scalar>
std::size_t failing_pivot(Matrix<Scalar> a) {
  const Eigen::Index n = a.rows();
  for (Eigen::Index k = 0; k < n; ++k) {
    Scalar pivot = a(k, k);
    for (Eigen::Index j = 0; j < k; ++j) pivot -= a(k, j) * a(k, j);
    if (!(pivot > Scalar(0))) return static_cast<std::size_t>(k);
    const Scalar root = std::sqrt(pivot);
    a(k, k) = root;
    for (Eigen::Index i = k + 1; i < n; ++i) {
      Scalar s = a(i, k);
      for (Eigen::Index j = 0; j < k; ++j) s -= a(i, j) * a(k, j);
      a(i, k) = s / root;
    }
  }
  return DegenerateGeometryError::npos;
}

}  // namespace detail

/// A factorized similarity matrix together with its weighting and magnitude.
///
/// Immutable once built. All solves against Z reuse the stored factorization.
template <typename Scalar>
class SimilaritySystem {
 public:
  /// Factorizes an arbitrary symmetric similarity matrix. On failure the
  /// diagonal is shifted by kFactorizationJitter and the factorization retried
  /// once; a second failure throws DegenerateGeometryError with the pivot.
  static SimilaritySystem factorize(Matrix<Scalar> z, Scalar scale) {
    if (z.rows() == 0 || z.rows() != z.cols()) throw InputError("similarity matrix must be square and nonempty");
    Eigen::LLT<Matrix<Scalar>> llt(z);
    bool jittered = false;
    if (llt.info() != Eigen::Success) {
      z.diagonal().array() += Scalar(kFactorizationJitter);
      llt.compute(z);
      jittered = true;
      if (llt.info() != Eigen::Success) {
        const std::size_t pivot = detail::failing_pivot<Scalar>(z);
        throw DegenerateGeometryError("similarity matrix is not numerically positive definite (pivot " +
                                          std::to_string(pivot) + ")",
                                      pivot, static_cast<double>(scale));
      }
    }
    Vector<Scalar> w = llt.solve(Vector<Scalar>::Ones(z.rows()));
    return SimilaritySystem(scale, std::move(z), std::move(llt), std::move(w), jittered);
  }

  Eigen::Index size() const { return z_.rows(); }
  Scalar scale() const { return scale_; }
  const Matrix<Scalar>& similarity() const { return z_; }
  const Eigen::LLT<Matrix<Scalar>>& factorization() const { return llt_; }
  const Vector<Scalar>& weighting() const { return w_; }
  /// Z is symmetric, so the coweighting is the weighting.
  const Vector<Scalar>& coweighting() const { return w_; }
  Scalar magnitude() const { return magnitude_; }
  /// True when the diagonal shift had to be applied.
  bool jittered() const { return jittered_; }

  template <typename Rhs>
  Matrix<Scalar> solve(const Eigen::MatrixBase<Rhs>& rhs) const {
    return llt_.solve(rhs);
  }

 private:
  SimilaritySystem(Scalar scale, Matrix<Scalar> z, Eigen::LLT<Matrix<Scalar>> llt, Vector<Scalar> w, bool jittered)
      : scale_(scale), z_(std::move(z)), llt_(std::move(llt)), w_(std::move(w)), magnitude_(w_.sum()),
        jittered_(jittered) {}

  Scalar scale_;
  Matrix<Scalar> z_;
  Eigen::LLT<Matrix<Scalar>> llt_;
  Vector<Scalar> w_;
  Scalar magnitude_;
  bool jittered_;
};

/// Z = exp[-t d] for finite t > 0.
template <typename Scalar>
Matrix<Scalar> similarity_matrix(const DistanceMatrix<Scalar>& d, Scalar t) {
  if (!(t > Scalar(0)) || !std::isfinite(static_cast<double>(t))) {
    throw InputError("scale parameter must be positive and finite");
  }
  return (-t * d.entries().array()).exp().matrix();
}

template <typename Scalar>
SimilaritySystem<Scalar> similarity(const DistanceMatrix<Scalar>& d, Scalar t) {
  return SimilaritySystem<Scalar>::factorize(similarity_matrix(d, t), t);
}

/// Magnitude at each requested scale, each solved from scratch.
template <typename Scalar>
std::vector<std::pair<Scalar, Scalar>> magnitude_function(const DistanceMatrix<Scalar>& d,
                                                          const std::vector<Scalar>& ts) {
  std::vector<std::pair<Scalar, Scalar>> out;
  out.reserve(ts.size());
  for (const Scalar t : ts) {
    try {
      out.emplace_back(t, similarity(d, t).magnitude());
    } catch (const DegenerateGeometryError& e) {
      throw DegenerateGeometryError("at t = " + std::to_string(static_cast<double>(t)) + ": " + e.what(), e.pivot(),
                                    static_cast<double>(t));
    }
  }
  return out;
}

template <typename Scalar>
struct ScaleZeroWeighting {
  Vector<Scalar> weighting;
  Vector<Scalar> coweighting;
};

/// Limits of the weighting and coweighting as t -> 0:
/// w(0) = d^{-1}1 / (1' d^{-1} 1) and v(0) = 1' d^{-1} / (1' d^{-1} 1).
template <typename Scalar>
ScaleZeroWeighting<Scalar> weighting_scale_zero(const DistanceMatrix<Scalar>& d) {
  const Eigen::Index n = d.size();
  if (n < 2) throw DegenerateGeometryError("scale-zero weighting needs at least two points (d is singular)");
  const Vector<Scalar> ones = Vector<Scalar>::Ones(n);

  Eigen::FullPivLU<Matrix<Scalar>> lu(d.entries());
  if (!lu.isInvertible()) throw DegenerateGeometryError("distance matrix is singular");
  const Vector<Scalar> omega = lu.solve(ones);

  const Matrix<Scalar> dt = d.entries().transpose();
  Eigen::FullPivLU<Matrix<Scalar>> lu_t(dt);
  const Vector<Scalar> co_omega = lu_t.solve(ones);

  const Scalar total = omega.sum();
  if (total == Scalar(0) || !std::isfinite(static_cast<double>(total))) {
    throw DegenerateGeometryError("1' d^{-1} 1 vanishes; scale-zero weighting undefined");
  }
  return {omega / total, co_omega / co_omega.sum()};
}

}  // namespace explo2
