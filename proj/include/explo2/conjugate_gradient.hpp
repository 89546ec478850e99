#pragma once

// Iterative weighting solve on a hard-thresholded (sparse) similarity matrix.

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <cmath>
#include <optional>
#include <vector>

#include "explo2/errors.hpp"
#include "explo2/magnitude.hpp"

namespace explo2 {

template <typename Scalar>
using SparseMatrix = Eigen::SparseMatrix<Scalar>;

/// exp[-t d] with every entry strictly below `cutoff` set to zero. The
/// diagonal (all ones) is always kept.
template <typename Scalar>
SparseMatrix<Scalar> threshold_similarity(const DistanceMatrix<Scalar>& d, Scalar t, Scalar cutoff) {
  const Matrix<Scalar> z = similarity_matrix(d, t);
  const Eigen::Index n = z.rows();
  std::vector<Eigen::Triplet<Scalar>> entries;
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      if (i == j || !(z(i, j) < cutoff)) entries.emplace_back(i, j, z(i, j));
    }
  }
  SparseMatrix<Scalar> out(n, n);
  out.setFromTriplets(entries.begin(), entries.end());
  return out;
}

enum class CgStatus {
  converged,
  /// Non-positive curvature met: the matrix is not PD. Use a generic solver.
  breakdown,
  max_iterations,
};

template <typename Scalar>
struct CgResult {
  Vector<Scalar> weighting;
  int iterations = 0;
  /// Final ||Z w - 1||_2.
  Scalar residual_norm = 0;
  CgStatus status = CgStatus::converged;
};

/// Jacobi-preconditioned conjugate gradient for Z w = 1.
///
/// Stops when ||Z w - 1||_2 <= tol * sqrt(n). `max_iterations` <= 0 means 10 n.
template <typename Scalar>
CgResult<Scalar> weighting_cg(const SparseMatrix<Scalar>& z, const std::optional<Vector<Scalar>>& initial_guess,
                              Scalar tol, int max_iterations = 0) {
  const Eigen::Index n = z.rows();
  if (n == 0 || z.cols() != n) throw InputError("weighting_cg: matrix must be square and nonempty");
  const Vector<Scalar> diag = z.diagonal();
  if (!(diag.array() > Scalar(0)).all()) throw InputError("weighting_cg: diagonal must be positive");
  if ((SparseMatrix<Scalar>(z.transpose()) - z).norm() > Scalar(1e-12) * z.norm()) {
    throw InputError("weighting_cg: matrix must be symmetric");
  }
  if (initial_guess && initial_guess->size() != n) throw InputError("weighting_cg: initial guess has wrong length");
  if (max_iterations <= 0) max_iterations = static_cast<int>(10 * n);

  const Vector<Scalar> ones = Vector<Scalar>::Ones(n);
  const Vector<Scalar> inv_diag = diag.cwiseInverse();
  const Scalar target = tol * std::sqrt(static_cast<Scalar>(n));

  CgResult<Scalar> result;
  Vector<Scalar>& x = result.weighting;
  x = initial_guess ? *initial_guess : Vector<Scalar>::Zero(n);
  Vector<Scalar> r = ones - z * x;
  Vector<Scalar> s = inv_diag.cwiseProduct(r);
  Vector<Scalar> p = s;
  Scalar rho = r.dot(s);
  Scalar rnorm = r.norm();

  int iter = 0;
  while (rnorm > target && iter < max_iterations) {
    const Vector<Scalar> q = z * p;
    const Scalar curvature = p.dot(q);
    if (!(curvature > Scalar(0))) {
      result.status = CgStatus::breakdown;
      result.iterations = iter;
      result.residual_norm = rnorm;
      return result;
    }
    const Scalar alpha = rho / curvature;
    x += alpha * p;
    r -= alpha * q;
    ++iter;
    // Recompute the true residual now and then to stop drift.
    if (iter % 50 == 0) r = ones - z * x;
    rnorm = r.norm();
    s = inv_diag.cwiseProduct(r);
    const Scalar rho_next = r.dot(s);
    p = s + (rho_next / rho) * p;
    rho = rho_next;
  }
  result.iterations = iter;
  result.residual_norm = (ones - z * x).norm();
  result.status = result.residual_norm <= target ? CgStatus::converged : CgStatus::max_iterations;
  return result;
}

}  // namespace explo2
