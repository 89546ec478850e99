#pragma once

// Exponential-kernel RBF interpolation T(x) = y Z^{-1} zeta(x) over the nodes
// of a similarity system, sharing that system's factorization.

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <type_traits>
#include <utility>

#include "explo2/errors.hpp"
#include "explo2/magnitude.hpp"

namespace explo2 {

/// Relative errors divide by max(|y|, kRelativeErrorFloor).
inline constexpr double kRelativeErrorFloor = 1e-8;

namespace detail {

// Kernel sums are accumulated in long double: at small t the coefficients are
// O(1/t) with alternating signs while their kernel-weighted sum is O(1).
template <typename Scalar, typename Point>
long double kernel_offset_sum(const Matrix<Scalar>& nodes, const Vector<Scalar>& coeffs, Scalar t,
                              const Eigen::MatrixBase<Point>& x) {
  long double acc = 0;
  for (Eigen::Index k = 0; k < nodes.rows(); ++k) {
    const Scalar e = std::expm1(-t * (nodes.row(k).transpose() - x).norm());
    acc += static_cast<long double>(coeffs(k)) * static_cast<long double>(e);
  }
  return acc;
}

template <typename Scalar>
long double accurate_sum(const Vector<Scalar>& v) {
  long double acc = 0;
  for (Eigen::Index k = 0; k < v.size(); ++k) acc += static_cast<long double>(v(k));
  return acc;
}

}  // namespace detail

template <typename Scalar>
class Interpolant {
 public:
  Interpolant(Matrix<Scalar> nodes, Vector<Scalar> coeffs, Scalar t, Scalar y_range)
      : nodes_(std::move(nodes)), coeffs_(std::move(coeffs)), t_(t), y_range_(y_range),
        coeff_sum_(detail::accurate_sum(coeffs_)) {}

  const Matrix<Scalar>& nodes() const { return nodes_; }
  const Vector<Scalar>& coeffs() const { return coeffs_; }
  Scalar scale() const { return t_; }
  /// max y - min y over the nodes, or 1 when all values are equal.
  Scalar y_range() const { return y_range_; }
  Eigen::Index dimension() const { return nodes_.cols(); }

  /// sum_k c_k exp(-t |x - x_k|), evaluated as sum_k c_k + sum_k c_k expm1(-t |x - x_k|)
  /// so that the x-dependent part carries no cancellation at small t.
  template <typename Point>
  Scalar operator()(const Eigen::MatrixBase<Point>& x) const {
    if (x.size() != nodes_.cols()) throw InputError("interpolant: point dimension mismatch");
    return static_cast<Scalar>(coeff_sum_ + detail::kernel_offset_sum(nodes_, coeffs_, t_, x));
  }

 private:
  Matrix<Scalar> nodes_;
  Vector<Scalar> coeffs_;
  Scalar t_;
  Scalar y_range_;
  long double coeff_sum_;
};

/// Fits the interpolant through (points_j, values_j). `sys` must be the
/// similarity system of exactly these points.
template <typename Scalar>
Interpolant<Scalar> fit(const Matrix<Scalar>& points, const std::type_identity_t<Vector<Scalar>>& values,
                        const SimilaritySystem<Scalar>& sys) {
  if (points.rows() != sys.size() || values.size() != sys.size()) {
    throw InputError("fit: points, values and similarity system sizes differ");
  }
  if (!values.allFinite()) throw InputError("fit: non-finite values");
  Vector<Scalar> coeffs = sys.solve(values);
  // Two rounds of refinement against residuals taken in extended precision,
  // with the same kernel evaluation the interpolant uses.
  const Eigen::Index n = values.size();
  for (int round = 0; round < 2; ++round) {
    const long double total = detail::accurate_sum(coeffs);
    Vector<Scalar> residual(n);
    for (Eigen::Index j = 0; j < n; ++j) {
      const long double fitted = total + detail::kernel_offset_sum(points, coeffs, sys.scale(), points.row(j).transpose());
      residual(j) = static_cast<Scalar>(static_cast<long double>(values(j)) - fitted);
    }
    coeffs += sys.solve(residual);
  }
  Scalar range = values.maxCoeff() - values.minCoeff();
  if (range == Scalar(0)) range = Scalar(1);
  return Interpolant<Scalar>(points, std::move(coeffs), sys.scale(), range);
}

template <typename Scalar, typename Point>
Scalar eval(const Interpolant<Scalar>& interp, const Eigen::MatrixBase<Point>& x) {
  return interp(x);
}

/// |T(x_j) - y_j| / max(|y_j|, floor) at every row of `points`.
template <typename Scalar>
Vector<Scalar> relative_errors(const Interpolant<Scalar>& interp, const std::type_identity_t<Matrix<Scalar>>& points,
                               const std::type_identity_t<Vector<Scalar>>& values,
                               Scalar floor = Scalar(kRelativeErrorFloor)) {
  if (points.rows() != values.size()) throw InputError("relative_errors: size mismatch");
  Vector<Scalar> err(values.size());
  for (Eigen::Index j = 0; j < values.size(); ++j) {
    const Scalar denom = std::max(std::abs(values(j)), floor);
    err(j) = std::abs(interp(points.row(j).transpose()) - values(j)) / denom;
  }
  return err;
}

}  // namespace explo2
