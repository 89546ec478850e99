#pragma once

// Change in magnitude when one candidate point is adjoined to a factorized
// similarity system.
//
// With Z[zeta] = [[Z, zeta], [zeta', 1]] and w = Z^{-1} 1,
//
//   Mag(Z[zeta]) - Mag(Z) = (1 - zeta'w)^2 / (1 - zeta'Z^{-1}zeta),
//   w[zeta] = (w; 0) + (1 - zeta'w) / (1 - zeta'Z^{-1}zeta) * (-Z^{-1}zeta; 1).
//
// At small t every zeta_k is close to 1 and both numerator and denominator
// are O(t). There the quantities are evaluated through the offset
// e = zeta - 1 = expm1(-t r), which keeps them smooth in the candidate
// location down to rounding of e itself:
//
//   1 - zeta'w           = (1 - Mag) - e'w
//   1 - zeta'Z^{-1}zeta  = (1 - Mag) - 2 e'w - e'Z^{-1}e

#include <Eigen/Core>
#include <Eigen/LU>

#include <cmath>
#include <initializer_list>
#include <type_traits>
#include <utility>

#include "explo2/errors.hpp"
#include "explo2/magnitude.hpp"

namespace explo2 {

/// Denominators 1 - zeta'Z^{-1}zeta below this count as zero.
inline constexpr double kSchurGuard = 1e-12;

/// Similarities between one candidate and each point of a system.
template <typename Scalar>
class CandidateSimilarity {
 public:
  /// zeta_k = exp(-t |x - x_k|) against the rows of `nodes`.
  template <typename Nodes, typename Point>
  static CandidateSimilarity from_points(const Eigen::MatrixBase<Nodes>& nodes, const Eigen::MatrixBase<Point>& x,
                                         Scalar t) {
    if (x.size() != nodes.cols()) throw InputError("candidate dimension does not match nodes");
    if (!x.allFinite()) throw InputError("candidate has non-finite coordinates");
    const Eigen::Index n = nodes.rows();
    Vector<Scalar> zeta(n), offset(n);
    for (Eigen::Index k = 0; k < n; ++k) {
      const Scalar r = (nodes.row(k).transpose() - x).norm();
      zeta(k) = std::exp(-t * r);
      offset(k) = std::expm1(-t * r);
    }
    return CandidateSimilarity(std::move(zeta), std::move(offset));
  }

  /// Raw similarity values, each in [0, 1] (0 stands for a point at infinity).
  static CandidateSimilarity from_values(Vector<Scalar> zeta) {
    if (!zeta.allFinite() || (zeta.array() < Scalar(0)).any() || (zeta.array() > Scalar(1)).any()) {
      throw InputError("candidate similarities must lie in [0, 1]");
    }
    Vector<Scalar> offset = zeta.array() - Scalar(1);
    return CandidateSimilarity(std::move(zeta), std::move(offset));
  }

  Eigen::Index size() const { return zeta_.size(); }
  const Vector<Scalar>& values() const { return zeta_; }
  /// zeta - 1, computed without cancellation when built from points.
  const Vector<Scalar>& offset() const { return offset_; }
  /// True when every similarity is at least 1/2, i.e. the kernel is nearly flat
  /// over this candidate and the offset form is the accurate one.
  bool near_flat() const { return (offset_.array() >= Scalar(-0.5)).all(); }

 private:
  CandidateSimilarity(Vector<Scalar> zeta, Vector<Scalar> offset) : zeta_(std::move(zeta)), offset_(std::move(offset)) {}

  Vector<Scalar> zeta_;
  Vector<Scalar> offset_;
};

/// The pieces of the adjoining formula for one candidate.
template <typename Scalar>
struct SchurTerms {
  Scalar numerator_root;  ///< 1 - zeta'w
  Scalar denominator;     ///< 1 - zeta'Z^{-1}zeta (Schur complement)
  Vector<Scalar> z_inv_zeta;
};

template <typename Scalar>
SchurTerms<Scalar> schur_terms(const SimilaritySystem<Scalar>& sys, const CandidateSimilarity<Scalar>& zeta) {
  if (zeta.size() != sys.size()) throw InputError("candidate similarity length does not match the system");
  const Vector<Scalar>& w = sys.weighting();
  SchurTerms<Scalar> out;
  if (zeta.near_flat()) {
    const Vector<Scalar>& e = zeta.offset();
    const Vector<Scalar> u = sys.solve(e);
    const Scalar base = Scalar(1) - sys.magnitude();
    const Scalar ew = e.dot(w);
    out.numerator_root = base - ew;
    out.denominator = base - Scalar(2) * ew - e.dot(u);
    out.z_inv_zeta = w + u;
  } else {
    const Vector<Scalar>& z = zeta.values();
    out.z_inv_zeta = sys.solve(z);
    out.numerator_root = Scalar(1) - z.dot(w);
    out.denominator = Scalar(1) - z.dot(out.z_inv_zeta);
  }
  return out;
}

/// Differential magnitude (1 - zeta'w)^2 / (1 - zeta'Z^{-1}zeta), or 0 when the
/// Schur complement is below kSchurGuard (candidate on top of a point).
/// Throws NumericalError if the complement is below -kSchurGuard.
template <typename Scalar>
Scalar delta_magnitude(const SimilaritySystem<Scalar>& sys, const CandidateSimilarity<Scalar>& zeta) {
  const SchurTerms<Scalar> s = schur_terms(sys, zeta);
  if (s.denominator < -Scalar(kSchurGuard)) {
    throw NumericalError("negative Schur complement: augmented similarity matrix is not positive definite");
  }
  if (s.denominator < Scalar(kSchurGuard)) return Scalar(0);
  return s.numerator_root * s.numerator_root / s.denominator;
}

/// Weighting of Z[zeta] from the weighting of Z, without refactorizing.
template <typename Scalar>
Vector<Scalar> extend_weighting(const SimilaritySystem<Scalar>& sys, const CandidateSimilarity<Scalar>& zeta) {
  const SchurTerms<Scalar> s = schur_terms(sys, zeta);
  if (!(s.denominator > Scalar(kSchurGuard))) {
    throw DegenerateGeometryError("Schur complement too small to extend the weighting; rebuild from scratch");
  }
  const Scalar coef = s.numerator_root / s.denominator;
  const Eigen::Index n = sys.size();
  Vector<Scalar> out(n + 1);
  out.head(n) = sys.weighting() - coef * s.z_inv_zeta;
  out(n) = coef;
  return out;
}

/// First-order small-t form of the differential magnitude, given the distance
/// matrix d of the existing points and the candidate's distances `delta`:
///
///   t ((delta'omega - 1)/(1'omega - t))^2 (1'omega - t)
///     / (-1 + 2 delta'omega + delta'[(1'omega) d^{-1} - omega omega']delta),
///
/// with omega = d^{-1} 1. Used to check delta_magnitude at tiny t.
template <typename Scalar>
Scalar delta_magnitude_small_t(const DistanceMatrix<Scalar>& d, const std::type_identity_t<Vector<Scalar>>& delta,
                               std::type_identity_t<Scalar> t) {
  const Eigen::Index n = d.size();
  if (delta.size() != n) throw InputError("candidate distance vector has wrong length");
  Eigen::FullPivLU<Matrix<Scalar>> lu(d.entries());
  if (n < 2 || !lu.isInvertible()) throw DegenerateGeometryError("distance matrix is singular");
  const Vector<Scalar> omega = lu.solve(Vector<Scalar>::Ones(n));
  const Vector<Scalar> d_inv_delta = lu.solve(delta);
  const Scalar total = omega.sum();
  const Scalar delta_omega = delta.dot(omega);
  const Scalar quad = total * delta.dot(d_inv_delta) - delta_omega * delta_omega;
  const Scalar ratio = (delta_omega - Scalar(1)) / (total - t);
  return t * ratio * ratio * (total - t) / (Scalar(-1) + Scalar(2) * delta_omega + quad);
}

struct SubmodularityCheck {
  double lhs;  ///< Mag(X + x1) + Mag(X + x2)
  double rhs;  ///< Mag(X + x1 + x2) + Mag(X)
};

/// Magnitude on the planar set {(1,0),(0,1),(-1,0),(2,0)} with X the first two
/// points, x1 = (-1,0), x2 = (2,0). Submodularity would need lhs >= rhs; it
/// fails (lhs < rhs) at t = 1.
inline SubmodularityCheck submodularity_counterexample(double t = 1.0) {
  const auto mag = [t](std::initializer_list<std::pair<double, double>> pts) {
    Matrix<double> p(static_cast<Eigen::Index>(pts.size()), 2);
    Eigen::Index i = 0;
    for (const auto& [a, b] : pts) {
      p(i, 0) = a;
      p(i, 1) = b;
      ++i;
    }
    return similarity(distance_matrix(p), t).magnitude();
  };
  const double with_x1 = mag({{1, 0}, {0, 1}, {-1, 0}});
  const double with_x2 = mag({{1, 0}, {0, 1}, {2, 0}});
  const double with_both = mag({{1, 0}, {0, 1}, {-1, 0}, {2, 0}});
  const double base = mag({{1, 0}, {0, 1}});
  return {with_x1 + with_x2, with_both + base};
}

}  // namespace explo2
