#include "explo2/surrogate.hpp"

#include <cmath>
#include <limits>

#include "explo2/errors.hpp"

namespace explo2 {

using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Distances r_k and the rows of the Jacobian d zeta_k / dx = -t zeta_k (x - x_k)/r_k.
struct Kernel {
  VectorXd r;
  MatrixXd jac;
};

Kernel kernel(const MatrixXd& nodes, const VectorXd& x, double t) {
  const Eigen::Index n = nodes.rows();
  Kernel k{VectorXd(n), MatrixXd(n, x.size())};
  for (Eigen::Index i = 0; i < n; ++i) {
    const VectorXd diff = x - nodes.row(i).transpose();
    const double r = diff.norm();
    k.r(i) = r;
    k.jac.row(i) = (-t * std::exp(-t * r) / r) * diff.transpose();
  }
  return k;
}

}  // namespace

ExplorationTerm::ExplorationTerm(MatrixXd nodes, double t)
    : nodes_(std::move(nodes)),
      system_(std::make_shared<const SimilaritySystem<double>>(similarity(distance_matrix(nodes_), t))) {}

ExplorationTerm::ExplorationTerm(MatrixXd nodes, std::shared_ptr<const SimilaritySystem<double>> system)
    : nodes_(std::move(nodes)), system_(std::move(system)) {
  if (!system_ || system_->size() != nodes_.rows()) throw InputError("exploration term: system does not match nodes");
}

double ExplorationTerm::operator()(const VectorXd& x) const {
  try {
    return delta_magnitude(*system_, CandidateSimilarity<double>::from_points(nodes_, x, scale()));
  } catch (const NumericalError&) {
    return kNaN;
  }
}

bool ExplorationTerm::value_and_gradient(const VectorXd& x, double& r, VectorXd& grad) const {
  if (x.size() != nodes_.cols()) throw InputError("exploration term: point dimension mismatch");
  const Kernel k = kernel(nodes_, x, scale());
  if (k.r.minCoeff() < kNodeProximity) return false;
  // Same evaluation as delta_magnitude.
  const SchurTerms<double> s = schur_terms(*system_, CandidateSimilarity<double>::from_points(nodes_, x, scale()));
  if (!(s.denominator >= kSchurGuard) || !std::isfinite(s.numerator_root)) return false;
  const double a = s.numerator_root, b = s.denominator;
  r = a * a / b;
  // a = 1 - zeta'w, b = 1 - zeta'Z^{-1}zeta.
  const VectorXd grad_a = -k.jac.transpose() * system_->weighting();
  const VectorXd grad_b = -2.0 * (k.jac.transpose() * s.z_inv_zeta);
  grad = (2.0 * a / b) * grad_a - (a * a / (b * b)) * grad_b;
  return grad.allFinite();
}

ExplorationTerm ExplorationTerm::adjoin(const VectorXd& x) const {
  MatrixXd grown(nodes_.rows() + 1, nodes_.cols());
  grown.topRows(nodes_.rows()) = nodes_;
  grown.row(nodes_.rows()) = x.transpose();
  return ExplorationTerm(std::move(grown), scale());
}

double ExplorationTerm::nearest_distance(const VectorXd& x) const {
  return (nodes_.rowwise() - x.transpose()).rowwise().norm().minCoeff();
}

double explore_range(const ExplorationTerm& r, const Box& box, int n_explore, Rng& rng) {
  const Eigen::Index dim = box.dimension();
  double best = 0.0;
  const auto consider = [&](const VectorXd& corner) {
    const double v = r(corner);
    if (std::isfinite(v) && v > best) best = v;
  };
  if (dim < 63 && (std::uint64_t{1} << dim) <= static_cast<std::uint64_t>(n_explore)) {
    const std::uint64_t count = std::uint64_t{1} << dim;
    VectorXd corner(dim);
    for (std::uint64_t mask = 0; mask < count; ++mask) {
      for (Eigen::Index i = 0; i < dim; ++i) corner(i) = (mask >> i) & 1 ? box.upper(i) : box.lower(i);
      consider(corner);
    }
  } else {
    for (int k = 0; k < n_explore; ++k) consider(rng.random_corner(box));
  }
  return best > 0.0 ? best : 1.0;
}

Surrogate::Surrogate(const Interpolant<double>& exploit, const ExplorationTerm& explore, double explore_range,
                     double lambda)
    : exploit_(exploit), explore_(explore), range_(explore_range), lambda_(lambda) {
  if (!(range_ > 0) || !std::isfinite(range_)) throw InputError("surrogate: exploration range must be positive");
  if (!std::isfinite(lambda_)) throw InputError("surrogate: lambda must be finite");
  if (exploit.dimension() != explore.nodes().cols()) throw InputError("surrogate: dimension mismatch");
}

double Surrogate::value(const VectorXd& x) const {
  const double t = exploit_(x) / exploit_.y_range();
  if (lambda_ == 0.0) return t;
  return t - lambda_ * explore_(x) / range_;
}

bool Surrogate::value_and_gradient(const VectorXd& x, double& s, VectorXd& grad) const {
  const auto gt = interpolant_gradient(exploit_, x);
  if (!gt) return false;
  s = exploit_(x) / exploit_.y_range();
  grad = *gt / exploit_.y_range();
  if (lambda_ == 0.0) return true;
  double r;
  VectorXd gr;
  if (!explore_.value_and_gradient(x, r, gr)) return false;
  s -= lambda_ * r / range_;
  grad -= (lambda_ / range_) * gr;
  return std::isfinite(s) && grad.allFinite();
}

Surrogate build_surrogate(const Interpolant<double>& exploit, const ExplorationTerm& explore, double explore_range,
                          double lambda) {
  return Surrogate(exploit, explore, explore_range, lambda);
}

std::optional<VectorXd> interpolant_gradient(const Interpolant<double>& interp, const VectorXd& x) {
  if (x.size() != interp.dimension()) throw InputError("interpolant gradient: point dimension mismatch");
  const MatrixXd& nodes = interp.nodes();
  const double t = interp.scale();
  VectorXd g = VectorXd::Zero(x.size());
  for (Eigen::Index k = 0; k < nodes.rows(); ++k) {
    const VectorXd diff = x - nodes.row(k).transpose();
    const double r = diff.norm();
    if (r < kNodeProximity) return std::nullopt;
    g += (interp.coeffs()(k) * -t * std::exp(-t * r) / r) * diff;
  }
  return g;
}

std::optional<VectorXd> surrogate_gradient(const Surrogate& s, const VectorXd& x) {
  double value;
  VectorXd grad;
  if (!s.value_and_gradient(x, value, grad)) return std::nullopt;
  return grad;
}

}  // namespace explo2
