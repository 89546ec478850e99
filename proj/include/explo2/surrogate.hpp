#pragma once

// The optimizer's surrogate S(x) = T(x)/y_range - lambda R(x)/R_max, with T the
// RBF interpolant of the active set and R the differential magnitude of a
// candidate against the current exploration set.

#include <Eigen/Core>

#include <memory>
#include <optional>

#include "explo2/box.hpp"
#include "explo2/differential_magnitude.hpp"
#include "explo2/local_solver.hpp"
#include "explo2/magnitude.hpp"
#include "explo2/random.hpp"
#include "explo2/rbf.hpp"

namespace explo2 {

/// Within this distance of a node, analytic gradients are not offered.
inline constexpr double kNodeProximity = 1e-8;

/// R(x): differential magnitude of x against a set of exploration nodes.
class ExplorationTerm {
 public:
  /// Factorizes the similarity system of `nodes` (rows are points).
  ExplorationTerm(Eigen::MatrixXd nodes, double t);
  /// Reuses an existing factorization of exactly these nodes.
  ExplorationTerm(Eigen::MatrixXd nodes, std::shared_ptr<const SimilaritySystem<double>> system);

  const Eigen::MatrixXd& nodes() const { return nodes_; }
  const SimilaritySystem<double>& system() const { return *system_; }
  double scale() const { return system_->scale(); }

  /// NaN when the Schur complement at x is clearly negative.
  double operator()(const Eigen::VectorXd& x) const;
  /// False within kNodeProximity of a node, or where the value is not finite.
  bool value_and_gradient(const Eigen::VectorXd& x, double& r, Eigen::VectorXd& grad) const;

  /// The term for the node set with x appended, refactorized from scratch.
  ExplorationTerm adjoin(const Eigen::VectorXd& x) const;

  /// Distance from x to the nearest node.
  double nearest_distance(const Eigen::VectorXd& x) const;

 private:
  Eigen::MatrixXd nodes_;
  std::shared_ptr<const SimilaritySystem<double>> system_;
};

/// R_max: the largest R over the box corners. All 2^D corners when
/// 2^D <= n_explore, otherwise n_explore random corners (with replacement).
/// Returns 1 when the maximum is 0. Non-finite corner values are skipped.
double explore_range(const ExplorationTerm& r, const Box& box, int n_explore, Rng& rng);

/// S = T/y_range - lambda R/R_max. Holds references: `exploit` and `explore`
/// must outlive the surrogate.
class Surrogate : public ScalarField {
 public:
  Surrogate(const Interpolant<double>& exploit, const ExplorationTerm& explore, double explore_range, double lambda);

  double value(const Eigen::VectorXd& x) const override;
  bool value_and_gradient(const Eigen::VectorXd& x, double& s, Eigen::VectorXd& grad) const override;

  double exploitation(const Eigen::VectorXd& x) const { return exploit_(x); }
  double exploration(const Eigen::VectorXd& x) const { return explore_(x); }
  double lambda() const { return lambda_; }
  double explore_range() const { return range_; }
  double y_range() const { return exploit_.y_range(); }

 private:
  const Interpolant<double>& exploit_;
  const ExplorationTerm& explore_;
  double range_;
  double lambda_;
};

Surrogate build_surrogate(const Interpolant<double>& exploit, const ExplorationTerm& explore, double explore_range,
                          double lambda);

/// Gradient of T at x; nullopt within kNodeProximity of a node.
std::optional<Eigen::VectorXd> interpolant_gradient(const Interpolant<double>& interp, const Eigen::VectorXd& x);

/// Analytic gradient of S; nullopt where S is not differentiable (at a node).
std::optional<Eigen::VectorXd> surrogate_gradient(const Surrogate& s, const Eigen::VectorXd& x);

}  // namespace explo2
