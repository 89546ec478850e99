#pragma once

// Bound-constrained local minimization of cheap scalar fields.

#include <Eigen/Core>

#include <functional>
#include <optional>
#include <string>

#include "explo2/box.hpp"

namespace explo2 {

/// A scalar field on R^D, optionally with an analytic gradient.
class ScalarField {
 public:
  virtual ~ScalarField() = default;

  virtual double value(const Eigen::VectorXd& x) const = 0;

  /// Writes f(x) and its gradient. Returns false when no gradient is available
  /// at x; the caller then differences value().
  virtual bool value_and_gradient(const Eigen::VectorXd& x, double& f, Eigen::VectorXd& grad) const {
    (void)x;
    (void)f;
    (void)grad;
    return false;
  }
};

/// Adapts callables to ScalarField.
class FunctionField : public ScalarField {
 public:
  using Value = std::function<double(const Eigen::VectorXd&)>;
  using Gradient = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

  explicit FunctionField(Value f, Gradient g = nullptr) : f_(std::move(f)), g_(std::move(g)) {}

  double value(const Eigen::VectorXd& x) const override { return f_(x); }
  bool value_and_gradient(const Eigen::VectorXd& x, double& f, Eigen::VectorXd& grad) const override {
    if (!g_) return false;
    f = f_(x);
    grad = g_(x);
    return true;
  }

 private:
  Value f_;
  Gradient g_;
};

struct LocalSolveOptions {
  double tol = 1e-6;
  int max_iterations = 0;  ///< 0 selects 200 * D
  int memory = 10;         ///< stored curvature pairs
};

struct LocalSolveResult {
  Eigen::VectorXd x_min;
  double f_min = 0.0;
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
  std::optional<std::string> failure_reason;
};

class LocalSolver {
 public:
  virtual ~LocalSolver() = default;
  virtual LocalSolveResult minimize(const ScalarField& f, const Eigen::VectorXd& x0, const Box& box,
                                    const LocalSolveOptions& options) const = 0;
};

/// Limited-memory BFGS with projection onto the box and a backtracking
/// Armijo search along the projected path. Directions are built on the free
/// variables; steepest descent is used whenever the quasi-Newton direction
/// is not a descent direction.
class ProjectedQuasiNewton : public LocalSolver {
 public:
  LocalSolveResult minimize(const ScalarField& f, const Eigen::VectorXd& x0, const Box& box,
                            const LocalSolveOptions& options) const override;
};

/// Central differences with h_i = sqrt(eps) (1 + |x_i|), one-sided where the
/// central stencil would leave the box.
Eigen::VectorXd finite_difference_gradient(const ScalarField& f, const Eigen::VectorXd& x, const Box& box,
                                           double fx);

/// Minimizes with the default solver.
LocalSolveResult minimize(const ScalarField& f, const Eigen::VectorXd& x0, const Box& box,
                          const LocalSolveOptions& options = {});

}  // namespace explo2
