#include "explo2/local_solver.hpp"

#include <cmath>
#include <deque>
#include <limits>

#include "explo2/errors.hpp"

namespace explo2 {

using Eigen::VectorXd;

namespace {

constexpr double kArmijo = 1e-4;
constexpr int kMaxBacktracks = 60;

struct Evaluator {
  const ScalarField& f;
  const Box& box;
  int count = 0;

  bool operator()(const VectorXd& x, double& fx, VectorXd& g) {
    ++count;
    if (f.value_and_gradient(x, fx, g) && std::isfinite(fx) && g.allFinite()) return true;
    fx = f.value(x);
    if (!std::isfinite(fx)) return false;
    g = finite_difference_gradient(f, x, box, fx);
    count += 2 * static_cast<int>(x.size());
    return g.allFinite();
  }
};

// Variables held at a bound by a gradient pointing out of the box.
Eigen::Array<bool, Eigen::Dynamic, 1> free_set(const VectorXd& x, const VectorXd& g, const Box& box) {
  Eigen::Array<bool, Eigen::Dynamic, 1> free(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    free(i) = !((x(i) <= box.lower(i) && g(i) > 0) || (x(i) >= box.upper(i) && g(i) < 0));
  }
  return free;
}

VectorXd masked(const VectorXd& v, const Eigen::Array<bool, Eigen::Dynamic, 1>& free) {
  return free.select(v, VectorXd::Zero(v.size()));
}

// Two-loop recursion on the free subspace.
VectorXd lbfgs_direction(const VectorXd& g, const std::deque<std::pair<VectorXd, VectorXd>>& pairs,
                         const Eigen::Array<bool, Eigen::Dynamic, 1>& free) {
  VectorXd q = masked(g, free);
  std::vector<double> alpha(pairs.size()), rho(pairs.size());
  for (std::size_t k = pairs.size(); k-- > 0;) {
    const VectorXd s = masked(pairs[k].first, free), y = masked(pairs[k].second, free);
    const double sy = s.dot(y);
    rho[k] = sy > 0 ? 1.0 / sy : 0.0;
    alpha[k] = rho[k] * s.dot(q);
    q -= alpha[k] * y;
  }
  double gamma = 1.0;
  if (!pairs.empty()) {
    const VectorXd s = masked(pairs.back().first, free), y = masked(pairs.back().second, free);
    const double yy = y.squaredNorm();
    if (yy > 0 && s.dot(y) > 0) gamma = s.dot(y) / yy;
  }
  q *= gamma;
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const VectorXd s = masked(pairs[k].first, free), y = masked(pairs[k].second, free);
    const double beta = rho[k] * y.dot(q);
    q += (alpha[k] - beta) * s;
  }
  return -masked(q, free);
}

}  // namespace

VectorXd finite_difference_gradient(const ScalarField& f, const VectorXd& x, const Box& box, double fx) {
  const double root_eps = std::sqrt(std::numeric_limits<double>::epsilon());
  VectorXd g(x.size());
  VectorXd probe = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double h = root_eps * (1.0 + std::abs(x(i)));
    const bool up = x(i) + h <= box.upper(i), down = x(i) - h >= box.lower(i);
    if (up && down) {
      probe(i) = x(i) + h;
      const double fp = f.value(probe);
      probe(i) = x(i) - h;
      const double fm = f.value(probe);
      g(i) = (fp - fm) / (2 * h);
    } else if (up) {
      probe(i) = x(i) + h;
      g(i) = (f.value(probe) - fx) / h;
    } else {
      probe(i) = x(i) - h;
      g(i) = (fx - f.value(probe)) / h;
    }
    probe(i) = x(i);
  }
  return g;
}

LocalSolveResult ProjectedQuasiNewton::minimize(const ScalarField& f, const VectorXd& x0, const Box& box,
                                                const LocalSolveOptions& options) const {
  if (x0.size() != box.dimension()) throw InputError("minimize: start point dimension does not match the box");
  const double tol = options.tol;
  const int max_iterations = options.max_iterations > 0 ? options.max_iterations : 200 * static_cast<int>(x0.size());
  const double max_extent = box.extent().maxCoeff();

  Evaluator eval{f, box};
  LocalSolveResult out;
  VectorXd x = box.project(x0);
  double fx;
  VectorXd g;
  if (!eval(x, fx, g)) {
    out.x_min = x;
    out.f_min = fx;
    out.evaluations = eval.count;
    out.failure_reason = "non-finite value or gradient at the start point";
    return out;
  }

  std::deque<std::pair<VectorXd, VectorXd>> pairs;
  for (int iter = 1; iter <= max_iterations; ++iter) {
    out.iterations = iter;
    const VectorXd projected_step = box.project(x - g) - x;
    if (projected_step.lpNorm<Eigen::Infinity>() <= tol) {
      out.converged = true;
      break;
    }

    const auto free = free_set(x, g, box);
    VectorXd d = lbfgs_direction(g, pairs, free);
    if (!(g.dot(d) < 0)) {
      pairs.clear();
      d = -masked(g, free);
    }
    double step = 1.0;
    if (pairs.empty()) step = std::min(1.0, 0.25 * max_extent / d.lpNorm<Eigen::Infinity>());

    VectorXd x_new, g_new;
    double f_new = 0;
    bool accepted = false, finite = true;
    for (int k = 0; k < kMaxBacktracks; ++k, step *= 0.5) {
      x_new = box.project(x + step * d);
      const double decrease = g.dot(x_new - x);
      if (!(decrease < 0)) break;
      if (!eval(x_new, f_new, g_new)) {
        finite = false;
        continue;
      }
      finite = true;
      if (f_new <= fx + kArmijo * decrease) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      // No decrease representable along this direction: stationary to working precision,
      // unless every trial hit non-finite values.
      if (!finite) out.failure_reason = "non-finite value during line search";
      out.converged = finite;
      break;
    }

    const VectorXd s = x_new - x, y = g_new - g;
    const double step_norm = s.norm();
    x = x_new;
    fx = f_new;
    g = g_new;
    if (s.dot(y) > 1e-12 * step_norm * y.norm()) {
      pairs.emplace_back(s, y);
      if (static_cast<int>(pairs.size()) > options.memory) pairs.pop_front();
    }
    if (step_norm <= tol * (1.0 + x.norm())) {
      out.converged = true;
      break;
    }
  }
  out.x_min = box.project(x);
  out.f_min = fx;
  out.evaluations = eval.count;
  if (!out.converged && !out.failure_reason) out.failure_reason = "iteration limit reached";
  return out;
}

LocalSolveResult minimize(const ScalarField& f, const VectorXd& x0, const Box& box, const LocalSolveOptions& options) {
  return ProjectedQuasiNewton().minimize(f, x0, box, options);
}

}  // namespace explo2
