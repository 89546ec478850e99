#pragma once

// Batch surrogate optimizer: RBF exploitation blended with differential-magnitude
// exploration, weighted by a lambda schedule over the evaluation budget.

#include <Eigen/Core>

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "explo2/box.hpp"
#include "explo2/lambda_schedule.hpp"
#include "explo2/local_solver.hpp"
#include "explo2/random.hpp"
#include "explo2/rbf.hpp"
#include "explo2/surrogate.hpp"
#include "explo2/trace.hpp"

namespace explo2 {

using Objective = std::function<double(const Eigen::VectorXd&)>;

enum class InitStrategy { uniform, near_corners, corners };

/// Accepts "uniform", "near-corners", "corners" (underscores accepted).
InitStrategy parse_init_strategy(std::string_view name);
std::string to_string(InitStrategy init);

struct Explo2Config {
  int budget = 0;  ///< N, total objective evaluations
  int n_parallel = 1;
  int n_sigma = 100;    ///< active-set cap
  int n_explore = 100;  ///< corner sample size for R_max
  int n_tries = 3;      ///< inner-solver restarts per candidate
  std::optional<LambdaSchedule> lambda;  ///< linear over the budget when empty
  InitStrategy init = InitStrategy::uniform;
  double init_margin = 0.1;  ///< jitter fraction for near_corners
  std::uint64_t seed = 0;
  double t = std::sqrt(std::numeric_limits<double>::epsilon());
  /// Stop restarting once a restart fails to improve on the best so far.
  bool early_exit = true;
  /// Evaluate the objective for the members of a batch on separate threads.
  bool concurrent_evaluations = false;
  LocalSolveOptions solver;
  std::shared_ptr<const LocalSolver> local_solver;  ///< projected quasi-Newton when null

  /// Throws InputError unless N > D + 1, n_parallel in [1, 128], n_sigma >= 16,
  /// n_explore >= 16, n_tries >= 0, t > 0, and any lambda table covers N.
  void validate(Eigen::Index dim) const;
  LambdaSchedule schedule() const;
};

/// Evaluated points. rel_errs are +inf until the first surrogate has been fit.
struct PointCloud {
  std::vector<Eigen::VectorXd> xs;
  std::vector<double> ys;
  std::vector<double> rel_errs;

  std::size_t size() const { return xs.size(); }
  void append(Eigen::VectorXd x, double y);
};

/// The D + 1 initial points.
std::vector<Eigen::VectorXd> initialize(const Explo2Config& config, const Box& box, Rng& rng);

/// Active set (0-based indices into the cloud) for choosing evaluation n (1-based).
std::vector<std::size_t> downsample(const PointCloud& cloud, int n, const Explo2Config& config,
                                    const LambdaSchedule& schedule);

struct BatchProposal {
  std::vector<Eigen::VectorXd> points;
  std::vector<bool> fallback;
  std::size_t max_exploration_size = 0;
};

/// Proposes `count` points. The interpolant stays fixed while each accepted
/// candidate is adjoined to the exploration set before the next is chosen.
BatchProposal select_batch(const Interpolant<double>& exploit, ExplorationTerm explore, double lambda, int count,
                           const Explo2Config& config, const Box& box, Rng& rng);

struct RunResult {
  PointCloud cloud;
  RunTrace trace;
  std::size_t max_active_size = 0;  ///< largest exploration set used
};

/// Evaluates f exactly config.budget times.
RunResult run(const Objective& f, const Box& box, const Explo2Config& config);

}  // namespace explo2
