#include "explo2/optimizer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <future>
#include <numeric>

#include "explo2/errors.hpp"

namespace explo2 {

using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kDuplicateRadius = 1e-12;
constexpr double kDuplicateJitter = 1e-9;

// Objective values as seen by the interpolant: non-finite entries are replaced
// by the largest finite value in the cloud (0 if there is none).
std::vector<double> model_values(const std::vector<double>& ys) {
  double worst = -kInf;
  for (double y : ys)
    if (std::isfinite(y)) worst = std::max(worst, y);
  if (!std::isfinite(worst)) worst = 0.0;
  std::vector<double> out(ys);
  for (double& y : out)
    if (!std::isfinite(y)) y = worst;
  return out;
}

std::vector<double> evaluate_all(const Objective& f, const std::vector<VectorXd>& points, bool concurrent) {
  std::vector<double> values(points.size());
  if (!concurrent || points.size() < 2) {
    for (std::size_t i = 0; i < points.size(); ++i) values[i] = f(points[i]);
    return values;
  }
  std::vector<std::future<double>> pending;
  pending.reserve(points.size());
  for (const VectorXd& x : points) pending.push_back(std::async(std::launch::async, [&f, &x] { return f(x); }));
  for (std::size_t i = 0; i < points.size(); ++i) values[i] = pending[i].get();
  return values;
}

}  // namespace

InitStrategy parse_init_strategy(std::string_view name) {
  if (name == "uniform") return InitStrategy::uniform;
  if (name == "near-corners" || name == "near_corners") return InitStrategy::near_corners;
  if (name == "corners") return InitStrategy::corners;
  throw InputError("unknown init strategy '" + std::string(name) + "'");
}

std::string to_string(InitStrategy init) {
  switch (init) {
    case InitStrategy::uniform:
      return "uniform";
    case InitStrategy::near_corners:
      return "near-corners";
    case InitStrategy::corners:
      return "corners";
  }
  return "unknown";
}

void Explo2Config::validate(Eigen::Index dim) const {
  if (dim < 1) throw InputError("dimension must be positive");
  if (budget <= dim + 1) throw InputError("budget must exceed D + 1");
  if (n_parallel < 1 || n_parallel > 128) throw InputError("n_parallel must lie in [1, 128]");
  if (n_sigma < 16) throw InputError("n_sigma must be at least 16");
  if (n_explore < 16) throw InputError("n_explore must be at least 16");
  if (n_tries < 0) throw InputError("n_tries must be nonnegative");
  if (!(t > 0) || !std::isfinite(t)) throw InputError("scale t must be positive and finite");
  if (!(init_margin >= 0 && init_margin <= 1)) throw InputError("init_margin must lie in [0, 1]");
  if (lambda && lambda->budget() != budget) throw InputError("lambda schedule does not match the budget");
}

LambdaSchedule Explo2Config::schedule() const { return lambda ? *lambda : LambdaSchedule::linear(budget); }

void PointCloud::append(VectorXd x, double y) {
  xs.push_back(std::move(x));
  ys.push_back(y);
  rel_errs.push_back(kInf);
}

std::vector<VectorXd> initialize(const Explo2Config& config, const Box& box, Rng& rng) {
  const Eigen::Index dim = box.dimension();
  const VectorXd extent = box.extent();
  std::vector<VectorXd> pts;
  switch (config.init) {
    case InitStrategy::uniform:
      while (static_cast<Eigen::Index>(pts.size()) < dim + 1) {
        VectorXd x = rng.uniform_in(box);
        if (std::none_of(pts.begin(), pts.end(), [&](const VectorXd& p) { return p == x; })) pts.push_back(x);
      }
      break;
    case InitStrategy::near_corners: {
      const double m = config.init_margin;
      const auto jitter = [&] {
        VectorXd j(dim);
        for (Eigen::Index i = 0; i < dim; ++i) j(i) = m * extent(i) * rng.uniform();
        return j;
      };
      pts.push_back(box.project(box.lower + jitter()));
      for (Eigen::Index i = 0; i < dim; ++i) {
        VectorXd x = box.lower + jitter();
        x(i) += (1 - m) * extent(i);
        pts.push_back(box.project(x));
      }
      break;
    }
    case InitStrategy::corners:
      pts.push_back(box.lower);
      for (Eigen::Index i = 0; i < dim; ++i) {
        VectorXd x = box.lower;
        x(i) = box.upper(i);
        pts.push_back(x);
      }
      break;
  }
  return pts;
}

std::vector<std::size_t> downsample(const PointCloud& cloud, int n, const Explo2Config& config,
                                    const LambdaSchedule& schedule) {
  const std::size_t size = cloud.size();
  std::vector<std::size_t> all(size);
  std::iota(all.begin(), all.end(), std::size_t{0});
  if (n <= config.n_sigma || size <= static_cast<std::size_t>(config.n_sigma)) return all;

  const double first = schedule.at(1);
  const double ratio = first > 0 ? std::min(1.0, schedule.at(n) / first) : 0.0;
  const auto n_rho = static_cast<std::size_t>(std::clamp(std::lround(config.n_sigma * ratio), 0L,
                                                         static_cast<long>(config.n_sigma)));

  std::vector<std::size_t> by_error = all;
  std::stable_sort(by_error.begin(), by_error.end(),
                   [&](std::size_t a, std::size_t b) { return cloud.rel_errs[a] > cloud.rel_errs[b]; });
  std::vector<std::size_t> by_value = all;
  std::stable_sort(by_value.begin(), by_value.end(), [&](std::size_t a, std::size_t b) { return cloud.ys[a] < cloud.ys[b]; });

  std::vector<std::size_t> chosen(by_error.begin(), by_error.begin() + n_rho);
  std::vector<bool> taken(size, false);
  for (std::size_t i : chosen) taken[i] = true;
  for (std::size_t i : by_value) {
    if (chosen.size() >= static_cast<std::size_t>(config.n_sigma)) break;
    if (!taken[i]) chosen.push_back(i);
  }
  return chosen;
}

BatchProposal select_batch(const Interpolant<double>& exploit, ExplorationTerm explore, double lambda, int count,
                           const Explo2Config& config, const Box& box, Rng& rng) {
  static const ProjectedQuasiNewton default_solver;
  const LocalSolver& solver = config.local_solver ? *config.local_solver : default_solver;
  const VectorXd extent = box.extent();

  BatchProposal out;
  for (int j = 0; j < count; ++j) {
    out.max_exploration_size = std::max<std::size_t>(out.max_exploration_size, explore.nodes().rows());
    const double range = explore_range(explore, box, config.n_explore, rng);
    const Surrogate s(exploit, explore, range, lambda);

    std::optional<VectorXd> best;
    double best_value = kInf;
    bool failed = false;
    for (int k = 0; k < config.n_tries; ++k) {
      const LocalSolveResult res = solver.minimize(s, rng.uniform_in(box), box, config.solver);
      if (!std::isfinite(res.f_min) || !res.x_min.allFinite()) {
        failed = true;
        break;
      }
      if (res.f_min < best_value) {
        best = res.x_min;
        best_value = res.f_min;
      } else if (config.early_exit) {
        break;
      }
    }
    VectorXd x = (!failed && best) ? *best : rng.uniform_in(box);
    if (explore.nearest_distance(x) <= kDuplicateRadius) {
      for (Eigen::Index i = 0; i < x.size(); ++i) x(i) += kDuplicateJitter * extent(i) * (2 * rng.uniform() - 1);
      x = box.project(x);
    }
    out.points.push_back(x);
    out.fallback.push_back(failed);
    if (j + 1 < count) {
      try {
        explore = explore.adjoin(x);
      } catch (const DegenerateGeometryError&) {
        // Keep the previous exploration set; the next candidate is merely less repelled.
      }
    }
  }
  return out;
}

RunResult run(const Objective& f, const Box& box, const Explo2Config& config) {
  const Eigen::Index dim = box.dimension();
  config.validate(dim);
  const LambdaSchedule schedule = config.schedule();
  Rng rng(config.seed);
  const auto start = std::chrono::steady_clock::now();
  const auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(); };

  RunResult result;
  const auto commit = [&](const std::vector<VectorXd>& points, const std::vector<bool>& fallback, int batch_id,
                          double lambda) {
    const std::vector<double> values = evaluate_all(f, points, config.concurrent_evaluations);
    for (std::size_t i = 0; i < points.size(); ++i) {
      const TraceRecord& rec = result.trace.append(points[i], values[i], batch_id,
                                                   batch_id == 0 ? schedule.at(static_cast<int>(result.cloud.size()) + 1) : lambda,
                                                   fallback[i], elapsed());
      result.cloud.append(points[i], rec.value);
    }
  };

  const std::vector<VectorXd> init = initialize(config, box, rng);
  commit(init, std::vector<bool>(init.size(), false), 0, 0.0);

  const auto budget = static_cast<std::size_t>(config.budget);
  for (int batch_id = 1; result.cloud.size() < budget; ++batch_id) {
    const int n = static_cast<int>(result.cloud.size()) + 1;
    const int count = static_cast<int>(std::min<std::size_t>(config.n_parallel, budget - result.cloud.size()));
    const double lambda = schedule.at(n);

    const std::vector<std::size_t> active = downsample(result.cloud, n, config, schedule);
    const std::vector<double> values = model_values(result.cloud.ys);
    MatrixXd nodes(active.size(), dim);
    VectorXd y(active.size());
    for (std::size_t i = 0; i < active.size(); ++i) {
      nodes.row(i) = result.cloud.xs[active[i]].transpose();
      y(i) = values[active[i]];
    }

    std::shared_ptr<const SimilaritySystem<double>> sys;
    try {
      sys = std::make_shared<const SimilaritySystem<double>>(similarity(distance_matrix(nodes), config.t));
    } catch (const DegenerateGeometryError&) {
      std::vector<VectorXd> random(count);
      for (auto& x : random) x = rng.uniform_in(box);
      commit(random, std::vector<bool>(count, true), batch_id, lambda);
      continue;
    }
    const Interpolant<double> exploit = fit(nodes, y, *sys);
    BatchProposal batch = select_batch(exploit, ExplorationTerm(nodes, sys), lambda, count, config, box, rng);
    result.max_active_size = std::max(result.max_active_size, batch.max_exploration_size);
    commit(batch.points, batch.fallback, batch_id, lambda);

    // Out-of-sample errors of the pre-batch interpolant over the whole history.
    const std::vector<double> updated = model_values(result.cloud.ys);
    for (std::size_t i = 0; i < result.cloud.size(); ++i) {
      const double denom = std::max(std::abs(updated[i]), kRelativeErrorFloor);
      result.cloud.rel_errs[i] = std::abs(exploit(result.cloud.xs[i]) - updated[i]) / denom;
    }
  }
  return result;
}

}  // namespace explo2
