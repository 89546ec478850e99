#include "explo2/bench/harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <future>
#include <ostream>
#include <set>

#include "explo2/bench/baselines.hpp"
#include "explo2/bench/test_functions.hpp"
#include "explo2/errors.hpp"
#include "explo2/optimizer.hpp"

namespace explo2::bench {

std::vector<std::string> algorithm_names() {
  return {"explo2", "random_search", "inner_only", "pure_explore", "pure_exploit"};
}

void BenchConfig::validate() const {
  const auto names = algorithm_names();
  if (algorithms.empty()) throw InputError("no algorithms selected");
  for (const auto& a : algorithms) {
    if (std::find(names.begin(), names.end(), a) == names.end()) throw InputError("unknown algorithm '" + a + "'");
  }
  if (seeds.empty()) throw InputError("no seeds given");
  if (std::set<std::uint64_t>(seeds.begin(), seeds.end()).size() != seeds.size()) throw InputError("seeds must be distinct");
  if (dim < 1) throw InputError("dimension must be positive");
  if (budget_multiplier < 1) throw InputError("budget multiplier must be positive");
  if (jobs < 1) throw InputError("jobs must be positive");
  make_test_function(function, dim);
  LambdaSchedule::from_name(lambda, budget() > 0 ? budget() : 1, dim);
  parse_init_strategy(init);
  if (budget() <= dim + 1) throw InputError("budget must exceed D + 1");
  if (n_parallel < 1 || n_parallel > 128) throw InputError("n_parallel must lie in [1, 128]");
}

LabeledTrace run_arm(const BenchConfig& config, const std::string& algorithm, std::uint64_t seed) {
  LabeledTrace out{algorithm, seed, {}, std::nullopt};
  try {
    const TestFunction tf = make_test_function(config.function, config.dim, config.shift_seed);
    const Objective f = tf.evaluator;
    const int budget = config.budget();
    if (algorithm == "random_search") {
      out.trace = baseline_random_search(f, tf.box, budget, seed);
    } else if (algorithm == "inner_only") {
      out.trace = baseline_inner_only(f, tf.box, budget, seed);
    } else {
      Explo2Config c;
      c.budget = budget;
      c.n_parallel = config.n_parallel;
      c.seed = seed;
      c.init = parse_init_strategy(config.init);
      if (algorithm == "explo2") {
        c.lambda = LambdaSchedule::from_name(config.lambda, budget, config.dim);
      } else if (algorithm == "pure_explore") {
        c.lambda = LambdaSchedule::constant(1.0, budget);
      } else if (algorithm == "pure_exploit") {
        c.lambda = LambdaSchedule::constant(0.0, budget);
      } else {
        throw InputError("unknown algorithm '" + algorithm + "'");
      }
      out.trace = run(f, tf.box, c).trace;
    }
  } catch (const std::exception& e) {
    out.error = e.what();
  }
  return out;
}

BenchResult run_bench(const BenchConfig& config) {
  config.validate();
  std::vector<std::pair<std::string, std::uint64_t>> arms;
  for (const auto& a : config.algorithms)
    for (std::uint64_t s : config.seeds) arms.emplace_back(a, s);

  BenchResult result;
  result.traces.resize(arms.size());
  if (config.jobs <= 1) {
    for (std::size_t i = 0; i < arms.size(); ++i) result.traces[i] = run_arm(config, arms[i].first, arms[i].second);
  } else {
    for (std::size_t start = 0; start < arms.size(); start += config.jobs) {
      std::vector<std::future<LabeledTrace>> running;
      const std::size_t stop = std::min(arms.size(), start + static_cast<std::size_t>(config.jobs));
      for (std::size_t i = start; i < stop; ++i) {
        running.push_back(std::async(std::launch::async, run_arm, std::cref(config), arms[i].first, arms[i].second));
      }
      for (std::size_t i = start; i < stop; ++i) result.traces[i] = running[i - start].get();
    }
  }
  result.summary = summarize(result.traces, config.function, config.dim, config.budget());
  return result;
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw InputError("quantile of an empty sample");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  if (frac == 0.0 || values[lo] == values[hi]) return values[lo];
  return values[lo] + frac * (values[hi] - values[lo]);
}

std::vector<SummaryRow> summarize(const std::vector<LabeledTrace>& traces, const std::string& function, int dim,
                                  int budget) {
  std::vector<std::string> order;
  for (const auto& t : traces)
    if (std::find(order.begin(), order.end(), t.algorithm) == order.end()) order.push_back(t.algorithm);

  const int checkpoints[] = {std::max(1, budget / 4), std::max(1, budget / 2), budget};
  std::vector<SummaryRow> rows;
  for (const auto& algorithm : order) {
    for (int c : checkpoints) {
      std::vector<double> best;
      for (const auto& t : traces) {
        if (t.algorithm == algorithm && !t.error && !t.trace.empty()) best.push_back(t.trace.best_at(c));
      }
      if (best.empty()) continue;
      rows.push_back({algorithm, function, dim, c, quantile(best, 0.5), quantile(best, 0.25), quantile(best, 0.75),
                      static_cast<int>(best.size())});
    }
  }
  return rows;
}

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows) {
  out << "algorithm,function,dim,checkpoint,median,q25,q75,n_seeds\n";
  for (const auto& r : rows) {
    out << r.algorithm << ',' << r.function << ',' << r.dim << ',' << r.checkpoint << ',' << format_number(r.median)
        << ',' << format_number(r.q25) << ',' << format_number(r.q75) << ',' << r.n_seeds << '\n';
  }
}

void write_bench(const BenchResult& result, const std::filesystem::path& dir) {
  const auto trace_dir = dir / "traces";
  std::filesystem::create_directories(trace_dir);
  for (const auto& t : result.traces) {
    std::ofstream out(trace_dir / trace_file_name(t.algorithm, t.seed));
    if (!out) throw InputError("cannot write trace file in " + trace_dir.string());
    write_trace_jsonl(out, t.trace);
  }
  std::ofstream summary(dir / "summary.csv");
  if (!summary) throw InputError("cannot write " + (dir / "summary.csv").string());
  write_summary_csv(summary, result.summary);
}

}  // namespace explo2::bench
