#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "explo2/bench/trace_io.hpp"

namespace explo2::bench {

/// explo2, random_search, inner_only, pure_explore (lambda = 1), pure_exploit (lambda = 0).
std::vector<std::string> algorithm_names();

struct BenchConfig {
  std::string function = "rastrigin";
  int dim = 2;
  int budget_multiplier = 25;
  int n_parallel = 1;
  std::vector<std::uint64_t> seeds{0};
  std::vector<std::string> algorithms{"explo2"};
  std::string lambda = "linear";  ///< linear or flat-then-linear, for the explo2 arm
  std::string init = "uniform";
  std::optional<std::uint64_t> shift_seed;
  int jobs = 1;  ///< arms run concurrently

  int budget() const { return budget_multiplier * dim; }
  /// Throws InputError on unknown names, repeated seeds, or a budget the optimizer cannot use.
  void validate() const;
};

struct SummaryRow {
  std::string algorithm;
  std::string function;
  int dim = 0;
  int checkpoint = 0;
  double median = 0.0;
  double q25 = 0.0;
  double q75 = 0.0;
  int n_seeds = 0;
};

struct BenchResult {
  std::vector<LabeledTrace> traces;  ///< ordered by algorithm, then seed
  std::vector<SummaryRow> summary;
};

/// One (algorithm, seed) arm. Exceptions from the objective or the optimizer
/// are caught and reported in `error`.
LabeledTrace run_arm(const BenchConfig& config, const std::string& algorithm, std::uint64_t seed);

BenchResult run_bench(const BenchConfig& config);

/// Median and quartiles (linear interpolation between order statistics) of
/// best_so_far at N/4, N/2 and N over the arms without errors.
std::vector<SummaryRow> summarize(const std::vector<LabeledTrace>& traces, const std::string& function, int dim,
                                  int budget);

/// Linear-interpolation quantile of unsorted values, q in [0, 1].
double quantile(std::vector<double> values, double q);

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows);

/// Writes <dir>/traces/<algorithm>_seed<k>.jsonl and <dir>/summary.csv.
void write_bench(const BenchResult& result, const std::filesystem::path& dir);

}  // namespace explo2::bench
