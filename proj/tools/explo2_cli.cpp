// explo2 run | bench | plot-data
//
// --config FILE (TOML or INI) may appear before or after the subcommand. Keys
// are the long flag names inside a [run], [bench] or [plot-data] section;
// values given on the command line take precedence.

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "explo2/bench/harness.hpp"
#include "explo2/bench/test_functions.hpp"
#include "explo2/bench/trace_io.hpp"
#include "explo2/errors.hpp"
#include "explo2/optimizer.hpp"

namespace fs = std::filesystem;
using namespace explo2;

namespace {

struct RunArgs {
  std::string function = "rastrigin";
  int dim = 2;
  int budget_multiplier = 25;
  int parallel = 1;
  std::uint64_t seed = 0;
  std::string lambda = "linear";
  std::string init = "uniform";
  std::string out;
  std::optional<std::uint64_t> shift_seed;
};

struct BenchArgs {
  RunArgs common;
  std::vector<std::string> algorithms{"explo2", "random_search"};
  std::vector<std::uint64_t> seeds{0};
  int jobs = 1;
};

struct PlotArgs {
  std::vector<std::string> inputs;
  std::string out;
};

void add_common(CLI::App* cmd, RunArgs& a) {
  cmd->add_option("--function", a.function, "test function")
      ->check(CLI::IsMember(bench::test_function_names()))
      ->capture_default_str();
  cmd->add_option("--dim", a.dim, "dimension")->check(CLI::PositiveNumber)->capture_default_str();
  cmd->add_option("--budget-multiplier", a.budget_multiplier, "evaluations per dimension")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--parallel", a.parallel, "batch size n_parallel")->check(CLI::Range(1, 128))->capture_default_str();
  cmd->add_option("--lambda", a.lambda, "lambda schedule")
      ->check(CLI::IsMember({"linear", "flat-then-linear"}))
      ->capture_default_str();
  cmd->add_option("--init", a.init, "initial design")
      ->check(CLI::IsMember({"uniform", "near-corners", "corners"}))
      ->capture_default_str();
  cmd->add_option("--shift-seed", a.shift_seed, "seeded random shift of the test function");
}

bench::BenchConfig to_bench_config(const RunArgs& a) {
  bench::BenchConfig c;
  c.function = a.function;
  c.dim = a.dim;
  c.budget_multiplier = a.budget_multiplier;
  c.n_parallel = a.parallel;
  c.lambda = a.lambda;
  c.init = a.init;
  c.shift_seed = a.shift_seed;
  return c;
}

void print_lambda_warnings(const bench::BenchConfig& c) {
  const auto schedule = LambdaSchedule::from_name(c.lambda, c.budget(), c.dim);
  for (const auto& w : schedule.warnings()) std::cerr << "warning: " << w << '\n';
}

int do_run(const RunArgs& a) {
  bench::BenchConfig c = to_bench_config(a);
  c.seeds = {a.seed};
  c.validate();
  print_lambda_warnings(c);

  const auto result = bench::run_arm(c, "explo2", a.seed);
  if (result.error) {
    std::cerr << "error: " << *result.error << '\n';
    return 1;
  }
  if (a.out.empty() || a.out == "-") {
    bench::write_trace_jsonl(std::cout, result.trace);
  } else {
    std::ofstream out(a.out);
    if (!out) throw InputError("cannot write " + a.out);
    bench::write_trace_jsonl(out, result.trace);
  }
  std::cerr << "best " << bench::format_number(result.trace.best()) << " after " << result.trace.size()
            << " evaluations\n";
  return 0;
}

int do_bench(const BenchArgs& a) {
  bench::BenchConfig c = to_bench_config(a.common);
  c.algorithms = a.algorithms;
  c.seeds = a.seeds;
  c.jobs = a.jobs;
  c.validate();
  print_lambda_warnings(c);

  const auto result = bench::run_bench(c);
  const fs::path dir = a.common.out.empty() ? fs::path("bench_out") : fs::path(a.common.out);
  bench::write_bench(result, dir);
  int failures = 0;
  for (const auto& t : result.traces) {
    if (t.error) {
      ++failures;
      std::cerr << "arm " << t.algorithm << " seed " << t.seed << " failed: " << *t.error << '\n';
    }
  }
  bench::write_summary_csv(std::cout, result.summary);
  return failures == 0 ? 0 : 2;
}

void collect(const fs::path& p, std::vector<fs::path>& files) {
  if (fs::is_directory(p)) {
    std::vector<fs::path> found;
    for (const auto& entry : fs::recursive_directory_iterator(p)) {
      if (entry.is_regular_file() && entry.path().extension() == ".jsonl") found.push_back(entry.path());
    }
    std::sort(found.begin(), found.end());
    files.insert(files.end(), found.begin(), found.end());
  } else if (fs::is_regular_file(p)) {
    files.push_back(p);
  } else {
    throw InputError("no such file or directory: " + p.string());
  }
}

// "<algorithm>_seed<k>.jsonl"; other names keep the stem and seed 0.
bench::LabeledTrace label_from_name(const fs::path& file) {
  bench::LabeledTrace t;
  const std::string stem = file.stem().string();
  const auto pos = stem.rfind("_seed");
  t.algorithm = stem;
  if (pos != std::string::npos) {
    try {
      std::size_t used = 0;
      const std::string digits = stem.substr(pos + 5);
      const auto seed = std::stoull(digits, &used);
      if (used == digits.size()) {
        t.algorithm = stem.substr(0, pos);
        t.seed = seed;
      }
    } catch (const std::exception&) {
    }
  }
  return t;
}

int do_plot(const PlotArgs& a) {
  std::vector<fs::path> files;
  for (const auto& in : a.inputs) collect(in, files);
  std::vector<bench::LabeledTrace> traces;
  for (const auto& f : files) {
    std::ifstream in(f);
    if (!in) throw InputError("cannot read " + f.string());
    auto t = label_from_name(f);
    t.trace = bench::read_trace_jsonl(in);
    traces.push_back(std::move(t));
  }
  if (a.out.empty() || a.out == "-") {
    bench::write_plot_data(std::cout, traces);
  } else {
    std::ofstream out(a.out);
    if (!out) throw InputError("cannot write " + a.out);
    bench::write_plot_data(out, traces);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Surrogate-assisted black-box optimization with magnitude-based exploration"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "configuration file with [run], [bench] or [plot-data] sections");

  RunArgs run_args;
  auto* run_cmd = app.add_subcommand("run", "optimize one test function and write its trace");
  add_common(run_cmd, run_args);
  run_cmd->add_option("--seed", run_args.seed, "random seed")->capture_default_str();
  run_cmd->add_option("--out", run_args.out, "trace file (JSON lines); stdout when omitted");

  BenchArgs bench_args;
  auto* bench_cmd = app.add_subcommand("bench", "run algorithms over seeds and summarize");
  add_common(bench_cmd, bench_args.common);
  bench_cmd->add_option("--algorithms", bench_args.algorithms, "explo2, random_search, inner_only, pure_explore, pure_exploit")
      ->check(CLI::IsMember(bench::algorithm_names()))
      ->delimiter(',')
      ->capture_default_str();
  bench_cmd->add_option("--seeds", bench_args.seeds, "seeds, comma separated")->delimiter(',')->capture_default_str();
  bench_cmd->add_option("--jobs", bench_args.jobs, "arms run concurrently")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--out", bench_args.common.out, "output directory")->capture_default_str();

  PlotArgs plot_args;
  auto* plot_cmd = app.add_subcommand("plot-data", "convert traces to a long-format convergence table");
  plot_cmd->add_option("--in", plot_args.inputs, "trace files or directories")->required();
  plot_cmd->add_option("--out", plot_args.out, "CSV file; stdout when omitted");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) return do_run(run_args);
    if (*bench_cmd) return do_bench(bench_args);
    if (*plot_cmd) return do_plot(plot_args);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
