// Acceptance gate: one PASS/FAIL line per criterion. Exit status is nonzero
// when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "explo2/bench/harness.hpp"
#include "explo2/bench/test_functions.hpp"
#include "explo2/bench/trace_io.hpp"
#include "explo2/conjugate_gradient.hpp"
#include "explo2/differential_magnitude.hpp"
#include "explo2/magnitude.hpp"
#include "explo2/surrogate.hpp"
#include "oracles.hpp"

using namespace explo2;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

const double kSqrtEps = std::sqrt(std::numeric_limits<double>::epsilon());

struct Outcome {
  bool pass;
  std::string detail;
};

int failures = 0;

void report(int id, const char* name, const std::function<Outcome()>& check) {
  const auto start = std::chrono::steady_clock::now();
  Outcome out{false, ""};
  try {
    out = check();
  } catch (const std::exception& e) {
    out = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!out.pass) ++failures;
  std::printf("criterion %2d %s: %s  %s  [%.1f s]\n", id, out.pass ? "PASS" : "FAIL", name, out.detail.c_str(), secs);
  std::fflush(stdout);
}

std::string fmt(const char* format, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, a, b, c, d);
  return buf;
}

MatrixXd append_row(const MatrixXd& p, const VectorXd& x) {
  MatrixXd out(p.rows() + 1, p.cols());
  out.topRows(p.rows()) = p;
  out.row(p.rows()) = x.transpose();
  return out;
}

Outcome isosceles() {
  const double delta = 1e-3;
  MatrixXd d(3, 3);
  d << 0, 1, 1, 1, 0, delta, 1, delta, 0;
  const auto dm = DistanceMatrix<double>::from_entries(d);
  double worst = 0;
  for (double t : {1e-2, 1e-1, 1.0, 10.0, 1e4}) {
    const VectorXd w = similarity(dm, t).weighting();
    const auto expect = oracle::isosceles_closed_form(delta, t);
    worst = std::max({worst, std::abs(w(0) - expect.w1), std::abs(w(1) - expect.w2), std::abs(w(2) - expect.w2)});
  }
  const double m1 = similarity(dm, 1e-2).magnitude(), m2 = similarity(dm, 10.0).magnitude(),
               m3 = similarity(dm, 1e4).magnitude();
  const bool mags = std::abs(m1 - 1) <= 0.05 && std::abs(m2 - 2) <= 0.05 && std::abs(m3 - 3) <= 0.05;
  return {worst <= 1e-10 && mags, fmt("max |w - closed form| = %.2e (tol 1e-10); Mag = %.4f, %.4f, %.4f", worst, m1, m2, m3)};
}

struct Instance {
  MatrixXd p;
  VectorXd x;
  double t;
};

std::vector<Instance> random_instances() {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> size(1, 20), dims(1, 5);
  const double scales[] = {0.1, 1.0, 10.0};
  std::vector<Instance> out;
  for (int rep = 0; rep < 100; ++rep) {
    const int n = size(rng), dim = dims(rng);
    MatrixXd p = oracle::random_points(rng, n, dim);
    VectorXd x = oracle::random_points(rng, 1, dim).row(0).transpose();
    out.push_back({std::move(p), std::move(x), scales[rep % 3]});
  }
  return out;
}

Outcome delta_magnitude_vs_dense() {
  double worst = 0;
  for (const auto& in : random_instances()) {
    const auto sys = similarity(distance_matrix(in.p), in.t);
    const double dm = delta_magnitude(sys, CandidateSimilarity<double>::from_points(in.p, in.x, in.t));
    const long double base = oracle::dense_magnitude(in.p, in.t);
    const long double big = oracle::dense_magnitude(append_row(in.p, in.x), in.t);
    worst = std::max(worst, std::abs(dm - static_cast<double>(big - base)) / (1 + static_cast<double>(base)));
  }
  return {worst <= 1e-8, fmt("max |dMag - dense| / (1 + Mag) = %.2e over 100 instances (tol 1e-8)", worst)};
}

Outcome extension_identity() {
  double residual = 0, sum_err = 0;
  for (const auto& in : random_instances()) {
    const auto sys = similarity(distance_matrix(in.p), in.t);
    const auto zeta = CandidateSimilarity<double>::from_points(in.p, in.x, in.t);
    const VectorXd ext = extend_weighting(sys, zeta);
    const MatrixXd big = oracle::similarity_from_points(append_row(in.p, in.x), in.t).cast<double>();
    residual = std::max(residual, (big * ext - VectorXd::Ones(ext.size())).lpNorm<Eigen::Infinity>());
    sum_err = std::max(sum_err, std::abs(ext.sum() - (sys.magnitude() + delta_magnitude(sys, zeta))));
  }
  return {residual <= 1e-8 && sum_err <= 1e-10,
          fmt("max residual %.2e (tol 1e-8); max |sum - (Mag + dMag)| %.2e (tol 1e-10)", residual, sum_err)};
}

Outcome scale_zero() {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<int> size(2, 10), dims(1, 4);
  double worst = 0;
  for (int rep = 0; rep < 50; ++rep) {
    const MatrixXd p = oracle::random_points(rng, size(rng), dims(rng));
    const int n = static_cast<int>(p.rows());
    oracle::LMatrix d(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) d(i, j) = static_cast<long double>((p.row(i) - p.row(j)).norm());
    const oracle::LVector omega = d.fullPivLu().solve(oracle::LVector::Ones(n));
    const oracle::LVector limit = omega / omega.sum();
    const VectorXd w = similarity(distance_matrix(p), 1e-6).weighting();
    worst = std::max(worst, (w - limit.cast<double>()).lpNorm<Eigen::Infinity>());
  }
  return {worst <= 1e-4, fmt("max component error %.2e over 50 sets (tol 1e-4)", worst)};
}

Outcome submodularity() {
  const auto c = submodularity_counterexample();
  const bool ok = std::abs(c.lhs - 4.1773) <= 5e-4 && std::abs(c.rhs - 4.1815) <= 5e-4 && c.lhs < c.rhs;
  return {ok, fmt("lhs %.5f (4.1773), rhs %.5f (4.1815), tol 5e-4, t = 1", c.lhs, c.rhs)};
}

Outcome far_field() {
  const double pi = std::acos(-1.0);
  const double radius = 0.5 / std::sin(2 * pi / 5);
  MatrixXd p(5, 2);
  for (int k = 0; k < 5; ++k) p.row(k) << radius * std::cos(2 * pi * k / 5), radius * std::sin(2 * pi * k / 5);
  const auto d = distance_matrix(p);
  const double t = 1e-8;
  bool ok = true;
  std::string detail = fmt("diameter %.6f;", d.diameter());
  for (double far : {10.0, 100.0}) {
    const double ratio = delta_magnitude_small_t(d, VectorXd::Constant(5, far), t) / t / (far / 2);
    ok = ok && std::abs(ratio - 1) <= 0.05;
    detail += fmt(" d0 = %g: (dMag/t)/(d0/2) = %.4f;", far, ratio);
  }
  return {ok, detail + " tol 5%"};
}

Outcome conjugate_gradient() {
  std::mt19937_64 rng(99);
  double dense_err = 0, worst_residual = 0;
  int breakdowns = 0, checked = 0;
  for (int n : {10, 50, 120, 200}) {
    for (int dim : {1, 2, 3}) {
      const MatrixXd p = oracle::random_points(rng, n, dim, -10, 10);
      const auto dist = distance_matrix(p);
      const auto full = weighting_cg<double>(threshold_similarity(dist, 1.0, 0.0), std::nullopt, 1e-13);
      const oracle::LVector dense = oracle::dense_weighting(oracle::similarity_from_points(p, 1.0L));
      dense_err = std::max(dense_err, full.status == CgStatus::converged
                                          ? (full.weighting - dense.cast<double>()).lpNorm<Eigen::Infinity>()
                                          : std::numeric_limits<double>::infinity());
      const auto z = threshold_similarity(dist, 1.0, 1e-3);
      const auto thr = weighting_cg<double>(z, std::nullopt, 1e-10);
      ++checked;
      if (thr.status == CgStatus::breakdown) {
        ++breakdowns;
      } else {
        const double r = (z * thr.weighting - VectorXd::Ones(n)).norm();
        worst_residual = std::max(worst_residual, thr.status == CgStatus::converged ? r : std::numeric_limits<double>::infinity());
      }
    }
  }
  return {dense_err <= 1e-8 && worst_residual <= 1e-6,
          fmt("dense mismatch %.2e (tol 1e-8); thresholded residual %.2e (tol 1e-6), breakdowns %g of %g", dense_err,
              worst_residual, breakdowns, checked)};
}

std::vector<bench::LabeledTrace> arms(const bench::BenchConfig& c, const std::string& algorithm) {
  std::vector<bench::LabeledTrace> out;
  for (auto seed : c.seeds) out.push_back(bench::run_arm(c, algorithm, seed));
  return out;
}

struct ArmStats {
  double median = 0;
  bool monotone = true;
  bool complete = true;
};

ArmStats stats(const std::vector<bench::LabeledTrace>& traces, int budget) {
  ArmStats s;
  std::vector<double> best;
  for (const auto& t : traces) {
    s.complete = s.complete && !t.error && t.trace.size() == static_cast<std::size_t>(budget);
    s.monotone = s.monotone && t.trace.monotone();
    if (!t.trace.empty()) best.push_back(t.trace.best());
  }
  s.median = best.empty() ? std::numeric_limits<double>::infinity() : bench::quantile(best, 0.5);
  return s;
}

bench::BenchConfig bench_config(const std::string& function, int dim, int n_parallel, int seeds) {
  bench::BenchConfig c;
  c.function = function;
  c.dim = dim;
  c.n_parallel = n_parallel;
  c.seeds.clear();
  for (int s = 1; s <= seeds; ++s) c.seeds.push_back(static_cast<std::uint64_t>(s));
  return c;
}

Outcome rastrigin_2d() {
  const auto start = std::chrono::steady_clock::now();
  auto c = bench_config("rastrigin", 2, 1, 10);
  c.budget_multiplier = 38;  // N = 76
  const auto e = stats(arms(c, "explo2"), 76);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const auto r = stats(arms(c, "random_search"), 76);
  const bool ok = e.median < r.median && e.median < 10.0 && e.monotone && r.monotone && e.complete && secs < 120;
  return {ok, fmt("median best explo2 %.4g vs random %.4g (need explo2 < random and < 10); optimizer time %.1f s", e.median,
                  r.median, secs) +
                  (e.monotone && r.monotone ? "; traces monotone" : "; NON-MONOTONE trace")};
}

Outcome rastrigin_20d() {
  const auto start = std::chrono::steady_clock::now();
  auto c = bench_config("rastrigin", 20, 1, 5);
  const int budget = c.budget();
  const auto r = stats(arms(c, "random_search"), budget);
  const auto inner = stats(arms(c, "inner_only"), budget);
  const auto e1 = stats(arms(c, "explo2"), budget);
  c.n_parallel = 32;
  const auto e32 = stats(arms(c, "explo2"), budget);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool ok = e1.median <= 0.5 * r.median && e32.median <= 0.5 * r.median && inner.complete && e1.complete &&
                  e32.complete && secs < 1800;
  return {ok, fmt("N = 500 medians: explo2 n_par=1 %.4g, n_par=32 %.4g, random %.4g (need <= 0.5 x random)", e1.median,
                  e32.median, r.median) +
                  fmt("; inner_only %.4g ", inner.median) + (inner.complete ? "(completed)" : "(INCOMPLETE)")};
}

Outcome f8f2_20d() {
  auto c = bench_config("f8f2", 20, 32, 5);
  const int budget = c.budget();
  const auto e = stats(arms(c, "explo2"), budget);
  const auto r = stats(arms(c, "random_search"), budget);
  const bool ok = e.median <= r.median && e.complete && e.monotone && r.monotone;
  return {ok, fmt("N = 500, n_par = 32: median best explo2 %.4g vs random %.4g", e.median, r.median) +
                  (e.complete ? "; no crashes" : "; ARM FAILED") + (e.monotone ? ", monotone" : ", NON-MONOTONE")};
}

Outcome determinism() {
  bool same = true;
  std::size_t bytes = 0;
  for (int n_par : {1, 8}) {
    auto c = bench_config("rastrigin", 5, n_par, 2);
    c.budget_multiplier = 12;
    c.algorithms = bench::algorithm_names();
    for (const auto& algorithm : c.algorithms) {
      for (auto seed : c.seeds) {
        std::ostringstream a, b;
        bench::write_trace_jsonl(a, bench::run_arm(c, algorithm, seed).trace);
        bench::write_trace_jsonl(b, bench::run_arm(c, algorithm, seed).trace);
        same = same && a.str() == b.str() && !a.str().empty();
        bytes += a.str().size();
      }
    }
  }
  return {same, fmt("all arms byte-identical on rerun (%g bytes compared)", static_cast<double>(bytes))};
}

Outcome gradient_check() {
  std::mt19937_64 gen(12);
  std::uniform_int_distribution<int> size(5, 40), dims(1, 8);
  std::uniform_real_distribution<double> unit(0, 1);
  const double scales[] = {kSqrtEps, 0.05, 0.5};
  double worst = 0;
  int points = 0;
  for (int s = 0; s < 20; ++s) {
    const int n = size(gen), dim = dims(gen);
    const Box box = Box::cube(dim, -5, 5);
    const MatrixXd p = oracle::random_points(gen, n, dim, -5, 5);
    const VectorXd y = oracle::random_points(gen, n, 1, -50, 50).col(0);
    const auto sys = std::make_shared<SimilaritySystem<double>>(similarity(distance_matrix(p), scales[s % 3]));
    const auto interp = fit(p, y, *sys);
    const ExplorationTerm explore(p, sys);
    Rng rng(static_cast<std::uint64_t>(s));
    const Surrogate surrogate(interp, explore, explore_range(explore, box, 100, rng), unit(gen));
    for (int k = 0; k < 50; ++k) {
      const VectorXd x = oracle::random_points(gen, 1, dim, -4.9, 4.9).row(0).transpose();
      const auto g = surrogate_gradient(surrogate, x);
      if (!g) {
        worst = std::numeric_limits<double>::infinity();
        continue;
      }
      const VectorXd fd = oracle::richardson_gradient([&](const VectorXd& z) { return surrogate.value(z); }, x, 1e-4);
      worst = std::max(worst, (*g - fd).norm() / std::max(fd.norm(), 1e-12));
      ++points;
    }
  }
  return {worst <= 1e-5, fmt("max relative error %.2e over %g points, 20 surrogates (tol 1e-5)", worst, points)};
}

}  // namespace

int main() {
  report(1, "isosceles closed form", isosceles);
  report(2, "differential magnitude vs dense recomputation", delta_magnitude_vs_dense);
  report(3, "weighting extension identity", extension_identity);
  report(4, "scale-zero limit", scale_zero);
  report(5, "submodularity counterexample", submodularity);
  report(6, "far-field asymptotic", far_field);
  report(7, "conjugate gradient", conjugate_gradient);
  report(8, "2-D Rastrigin, N = 76", rastrigin_2d);
  report(9, "20-D Rastrigin, N = 500", rastrigin_20d);
  report(10, "20-D F8F2, N = 500", f8f2_20d);
  report(11, "determinism", determinism);
  report(12, "surrogate gradient check", gradient_check);
  std::printf("%d of 12 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
