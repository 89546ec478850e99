#include <doctest.h>

#include <cmath>
#include <limits>
#include <memory>
#include <random>

#include "explo2/surrogate.hpp"
#include "oracles.hpp"

using namespace explo2;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

const double kSqrtEps = std::sqrt(std::numeric_limits<double>::epsilon());

double rastrigin(const VectorXd& x) {
  const double pi = std::acos(-1.0);
  double s = 10.0 * x.size();
  for (Eigen::Index i = 0; i < x.size(); ++i) s += x(i) * x(i) - 10 * std::cos(2 * pi * x(i));
  return s;
}

struct Fixture {
  MatrixXd nodes;
  VectorXd y;
  std::shared_ptr<const SimilaritySystem<double>> sys;
  Interpolant<double> interp;
  ExplorationTerm explore;

  Fixture(MatrixXd p, VectorXd values, double t)
      : nodes(std::move(p)),
        y(std::move(values)),
        sys(std::make_shared<SimilaritySystem<double>>(similarity(distance_matrix(nodes), t))),
        interp(fit(nodes, y, *sys)),
        explore(nodes, sys) {}
};

Fixture rastrigin_fixture(std::uint64_t seed, int n, double t) {
  std::mt19937_64 rng(seed);
  MatrixXd p = oracle::random_points(rng, n, 2, -5.12, 5.12);
  VectorXd y(n);
  for (int j = 0; j < n; ++j) y(j) = rastrigin(p.row(j).transpose());
  return Fixture(std::move(p), std::move(y), t);
}

// R from a dense extended-precision recomputation of both magnitudes.
double dense_r(const MatrixXd& nodes, const VectorXd& x, double t) {
  MatrixXd big(nodes.rows() + 1, nodes.cols());
  big.topRows(nodes.rows()) = nodes;
  big.row(nodes.rows()) = x.transpose();
  return static_cast<double>(oracle::dense_magnitude(big, t) - oracle::dense_magnitude(nodes, t));
}

}  // namespace

TEST_CASE("surrogate: at an active point S = T / y_range") {
  const auto fx = rastrigin_fixture(1, 25, kSqrtEps);
  Rng rng(1);
  const Box box = Box::cube(2, -5.12, 5.12);
  const double range = explore_range(fx.explore, box, 100, rng);
  const Surrogate s(fx.interp, fx.explore, range, 0.7);
  for (int j = 0; j < 25; ++j) {
    const VectorXd x = fx.nodes.row(j).transpose();
    CHECK(fx.explore(x) == 0.0);
    CHECK(s.value(x) == fx.interp(x) / fx.interp.y_range());
    double v;
    VectorXd g;
    CHECK_FALSE(s.value_and_gradient(x, v, g));
    CHECK_FALSE(surrogate_gradient(s, x).has_value());
  }
}

TEST_CASE("surrogate: analytic gradient matches differences (2-D Rastrigin, 25 nodes)") {
  const auto fx = rastrigin_fixture(2, 25, kSqrtEps);
  Rng rng(2);
  const Box box = Box::cube(2, -5.12, 5.12);
  const double range = explore_range(fx.explore, box, 100, rng);
  for (double lambda : {0.0, 0.5, 1.0}) {
    const Surrogate s(fx.interp, fx.explore, range, lambda);
    for (int k = 0; k < 50; ++k) {
      const VectorXd x = rng.uniform_in(Box::cube(2, -5.0, 5.0));
      const auto g = surrogate_gradient(s, x);
      REQUIRE(g.has_value());
      const VectorXd fd = oracle::richardson_gradient([&](const VectorXd& z) { return s.value(z); }, x, 1e-4);
      CHECK((*g - fd).norm() <= 1e-5 * std::max(fd.norm(), 1e-8));
    }
  }
}

TEST_CASE("surrogate: lambda = 0 gives grad T / y_range exactly") {
  const auto fx = rastrigin_fixture(3, 12, kSqrtEps);
  const Surrogate s(fx.interp, fx.explore, 2.0, 0.0);
  Rng rng(3);
  for (int k = 0; k < 10; ++k) {
    const VectorXd x = rng.uniform_in(Box::cube(2, -5.0, 5.0));
    const auto gs = surrogate_gradient(s, x);
    const auto gt = interpolant_gradient(fx.interp, x);
    REQUIRE(gs.has_value());
    REQUIRE(gt.has_value());
    CHECK(*gs == *gt / fx.interp.y_range());
    CHECK(s.value(x) == fx.interp(x) / fx.interp.y_range());
  }
}

TEST_CASE("surrogate: exploration term matches dense recomputation") {
  std::mt19937_64 gen(4);
  const MatrixXd p = oracle::random_points(gen, 8, 3);
  for (double t : {0.3, 1.0, 4.0}) {
    const ExplorationTerm r(p, t);
    for (int k = 0; k < 10; ++k) {
      const VectorXd x = oracle::random_points(gen, 1, 3, -2, 2).row(0).transpose();
      CHECK(std::abs(r(x) - dense_r(p, x, t)) <= 1e-8 * (1 + std::abs(r(x))));
      double v;
      VectorXd g;
      REQUIRE(r.value_and_gradient(x, v, g));
      CHECK(v == r(x));
      const VectorXd fd = oracle::richardson_gradient([&](const VectorXd& z) { return r(z); }, x, 1e-3);
      CHECK((g - fd).norm() <= 1e-6 * std::max(1.0, fd.norm()));
    }
    const ExplorationTerm more = r.adjoin(VectorXd::Constant(3, 1.5));
    CHECK(more.nodes().rows() == 9);
    CHECK(more(VectorXd::Constant(3, 1.5)) == 0.0);
    CHECK(more.nearest_distance(VectorXd::Constant(3, 1.5)) == 0.0);
  }
}

TEST_CASE("surrogate: exploitation gradient vanishes far from a constant interpolant") {
  MatrixXd p(4, 2);
  p << 1, 0, -1, 0, 0, 1, 0, -1;
  const auto sys = std::make_shared<SimilaritySystem<double>>(similarity(distance_matrix(p), kSqrtEps));
  const auto interp = fit(p, VectorXd::Constant(4, 2.0), *sys);
  const auto g = interpolant_gradient(interp, VectorXd::Zero(2));
  REQUIRE(g.has_value());
  CHECK(g->norm() <= 1e-12);
}

TEST_CASE("explore_range: enumerates every corner when 2^D <= n_explore") {
  std::mt19937_64 gen(5);
  const MatrixXd p = oracle::random_points(gen, 6, 2, -0.5, 0.5);
  const ExplorationTerm r(p, 1.0);
  const Box box = Box::cube(2, -1, 1);
  Rng rng(5);
  double best = 0;
  for (double a : {-1.0, 1.0})
    for (double b : {-1.0, 1.0}) best = std::max(best, r(VectorXd{{a, b}}));
  CHECK(explore_range(r, box, 100, rng) == best);
  // No random draws were consumed.
  Rng fresh(5);
  CHECK(rng.uniform() == fresh.uniform());
}

TEST_CASE("explore_range: samples exactly n_explore random corners in high dimension") {
  std::mt19937_64 gen(6);
  const MatrixXd p = oracle::random_points(gen, 10, 20);
  const ExplorationTerm r(p, 0.5);
  const Box box = Box::cube(20, -1, 1);
  Rng rng(6), replay(6);
  const double got = explore_range(r, box, 100, rng);
  double best = 0;
  for (int k = 0; k < 100; ++k) best = std::max(best, r(replay.random_corner(box)));
  CHECK(got == best);
  CHECK(rng.uniform() == replay.uniform());
}

TEST_CASE("explore_range: corners beat interior points near the active set") {
  std::mt19937_64 gen(7);
  const MatrixXd p = oracle::random_points(gen, 10, 2, -0.5, 0.5);
  const Box box = Box::cube(2, -5, 5);
  for (double t : {kSqrtEps, 0.5, 2.0}) {
    const ExplorationTerm r(p, t);
    Rng rng(7);
    const double range = explore_range(r, box, 100, rng);
    for (int k = 0; k < 20; ++k) {
      const VectorXd x = oracle::random_points(gen, 1, 2, -0.7, 0.7).row(0).transpose();
      CHECK(range >= r(x));
    }
  }
}

TEST_CASE("explore_range: zero maximum is guarded to one") {
  MatrixXd p(4, 2);
  p << 0, 0, 0, 1, 1, 0, 1, 1;
  const ExplorationTerm r(p, 1.0);
  Rng rng(8);
  CHECK(explore_range(r, Box::cube(2, 0, 1), 100, rng) == 1.0);
}
