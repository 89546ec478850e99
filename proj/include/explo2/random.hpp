#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <random>

#include "explo2/box.hpp"

namespace explo2 {

/// Seeded generator. Uniforms are built from raw 64-bit draws so that runs are
/// reproducible bit-for-bit across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform on {0, ..., n-1}; n must be positive.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v;
    do v = engine_();
    while (v >= limit);
    return v % n;
  }

  Eigen::VectorXd uniform_in(const Box& box) {
    Eigen::VectorXd x(box.dimension());
    for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = box.lower(i) + (box.upper(i) - box.lower(i)) * uniform();
    return box.project(x);
  }

  /// A vertex of the box with each coordinate at the lower or upper bound with equal odds.
  Eigen::VectorXd random_corner(const Box& box) {
    Eigen::VectorXd x(box.dimension());
    for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = (engine_() >> 63) ? box.upper(i) : box.lower(i);
    return x;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace explo2
