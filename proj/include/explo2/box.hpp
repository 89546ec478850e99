#pragma once

#include <Eigen/Core>

#include "explo2/errors.hpp"

namespace explo2 {

/// Axis-aligned box [lower, upper].
struct Box {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;

  Box() = default;
  Box(Eigen::VectorXd lo, Eigen::VectorXd hi) : lower(std::move(lo)), upper(std::move(hi)) {
    if (lower.size() == 0 || lower.size() != upper.size()) throw InputError("box bounds must have equal, nonzero size");
    if (!lower.allFinite() || !upper.allFinite()) throw InputError("box bounds must be finite");
    if (!(lower.array() < upper.array()).all()) throw InputError("box lower bound must be below upper bound");
  }

  /// The same interval in every coordinate.
  static Box cube(Eigen::Index dim, double lo, double hi) {
    return Box(Eigen::VectorXd::Constant(dim, lo), Eigen::VectorXd::Constant(dim, hi));
  }

  Eigen::Index dimension() const { return lower.size(); }
  Eigen::VectorXd extent() const { return upper - lower; }
  bool contains(const Eigen::VectorXd& x) const {
    return x.size() == lower.size() && (x.array() >= lower.array()).all() && (x.array() <= upper.array()).all();
  }
  Eigen::VectorXd project(const Eigen::VectorXd& x) const { return x.cwiseMax(lower).cwiseMin(upper); }
};

}  // namespace explo2
