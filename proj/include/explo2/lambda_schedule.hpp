#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace explo2 {

enum class LambdaKind { linear, flat_then_linear, custom_table };

/// Exploration weight lambda resolved for every evaluation index 1..N.
///
/// Values outside [0, 1] are kept and reported through warnings(); they are
/// not rejected.
class LambdaSchedule {
 public:
  /// lambda_n = 1 - n/N.
  static LambdaSchedule linear(int budget);

  /// lambda_n = 1 for the first N - D indices, then D values evenly spaced
  /// from 1 down to 0 (a single 0 when D = 1).
  static LambdaSchedule flat_then_linear(int budget, int dim);

  /// Explicit table for n = 1, 2, ... A table shorter than the budget is padded
  /// with its last value, a longer one is truncated; both produce a warning.
  static LambdaSchedule custom(std::vector<double> values, int budget);

  /// The same value at every index (a custom table).
  static LambdaSchedule constant(double value, int budget);

  /// "linear" or "flat-then-linear" (underscores accepted).
  static LambdaSchedule from_name(std::string_view name, int budget, int dim);

  LambdaKind kind() const { return kind_; }
  int budget() const { return static_cast<int>(values_.size()); }
  const std::vector<double>& values() const { return values_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

  /// lambda at the 1-based evaluation index n; n is clamped into [1, N].
  double at(int n) const;

 private:
  LambdaSchedule(LambdaKind kind, std::vector<double> values);

  LambdaKind kind_;
  std::vector<double> values_;
  std::vector<std::string> warnings_;
};

std::string to_string(LambdaKind kind);

}  // namespace explo2
