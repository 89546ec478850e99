#include "explo2/lambda_schedule.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "explo2/errors.hpp"

namespace explo2 {

namespace {

void require_budget(int budget) {
  if (budget < 1) throw InputError("lambda schedule: budget must be positive");
}

}  // namespace

LambdaSchedule::LambdaSchedule(LambdaKind kind, std::vector<double> values)
    : kind_(kind), values_(std::move(values)) {
  for (std::size_t i = 0; i < values_.size(); ++i) {
    const double v = values_[i];
    if (!std::isfinite(v)) throw InputError("lambda schedule: non-finite value");
    if (v < 0.0 || v > 1.0) {
      char buf[96];
      std::snprintf(buf, sizeof buf, "lambda at n = %zu is %.6g, outside [0, 1]", i + 1, v);
      warnings_.emplace_back(buf);
    }
  }
}

LambdaSchedule LambdaSchedule::linear(int budget) {
  require_budget(budget);
  std::vector<double> v(budget);
  for (int n = 1; n <= budget; ++n) v[n - 1] = 1.0 - static_cast<double>(n) / budget;
  return LambdaSchedule(LambdaKind::linear, std::move(v));
}

LambdaSchedule LambdaSchedule::flat_then_linear(int budget, int dim) {
  require_budget(budget);
  if (dim < 1) throw InputError("lambda schedule: dimension must be positive");
  const int tail = std::min(dim, budget);
  std::vector<double> v(budget, 1.0);
  for (int k = 0; k < tail; ++k) {
    v[budget - tail + k] = tail == 1 ? 0.0 : 1.0 - static_cast<double>(k) / (tail - 1);
  }
  return LambdaSchedule(LambdaKind::flat_then_linear, std::move(v));
}

LambdaSchedule LambdaSchedule::custom(std::vector<double> values, int budget) {
  require_budget(budget);
  if (values.empty()) throw InputError("lambda schedule: empty table");
  std::string note;
  if (static_cast<int>(values.size()) < budget) {
    note = "lambda table has " + std::to_string(values.size()) + " entries for budget " + std::to_string(budget) +
           "; padded with its last value";
    values.resize(budget, values.back());
  } else if (static_cast<int>(values.size()) > budget) {
    note = "lambda table has " + std::to_string(values.size()) + " entries for budget " + std::to_string(budget) +
           "; truncated";
    values.resize(budget);
  }
  LambdaSchedule s(LambdaKind::custom_table, std::move(values));
  if (!note.empty()) s.warnings_.insert(s.warnings_.begin(), note);
  return s;
}

LambdaSchedule LambdaSchedule::constant(double value, int budget) {
  require_budget(budget);
  return custom(std::vector<double>(budget, value), budget);
}

LambdaSchedule LambdaSchedule::from_name(std::string_view name, int budget, int dim) {
  if (name == "linear") return linear(budget);
  if (name == "flat-then-linear" || name == "flat_then_linear") return flat_then_linear(budget, dim);
  throw InputError("unknown lambda schedule '" + std::string(name) + "'");
}

double LambdaSchedule::at(int n) const { return values_[std::clamp(n, 1, budget()) - 1]; }

std::string to_string(LambdaKind kind) {
  switch (kind) {
    case LambdaKind::linear:
      return "linear";
    case LambdaKind::flat_then_linear:
      return "flat_then_linear";
    case LambdaKind::custom_table:
      return "custom_table";
  }
  return "unknown";
}

}  // namespace explo2
