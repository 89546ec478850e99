#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <vector>

namespace explo2 {

struct TraceRecord {
  int eval_index = 0;  ///< 1-based
  Eigen::VectorXd point;
  double value = 0.0;  ///< +inf when the objective returned NaN or Inf
  double best_so_far = 0.0;
  int batch_id = 0;    ///< 0 for the initial design
  double lambda = 0.0;
  double wall_time = 0.0;  ///< seconds since the start of the run
  bool nonfinite = false;
  bool fallback = false;  ///< proposed at random after an inner-solver failure
};

/// Per-evaluation log with a non-increasing best_so_far.
class RunTrace {
 public:
  /// Records one evaluation; non-finite values are stored as +inf and flagged.
  const TraceRecord& append(Eigen::VectorXd point, double value, int batch_id, double lambda, bool fallback = false,
                            double wall_time = 0.0);

  /// Appends a record read back from storage. eval_index must continue the
  /// sequence and best_so_far must not increase; InputError otherwise.
  void push(TraceRecord record);

  const std::vector<TraceRecord>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }
  /// +inf for an empty trace.
  double best() const;
  /// best_so_far after evaluation n (1-based, clamped to the trace length).
  double best_at(std::size_t n) const;
  std::size_t fallback_count() const;
  std::size_t nonfinite_count() const;
  bool monotone() const;

 private:
  std::vector<TraceRecord> records_;
};

}  // namespace explo2
