#include "explo2/trace.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "explo2/errors.hpp"

namespace explo2 {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

const TraceRecord& RunTrace::append(Eigen::VectorXd point, double value, int batch_id, double lambda, bool fallback,
                                    double wall_time) {
  TraceRecord rec;
  rec.eval_index = static_cast<int>(records_.size()) + 1;
  rec.point = std::move(point);
  rec.nonfinite = !std::isfinite(value);
  rec.value = rec.nonfinite ? kInf : value;
  rec.best_so_far = std::min(best(), rec.value);
  rec.batch_id = batch_id;
  rec.lambda = lambda;
  rec.wall_time = wall_time;
  rec.fallback = fallback;
  records_.push_back(std::move(rec));
  return records_.back();
}

void RunTrace::push(TraceRecord record) {
  if (record.eval_index != static_cast<int>(records_.size()) + 1) throw InputError("trace: eval_index out of sequence");
  if (record.best_so_far > best()) throw InputError("trace: best_so_far increases");
  records_.push_back(std::move(record));
}

double RunTrace::best() const { return records_.empty() ? kInf : records_.back().best_so_far; }

double RunTrace::best_at(std::size_t n) const {
  if (records_.empty()) return kInf;
  return records_[std::clamp<std::size_t>(n, 1, records_.size()) - 1].best_so_far;
}

std::size_t RunTrace::fallback_count() const {
  return std::count_if(records_.begin(), records_.end(), [](const TraceRecord& r) { return r.fallback; });
}

std::size_t RunTrace::nonfinite_count() const {
  return std::count_if(records_.begin(), records_.end(), [](const TraceRecord& r) { return r.nonfinite; });
}

bool RunTrace::monotone() const {
  for (std::size_t i = 1; i < records_.size(); ++i) {
    if (records_[i].best_so_far > records_[i - 1].best_so_far) return false;
  }
  return true;
}

}  // namespace explo2
