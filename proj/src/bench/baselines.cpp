#include "explo2/bench/baselines.hpp"

#include "explo2/errors.hpp"
#include "explo2/random.hpp"

namespace explo2::bench {

using Eigen::VectorXd;

namespace {

struct BudgetSpent {};

// Logs every probe of f and stops the solver once the budget is used up.
class CountingField : public ScalarField {
 public:
  CountingField(const Objective& f, RunTrace& trace, std::size_t budget) : f_(f), trace_(trace), budget_(budget) {}

  double value(const VectorXd& x) const override {
    if (trace_.size() >= budget_) throw BudgetSpent{};
    return trace_.append(x, f_(x), batch_, 0.0).value;
  }
  void set_batch(int batch) { batch_ = batch; }

 private:
  const Objective& f_;
  RunTrace& trace_;
  std::size_t budget_;
  int batch_ = 1;
};

}  // namespace

RunTrace baseline_random_search(const Objective& f, const Box& box, int budget, std::uint64_t seed) {
  if (budget < 1) throw InputError("budget must be positive");
  Rng rng(seed);
  RunTrace trace;
  for (int i = 0; i < budget; ++i) {
    VectorXd x = rng.uniform_in(box);
    const double y = f(x);
    trace.append(std::move(x), y, 0, 0.0);
  }
  return trace;
}

RunTrace baseline_inner_only(const Objective& f, const Box& box, int budget, std::uint64_t seed,
                             const LocalSolveOptions& options) {
  if (budget < 1) throw InputError("budget must be positive");
  Rng rng(seed);
  RunTrace trace;
  CountingField field(f, trace, static_cast<std::size_t>(budget));
  const ProjectedQuasiNewton solver;
  for (int restart = 1; trace.size() < static_cast<std::size_t>(budget); ++restart) {
    field.set_batch(restart);
    const std::size_t before = trace.size();
    try {
      solver.minimize(field, rng.uniform_in(box), box, options);
    } catch (const BudgetSpent&) {
      break;
    }
    if (trace.size() == before) break;
  }
  return trace;
}

}  // namespace explo2::bench
