#pragma once

#include <cstdint>

#include "explo2/box.hpp"
#include "explo2/local_solver.hpp"
#include "explo2/optimizer.hpp"
#include "explo2/trace.hpp"

namespace explo2::bench {

/// N i.i.d. uniform evaluations.
RunTrace baseline_random_search(const Objective& f, const Box& box, int budget, std::uint64_t seed);

/// The inner solver applied to f itself from uniform random starts until N
/// evaluations have been spent; every probe, finite-difference probes
/// included, counts. batch_id numbers the restarts from 1.
RunTrace baseline_inner_only(const Objective& f, const Box& box, int budget, std::uint64_t seed,
                             const LocalSolveOptions& options = {});

}  // namespace explo2::bench
