#pragma once

// Line-delimited trace records and long-format plot data.
//
// Trace line:
//   {"eval_index":1,"point":[...],"value":...,"best_so_far":...,"batch_id":0,
//    "lambda":...,"nonfinite":false,"fallback":false}
// Numbers carry 17 significant digits; +inf is written as the string "inf".
// Wall-clock times are left out so that identical runs give identical files.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "explo2/trace.hpp"

namespace explo2::bench {

struct LabeledTrace {
  std::string algorithm;
  std::uint64_t seed = 0;
  RunTrace trace;
  std::optional<std::string> error;  ///< set when the arm threw; the trace holds what was logged
};

void write_trace_jsonl(std::ostream& out, const RunTrace& trace);
/// InputError on malformed lines.
RunTrace read_trace_jsonl(std::istream& in);

/// "<algorithm>_seed<seed>.jsonl"
std::string trace_file_name(const std::string& algorithm, std::uint64_t seed);

struct PlotRow {
  std::string algorithm;
  std::uint64_t seed = 0;
  int eval_index = 0;
  double best_so_far = 0.0;
};

/// CSV with header algorithm,seed,eval_index,best_so_far and one row per evaluation.
void write_plot_data(std::ostream& out, const std::vector<LabeledTrace>& traces);
std::vector<PlotRow> read_plot_data(std::istream& in);

/// %.17g, or "inf"/"-inf"/"nan".
std::string format_number(double v);

}  // namespace explo2::bench
