#include "explo2/bench/trace_io.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "explo2/errors.hpp"

namespace explo2::bench {

namespace {

using nlohmann::json;

double parse_number(const json& v) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  throw InputError("trace: expected a number, got " + v.dump());
}

std::string json_number(double v) { return std::isfinite(v) ? format_number(v) : "\"" + format_number(v) + "\""; }

double parse_double(const std::string& s) {
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  double v;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw InputError("plot data: bad number '" + s + "'");
  }
  if (used != s.size()) throw InputError("plot data: bad number '" + s + "'");
  return v;
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_trace_jsonl(std::ostream& out, const RunTrace& trace) {
  for (const TraceRecord& r : trace.records()) {
    out << "{\"eval_index\":" << r.eval_index << ",\"point\":[";
    for (Eigen::Index i = 0; i < r.point.size(); ++i) out << (i ? "," : "") << json_number(r.point(i));
    out << "],\"value\":" << json_number(r.value) << ",\"best_so_far\":" << json_number(r.best_so_far)
        << ",\"batch_id\":" << r.batch_id << ",\"lambda\":" << json_number(r.lambda)
        << ",\"nonfinite\":" << (r.nonfinite ? "true" : "false") << ",\"fallback\":" << (r.fallback ? "true" : "false")
        << "}\n";
  }
}

RunTrace read_trace_jsonl(std::istream& in) {
  RunTrace trace;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const json j = json::parse(line);
      TraceRecord r;
      r.eval_index = j.at("eval_index").get<int>();
      const json& p = j.at("point");
      r.point.resize(static_cast<Eigen::Index>(p.size()));
      for (std::size_t i = 0; i < p.size(); ++i) r.point(static_cast<Eigen::Index>(i)) = parse_number(p[i]);
      r.value = parse_number(j.at("value"));
      r.best_so_far = parse_number(j.at("best_so_far"));
      r.batch_id = j.at("batch_id").get<int>();
      r.lambda = parse_number(j.at("lambda"));
      r.nonfinite = j.value("nonfinite", false);
      r.fallback = j.value("fallback", false);
      trace.push(std::move(r));
    } catch (const json::exception& e) {
      throw InputError("trace line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return trace;
}

std::string trace_file_name(const std::string& algorithm, std::uint64_t seed) {
  return algorithm + "_seed" + std::to_string(seed) + ".jsonl";
}

void write_plot_data(std::ostream& out, const std::vector<LabeledTrace>& traces) {
  out << "algorithm,seed,eval_index,best_so_far\n";
  for (const LabeledTrace& t : traces) {
    for (const TraceRecord& r : t.trace.records()) {
      out << t.algorithm << ',' << t.seed << ',' << r.eval_index << ',' << format_number(r.best_so_far) << '\n';
    }
  }
}

std::vector<PlotRow> read_plot_data(std::istream& in) {
  std::vector<PlotRow> rows;
  std::string line;
  if (!std::getline(in, line)) return rows;
  if (line.rfind("algorithm,seed,eval_index,best_so_far", 0) != 0) throw InputError("plot data: missing header");
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string algorithm, seed, index, best;
    if (!std::getline(ss, algorithm, ',') || !std::getline(ss, seed, ',') || !std::getline(ss, index, ',') ||
        !std::getline(ss, best)) {
      throw InputError("plot data: malformed row '" + line + "'");
    }
    try {
      rows.push_back({algorithm, std::stoull(seed), std::stoi(index), parse_double(best)});
    } catch (const std::logic_error&) {
      throw InputError("plot data: malformed row '" + line + "'");
    }
  }
  return rows;
}

}  // namespace explo2::bench
