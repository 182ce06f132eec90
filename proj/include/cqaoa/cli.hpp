#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cqaoa/io.hpp"
#include "cqaoa/pipeline.hpp"

namespace cqaoa {

namespace fs = std::filesystem;

/// Generator spec file: one object or {"instances": [...]}. Each entry has
/// "family" ("pp" or "mks"), "name", "seed" and either explicit data or
/// generator fields:
///   pp:  "horizon", "loads", "capacity_range": [lo, hi],
///        "patterns" (default: all four), optional "noise"
///   mks: "items", "knapsacks", optional "count", or "values"/"weights"/"capacities"
/// Returns the written instance files in generation order.
std::vector<fs::path> cmd_generate(const Json& spec, const fs::path& out_dir);

struct EtaPolicy {
  bool optimal = false;  // eta = max(1, |f(x*)|), benchmark mode
  double value = 1.0;
};

/// Parses "optimal" or a positive number.
EtaPolicy parse_eta(const std::string& s);

struct CompileSummary {
  Json info;
  fs::path tensor_file;
};

/// Compiles one instance and writes its phase tensor to out_dir.
CompileSummary cmd_compile(const fs::path& instance, Method method, const EtaPolicy& eta, std::optional<double> rho,
                           std::uint64_t memory_cap, const fs::path& out_dir);

struct RunOptions {
  std::vector<fs::path> instances;
  std::vector<Method> methods{Method::qubo, Method::xy, Method::indicator, Method::indicator_xy};
  int p_max = 12;
  EtaPolicy eta;
  std::optional<double> rho;
  std::uint64_t seed = 0;
  std::uint64_t memory_cap = kDefaultMemoryCap;
  fs::path out = "results";
  bool omit_timing = false;
  bool tae = false;     // fixed TAE schedule instead of optimized ladders
  unsigned workers = 1;
};

struct RunSummary {
  std::size_t jobs = 0;
  std::size_t completed = 0;
  std::vector<std::string> skipped;  // "instance method: reason"
  std::size_t report_lines = 0;
};

/// Writes reports.jsonl and summary.csv to options.out. (instance, method)
/// pairs that cannot run are skipped and listed in the summary.
RunSummary cmd_run(const RunOptions& options, std::ostream& log);

struct ReportOptions {
  fs::path results;
  std::string baseline = "qubo";
  fs::path out;  // defaults to results
};

struct ReportSummary {
  std::vector<std::string> warnings;
  Json fits;
};

/// Reads summary.csv and writes fit.json and comparison.csv.
ReportSummary cmd_report(const ReportOptions& options);

/// Column order of summary.csv.
const std::vector<std::string>& summary_columns();

/// Shortest round-trip decimal; "inf" for infinity, "nan" for NaN.
std::string format_number(double v);

}  // namespace cqaoa
