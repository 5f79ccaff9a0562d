#pragma once

#include <string>

#include "json.hpp"
#include "scenario.hpp"

namespace gptcast {

using Json = nlohmann::ordered_json;

struct RunOptions {
  /// Adds wall-clock seconds to reports. Off by default so reports stay byte-stable.
  bool timings = false;
  /// Entrywise tolerance of the iterative Cesaro cross-check.
  double tolerance = 1e-9;
  /// Sweep worker threads.
  std::size_t jobs = 1;
};

struct RunResult {
  Json report;
  std::string summary;
};

/// Runs a distinguish / clone / broadcast / analyze scenario, or a sweep.
RunResult run_scenario(const Scenario& s, const RunOptions& options);

/// Rebuilds the scenario stored in a report and substitutes its witness (or
/// certificate) back into the defining constraints.
gpt::Validation verify_report_json(const Json& report);

/// Two-space indentation plus a trailing newline.
std::string dump(const Json& j);

// exact-rational JSON helpers shared with the sweep
Json to_json(const gpt::Vec& v);
Json to_json(const gpt::Matrix& m);
Json to_json(const std::vector<gpt::Vec>& rows);

}  // namespace gptcast
