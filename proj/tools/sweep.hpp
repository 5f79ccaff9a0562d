#pragma once

#include "gpt/sampling.hpp"
#include "report.hpp"

namespace gptcast {

struct TrialResult {
  std::size_t index = 0;
  std::vector<gpt::Vec> states;
  bool distinguishable = false;
  bool cloneable_min = false;
  bool cloneable_max = false;
  bool broadcastable_min = false;
  bool broadcastable_max = false;
  bool clone_agrees = false;
  bool cover_agrees = false;
  bool min_max_agrees = false;
  std::vector<std::string> failed_checks;
  /// analyze() under the max composite
  gpt::DecisionReport analysis;
};

/// The trial's generator, seeded from (seed, index) alone, so trials are
/// independent of scheduling.
gpt::Rng trial_rng(std::uint64_t seed, std::size_t index);

/// size 0 draws 1 to 3 states.
TrialResult run_trial(const gpt::SpacePtr& space, std::uint64_t seed, std::size_t index, std::size_t size,
                      double tolerance);

/// A standalone analyze scenario reproducing one trial.
Scenario replay_scenario(const Scenario& family, const TrialResult& t);

std::vector<TrialResult> run_trials(const Scenario& s, const RunOptions& options);

RunResult run_sweep(const Scenario& s, const RunOptions& options);

}  // namespace gptcast
