#include "sweep.hpp"

#include <atomic>
#include <iomanip>
#include <sstream>
#include <thread>

namespace gptcast {

namespace {

constexpr const char* kFormat = "gptcast-sweep-1";

bool starts_with(const std::string& s, const char* prefix) { return s.rfind(prefix, 0) == 0; }

Json tally(std::size_t agree, std::size_t total) { return Json{{"agree", agree}, {"trials", total}}; }

}  // namespace

gpt::Rng trial_rng(std::uint64_t seed, std::size_t index) {
  const std::uint64_t i = index;
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(i >> 32)};
  return gpt::Rng(seq);
}

TrialResult run_trial(const gpt::SpacePtr& space, std::uint64_t seed, std::size_t index, std::size_t size,
                      double tolerance) {
  gpt::Rng rng = trial_rng(seed, index);
  const std::size_t n = size == 0 ? 1 + gpt::draw_index(rng, 3) : size;
  const gpt::StateSet ss = gpt::make_state_set(space, gpt::random_states(*space, n, rng));

  TrialResult t;
  t.index = index;
  t.states = ss.states;
  t.distinguishable = gpt::jointly_distinguishable(ss).verdict;
  t.cloneable_min = gpt::cloner_exists(ss, gpt::make_tensor(space, space, gpt::TensorVariant::min)).verdict;

  gpt::AnalyzeOptions options;
  options.seed = seed;
  options.cesaro_tolerance = tolerance;
  t.analysis = gpt::analyze(ss, gpt::make_tensor(space, space, gpt::TensorVariant::max), options);
  t.broadcastable_max = t.analysis.verdict;
  t.cloneable_max = t.cloneable_min;
  t.broadcastable_min = t.broadcastable_max;
  t.cover_agrees = true;
  t.min_max_agrees = true;
  bool clone_check = true;
  for (const auto& c : t.analysis.cross_checks) {
    if (!c.passed) t.failed_checks.push_back(c.name + (c.detail.empty() ? "" : " (" + c.detail + ")"));
    if (starts_with(c.name, "cloneable iff")) {
      clone_check = c.passed;
      t.cloneable_max = c.passed ? t.distinguishable : !t.distinguishable;
    } else if (starts_with(c.name, "broadcast verdict agrees")) {
      t.min_max_agrees = c.passed;
      t.broadcastable_min = c.passed ? t.broadcastable_max : !t.broadcastable_max;
    } else {
      t.cover_agrees = t.cover_agrees && c.passed;
    }
  }
  if (t.cloneable_min != t.distinguishable) t.failed_checks.push_back("min-composite cloner disagrees with distinguishability");
  t.clone_agrees = clone_check && t.cloneable_min == t.distinguishable;
  return t;
}

Scenario replay_scenario(const Scenario& family, const TrialResult& t) {
  Scenario s;
  s.name = "sweep trial " + std::to_string(t.index);
  s.space = family.space;
  s.unit = family.unit;
  s.vertices = family.vertices;
  s.hrep = family.hrep;
  s.composite = gpt::TensorVariant::max;
  for (const auto& x : t.states) s.states.push_back({StateSpec::Kind::coordinates, x, 0, 0});
  s.task = "analyze";
  s.seed = family.seed;
  return s;
}

std::vector<TrialResult> run_trials(const Scenario& s, const RunOptions& options) {
  const auto space = build_space(s);
  std::vector<TrialResult> results(s.trials);
  std::vector<std::string> errors(s.trials);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < s.trials;) {
      try {
        results[i] = run_trial(space, s.seed, i, s.size, options.tolerance);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  const std::size_t jobs = std::max<std::size_t>(1, std::min(options.jobs, s.trials));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t k = 0; k < jobs; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (std::size_t i = 0; i < s.trials; ++i) {
    if (!errors[i].empty()) throw std::runtime_error("sweep trial " + std::to_string(i) + ": " + errors[i]);
  }
  return results;
}

RunResult run_sweep(const Scenario& s, const RunOptions& options) {
  const auto results = run_trials(s, options);
  std::size_t clone_ok = 0, cover_ok = 0, minmax_ok = 0, yes = 0, dist = 0;
  Json rows = Json::array();
  Json dumps = Json::array();
  for (const auto& t : results) {
    clone_ok += t.clone_agrees;
    cover_ok += t.cover_agrees;
    minmax_ok += t.min_max_agrees;
    yes += t.broadcastable_max;
    dist += t.distinguishable;
    rows.push_back(Json{{"trial", t.index},
                        {"states", to_json(t.states)},
                        {"distinguishable", t.distinguishable},
                        {"cloneable_min", t.cloneable_min},
                        {"cloneable_max", t.cloneable_max},
                        {"broadcastable_min", t.broadcastable_min},
                        {"broadcastable_max", t.broadcastable_max},
                        {"clone_vs_distinguish", t.clone_agrees},
                        {"broadcast_vs_simplex_cover", t.cover_agrees},
                        {"min_vs_max", t.min_max_agrees},
                        {"failed_checks", t.failed_checks}});
    if (!t.clone_agrees || !t.cover_agrees || !t.min_max_agrees) {
      dumps.push_back(Json{{"trial", t.index}, {"scenario", format_scenario(replay_scenario(s, t))}});
    }
  }
  const std::size_t n = results.size();
  Json j;
  j["format"] = kFormat;
  j["scenario"] = format_scenario(s);
  j["family"] = to_string(s.space);
  j["size"] = s.size;
  j["trials"] = s.trials;
  j["seed"] = s.seed;
  j["summary"] = Json{{"clone_vs_distinguish", tally(clone_ok, n)},
                      {"broadcast_vs_simplex_cover", tally(cover_ok, n)},
                      {"min_vs_max", tally(minmax_ok, n)},
                      {"broadcastable", yes},
                      {"distinguishable", dist}};
  j["results"] = std::move(rows);
  j["disagreements"] = std::move(dumps);

  std::ostringstream out;
  out << "sweep: " << to_string(s.space) << ", " << n << " trials, set size "
      << (s.size == 0 ? std::string("1-3") : std::to_string(s.size)) << ", seed " << s.seed << "\n";
  out << std::left << std::setw(34) << "check" << "agree / trials\n";
  auto line = [&](const char* name, std::size_t ok) {
    out << std::left << std::setw(34) << name << ok << " / " << n << "\n";
  };
  line("cloneable vs distinguishable", clone_ok);
  line("broadcastable vs simplex cover", cover_ok);
  line("min vs max broadcast verdict", minmax_ok);
  out << "broadcastable sets: " << yes << ", distinguishable sets: " << dist << "\n";
  for (const auto& d : j["disagreements"]) {
    out << "\ndisagreement in trial " << d["trial"].get<std::size_t>() << ", replay with:\n"
        << d["scenario"].get<std::string>();
  }
  return {std::move(j), out.str()};
}

}  // namespace gptcast
