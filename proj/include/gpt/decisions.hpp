#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gpt/channel.hpp"
#include "gpt/lp.hpp"

namespace gpt {

enum class Task { distinguish, clone, broadcast, simplex_cover, analyze };
std::string to_string(Task t);

/// States of one space, each certified inside Omega. Repeats are dropped
/// (first occurrence kept) and noted in `warnings`.
struct StateSet {
  SpacePtr space;
  std::vector<Vec> states;
  std::vector<Membership> certificates;
  std::vector<std::string> warnings;
};

/// Throws std::invalid_argument for a state of the wrong length, with u != 1,
/// or outside Omega.
StateSet make_state_set(SpacePtr space, std::vector<Vec> states);

struct CrossCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct SimplexCover {
  /// Vertices of the broadcast set of the symmetrized channel.
  std::vector<Vec> generators;
  /// Distinguishes the generators on the whole space (empty if they are not distinguishable).
  Measurement measurement;
  /// Convex weights of each input state over the generators.
  std::vector<Vec> weights;
  bool fixed_set_is_simplex = false;
  bool generators_distinguishable = false;
  AffineChannel symmetrized;
  Matrix compression;
  std::vector<CrossCheck> checks;
};

struct DecisionReport {
  Task task = Task::distinguish;
  bool verdict = false;
  std::optional<Measurement> measurement;
  std::optional<AffineChannel> channel;
  std::optional<SimplexCover> cover;
  std::optional<FarkasCertificate> certificate;
  /// The system the witness or certificate refers to.
  std::shared_ptr<const LpSystem> system;
  std::vector<CrossCheck> cross_checks;
  std::vector<std::string> warnings;
  double seconds = 0;
};

/// Variables: outcome j, coordinate k at j * dim + k.
LpSystem distinguish_system(const StateSpace& space, const std::vector<Vec>& states);

enum class ChannelGoal { clone, broadcast };

/// Variables: channel entry (r, c) at r * dim + c, followed for min
/// composites by one convex weight per (domain vertex, product vertex).
LpSystem channel_system(const StateSet& ss, const CompositeSpace& joint, ChannelGoal goal);

Matrix channel_from_witness(const Vec& witness, std::size_t rows, std::size_t cols);

bool distinguishes(const StateSpace& space, const Measurement& m, const std::vector<Vec>& states);
bool clones(const AffineChannel& t, const Vec& state);
bool broadcasts(const AffineChannel& t, const Vec& state);

DecisionReport jointly_distinguishable(const StateSet& ss);

/// x -> sum_j e_j(x) w_j (x) w_j into the min composite. Throws
/// std::invalid_argument unless m distinguishes the states.
AffineChannel construct_cloner(const StateSet& ss, const Measurement& m);

DecisionReport cloner_exists(const StateSet& ss, const CompositePtr& joint);
DecisionReport broadcaster_exists(const StateSet& ss, const CompositePtr& joint);

/// The cloner of the generators, checked to broadcast them and `samples`
/// random points of their simplex. Throws std::invalid_argument when the
/// generators are affinely dependent.
AffineChannel construct_broadcaster(const StateSet& generators, const Measurement& m, std::uint64_t seed = 1,
                                    std::size_t samples = 10);

/// Runs the symmetrize / fixed set / compression pipeline on a broadcaster.
/// Throws std::invalid_argument if b fails to broadcast some input state.
SimplexCover extract_simplex_cover(const AffineChannel& b, const StateSet& ss);

struct AnalyzeOptions {
  std::uint64_t seed = 1;
  /// Largest vertex count for the bounded search on the "no" side.
  std::size_t search_vertex_limit = 12;
  /// Allowed entrywise gap between the iterative Cesaro average and the exact compression.
  double cesaro_tolerance = 1e-9;
};

DecisionReport analyze(const StateSet& ss, const CompositePtr& joint, const AnalyzeOptions& options = {});

/// Re-checks a report by substitution: witnesses against their defining
/// conditions, certificates against the stored system.
Validation verify_report(const DecisionReport& report, const StateSet& ss);

}  // namespace gpt
