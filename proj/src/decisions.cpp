#include "gpt/decisions.hpp"

#include <algorithm>
#include <chrono>
#include <sstream>
#include <stdexcept>

#include "gpt/sampling.hpp"

namespace gpt {

namespace {

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string idx(std::size_t i) { return std::to_string(i); }

// Coefficients of h . (T x) over the row-major entries of T.
Vec through_channel(const Vec& h, const Vec& x, std::size_t width) {
  Vec coeffs = zeros(width);
  const std::size_t d = x.size();
  for (std::size_t r = 0; r < h.size(); ++r) {
    if (h[r] == 0) continue;
    for (std::size_t c = 0; c < d; ++c) coeffs[r * d + c] = h[r] * x[c];
  }
  return coeffs;
}

CompositePtr as_composite(const SpacePtr& s) { return std::dynamic_pointer_cast<const CompositeSpace>(s); }

DecisionReport start(Task task, const StateSet& ss) {
  DecisionReport r;
  r.task = task;
  r.warnings = ss.warnings;
  return r;
}

// Vacuous witness for the empty set: prepare a fixed product double.
AffineChannel trivial_channel(const StateSet& ss, const CompositePtr& joint) {
  const Vec& v0 = ss.space->vertices().front();
  return constant_channel(ss.space, joint, kron(v0, v0));
}

void check_joint(const StateSet& ss, const CompositeSpace& joint) {
  if (!embeds(*joint.factor_a(), *ss.space) || !embeds(*ss.space, *joint.factor_a()) || !joint.symmetric_factors()) {
    throw std::invalid_argument("composite is not built from two copies of the state space");
  }
}

DecisionReport channel_decision(Task task, const StateSet& ss, const CompositePtr& joint, ChannelGoal goal) {
  Stopwatch clock;
  check_joint(ss, *joint);
  DecisionReport r = start(task, ss);
  if (ss.states.empty()) {
    r.verdict = true;
    r.channel = trivial_channel(ss, joint);
    r.warnings.push_back("empty state set: vacuously yes");
    r.seconds = clock.seconds();
    return r;
  }
  auto sys = std::make_shared<LpSystem>(channel_system(ss, *joint, goal));
  const LpResult res = lp_feasible(*sys);
  r.system = sys;
  r.verdict = res.feasible();
  if (res.feasible()) {
    AffineChannel t{channel_from_witness(*res.witness, joint->dim(), ss.space->dim()), ss.space, joint};
    const bool valid = validate_channel(t).ok();
    bool holds = true;
    for (const auto& w : ss.states) holds = holds && (goal == ChannelGoal::clone ? clones(t, w) : broadcasts(t, w));
    if (!valid || !holds) throw std::logic_error("channel LP returned a witness that fails substitution");
    r.cross_checks.push_back({goal == ChannelGoal::clone ? "witness clones every state" : "witness marginals recomputed",
                              true, ""});
    r.channel = std::move(t);
  } else {
    r.certificate = res.certificate;
  }
  r.seconds = clock.seconds();
  return r;
}

}  // namespace

std::string to_string(Task t) {
  switch (t) {
    case Task::distinguish: return "distinguish";
    case Task::clone: return "clone";
    case Task::broadcast: return "broadcast";
    case Task::simplex_cover: return "simplex_cover";
    case Task::analyze: return "analyze";
  }
  return "?";
}

StateSet make_state_set(SpacePtr space, std::vector<Vec> states) {
  StateSet ss;
  ss.space = std::move(space);
  for (std::size_t i = 0; i < states.size(); ++i) {
    Vec& w = states[i];
    if (w.size() != ss.space->dim()) {
      throw std::invalid_argument("state " + idx(i) + " has " + idx(w.size()) + " coordinates, expected " +
                                  idx(ss.space->dim()));
    }
    if (dot(ss.space->unit(), w) != 1) {
      throw std::invalid_argument("state " + idx(i) + " " + to_string(w) + " has u = " +
                                  to_string(dot(ss.space->unit(), w)) + ", expected 1");
    }
    if (std::find(ss.states.begin(), ss.states.end(), w) != ss.states.end()) {
      ss.warnings.push_back("state " + idx(i) + " " + to_string(w) + " repeats an earlier state and was dropped");
      continue;
    }
    Membership m = ss.space->member(w);
    if (!m.inside) throw std::invalid_argument("state " + idx(i) + " " + to_string(w) + " lies outside the state space");
    ss.states.push_back(std::move(w));
    ss.certificates.push_back(std::move(m));
  }
  return ss;
}

LpSystem distinguish_system(const StateSpace& space, const std::vector<Vec>& states) {
  const std::size_t n = states.size();
  const std::size_t d = space.dim();
  LpSystem sys(n * d);
  auto embed = [&](std::size_t j, const Vec& v) {
    Vec coeffs = zeros(n * d);
    for (std::size_t k = 0; k < d; ++k) coeffs[j * d + k] = v[k];
    return coeffs;
  };
  const auto& verts = space.vertices();
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < verts.size(); ++i) {
      sys.add_inequality(embed(j, scale(verts[i], -1)), 0, "e" + idx(j) + "(vertex " + idx(i) + ") >= 0");
    }
  }
  for (std::size_t k = 0; k < d; ++k) {
    Vec coeffs = zeros(n * d);
    for (std::size_t j = 0; j < n; ++j) coeffs[j * d + k] = 1;
    sys.add_equality(std::move(coeffs), space.unit()[k], "sum of effects = u at coordinate " + idx(k));
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      sys.add_equality(embed(j, states[i]), i == j ? 1 : 0, "e" + idx(j) + "(state " + idx(i) + ") = " + (i == j ? "1" : "0"));
    }
  }
  return sys;
}

LpSystem channel_system(const StateSet& ss, const CompositeSpace& joint, ChannelGoal goal) {
  const std::size_t d = ss.space->dim();
  const std::size_t big = joint.dim();
  const std::size_t entries = big * d;
  const auto& verts = ss.space->vertices();
  const bool use_weights = joint.variant() == TensorVariant::min;
  const std::size_t products = use_weights ? joint.vertices().size() : 0;
  const std::size_t width = entries + verts.size() * products;
  LpSystem sys(width);

  for (std::size_t c = 0; c < d; ++c) {
    Vec coeffs = zeros(width);
    for (std::size_t r = 0; r < big; ++r) coeffs[r * d + c] = joint.unit()[r];
    sys.add_equality(std::move(coeffs), ss.space->unit()[c], "unit preserved at column " + idx(c));
  }

  if (use_weights) {
    // T(v_i) = sum_k lambda_ik w_k with lambda_i a probability vector.
    const auto& prods = joint.vertices();
    for (std::size_t i = 0; i < verts.size(); ++i) {
      const std::size_t base = entries + i * products;
      for (std::size_t r = 0; r < big; ++r) {
        Vec coeffs = through_channel(unit_vector(big, r), verts[i], width);
        for (std::size_t k = 0; k < products; ++k) coeffs[base + k] = -prods[k][r];
        sys.add_equality(std::move(coeffs), 0, "T(vertex " + idx(i) + ") in hull of products, row " + idx(r));
      }
      Vec total = zeros(width);
      for (std::size_t k = 0; k < products; ++k) {
        total[base + k] = 1;
        sys.add_nonnegative(base + k, "weight " + idx(k) + " for vertex " + idx(i) + " >= 0");
      }
      sys.add_equality(std::move(total), 1, "weights for vertex " + idx(i) + " sum to 1");
    }
  } else {
    const HRep& h = joint.omega().hrep();
    for (std::size_t i = 0; i < verts.size(); ++i) {
      for (std::size_t f = 0; f < h.inequalities.size(); ++f) {
        sys.add_inequality(through_channel(h.inequalities[f].normal, verts[i], width), h.inequalities[f].offset,
                           "T(vertex " + idx(i) + ") facet " + idx(f));
      }
      for (std::size_t f = 0; f < h.equalities.size(); ++f) {
        sys.add_equality(through_channel(h.equalities[f].normal, verts[i], width), h.equalities[f].offset,
                         "T(vertex " + idx(i) + ") equation " + idx(f));
      }
    }
  }

  for (std::size_t i = 0; i < ss.states.size(); ++i) {
    const Vec& w = ss.states[i];
    if (goal == ChannelGoal::clone) {
      const Vec target = kron(w, w);
      for (std::size_t r = 0; r < big; ++r) {
        sys.add_equality(through_channel(unit_vector(big, r), w, width), target[r],
                         "T(state " + idx(i) + ") = state (x) state, row " + idx(r));
      }
    } else {
      for (std::size_t a = 0; a < d; ++a) {
        sys.add_equality(through_channel(joint.marginal_a_map().row(a), w, width), w[a],
                         "marginal A of T(state " + idx(i) + "), row " + idx(a));
        sys.add_equality(through_channel(joint.marginal_b_map().row(a), w, width), w[a],
                         "marginal B of T(state " + idx(i) + "), row " + idx(a));
      }
    }
  }
  return sys;
}

Matrix channel_from_witness(const Vec& witness, std::size_t rows, std::size_t cols) {
  if (witness.size() < rows * cols) throw std::invalid_argument("channel_from_witness: witness too short");
  Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = witness[r * cols + c];
  }
  return m;
}

bool distinguishes(const StateSpace& space, const Measurement& m, const std::vector<Vec>& states) {
  if (!validate_measurement(space, m).ok()) return false;
  if (states.empty()) return true;
  if (m.effects.size() != states.size()) return false;
  for (std::size_t i = 0; i < states.size(); ++i) {
    for (std::size_t j = 0; j < states.size(); ++j) {
      if (dot(m.effects[j], states[i]) != (i == j ? 1 : 0)) return false;
    }
  }
  return true;
}

bool clones(const AffineChannel& t, const Vec& state) { return t(state) == kron(state, state); }

bool broadcasts(const AffineChannel& t, const Vec& state) {
  const auto joint = as_composite(t.codomain);
  if (!joint) return false;
  const Vec out = t(state);
  return joint->marginal_a_map() * out == state && joint->marginal_b_map() * out == state;
}

DecisionReport jointly_distinguishable(const StateSet& ss) {
  Stopwatch clock;
  DecisionReport r = start(Task::distinguish, ss);
  if (ss.states.empty()) {
    r.verdict = true;
    r.measurement = Measurement{{ss.space->unit()}, {"u"}};
    r.warnings.push_back("empty state set: vacuously yes");
    r.seconds = clock.seconds();
    return r;
  }
  auto sys = std::make_shared<LpSystem>(distinguish_system(*ss.space, ss.states));
  const LpResult res = lp_feasible(*sys);
  r.system = sys;
  r.verdict = res.feasible();
  if (res.feasible()) {
    const std::size_t d = ss.space->dim();
    Measurement m;
    for (std::size_t j = 0; j < ss.states.size(); ++j) {
      m.effects.emplace_back(res.witness->begin() + static_cast<long>(j * d),
                             res.witness->begin() + static_cast<long>((j + 1) * d));
      m.labels.push_back("e" + idx(j));
    }
    if (!distinguishes(*ss.space, m, ss.states)) throw std::logic_error("distinguishing LP witness fails substitution");
    r.measurement = std::move(m);
  } else {
    r.certificate = res.certificate;
  }
  r.seconds = clock.seconds();
  return r;
}

AffineChannel construct_cloner(const StateSet& ss, const Measurement& m) {
  if (!distinguishes(*ss.space, m, ss.states)) {
    throw std::invalid_argument("construct_cloner: measurement does not distinguish the states");
  }
  const auto joint = make_tensor(ss.space, ss.space, TensorVariant::min);
  if (ss.states.empty()) return trivial_channel(ss, joint);
  Matrix t(joint->dim(), ss.space->dim());
  for (std::size_t j = 0; j < ss.states.size(); ++j) t = t + Matrix::outer(kron(ss.states[j], ss.states[j]), m.effects[j]);
  return {std::move(t), ss.space, joint};
}

DecisionReport cloner_exists(const StateSet& ss, const CompositePtr& joint) {
  DecisionReport r = channel_decision(Task::clone, ss, joint, ChannelGoal::clone);
  const bool distinguishable = jointly_distinguishable(ss).verdict;
  r.cross_checks.push_back({"cloneable iff jointly distinguishable", distinguishable == r.verdict,
                            std::string("distinguishable: ") + (distinguishable ? "yes" : "no")});
  return r;
}

DecisionReport broadcaster_exists(const StateSet& ss, const CompositePtr& joint) {
  return channel_decision(Task::broadcast, ss, joint, ChannelGoal::broadcast);
}

AffineChannel construct_broadcaster(const StateSet& generators, const Measurement& m, std::uint64_t seed,
                                    std::size_t samples) {
  const std::size_t n = generators.states.size();
  if (n > 0 && rank(Matrix::from_rows(generators.states, generators.space->dim())) != n) {
    throw std::invalid_argument("construct_broadcaster: generators are affinely dependent");
  }
  AffineChannel t = construct_cloner(generators, m);
  if (n == 0) return t;
  Rng rng(seed);
  std::vector<Vec> checks = generators.states;
  for (std::size_t k = 0; k < samples; ++k) checks.push_back(random_mixture(generators.states, rng));
  for (const auto& w : checks) {
    if (!broadcasts(t, w)) throw std::logic_error("construct_broadcaster: cloner fails to broadcast " + to_string(w));
  }
  return t;
}

SimplexCover extract_simplex_cover(const AffineChannel& b, const StateSet& ss) {
  for (std::size_t i = 0; i < ss.states.size(); ++i) {
    if (!broadcasts(b, ss.states[i])) {
      throw std::invalid_argument("extract_simplex_cover: channel does not broadcast state " + idx(i) + " " +
                                  to_string(ss.states[i]));
    }
  }
  SimplexCover cover;
  cover.symmetrized = symmetrize(b);
  const auto joint = as_composite(b.codomain);
  const AffineChannel reduced = marginal_channel_a(cover.symmetrized);
  const Polytope gamma = fixed_set(reduced);
  if (gamma.is_empty()) throw std::logic_error("extract_simplex_cover: reduced channel has no fixed state");
  const Compression comp = compression(reduced);
  cover.compression = comp.channel.matrix;
  cover.generators = gamma.vertices();
  cover.fixed_set_is_simplex = gamma.is_simplex();

  const Matrix q = kron(comp.channel.matrix, comp.channel.matrix) * cover.symmetrized.matrix;
  bool marginals = true, doubles = true;
  for (const auto& g : cover.generators) {
    const Vec out = q * g;
    marginals = marginals && joint->marginal_a_map() * out == g && joint->marginal_b_map() * out == g;
    doubles = doubles && out == kron(g, g);
  }
  cover.checks.push_back({"(P (x) P) B broadcasts the fixed-set vertices", marginals, ""});
  cover.checks.push_back({"(P (x) P) B clones the fixed-set vertices", doubles, ""});
  cover.checks.push_back({"compression is idempotent", comp.channel.matrix * comp.channel.matrix == comp.channel.matrix, ""});

  // Distinguish inside the fixed set's own coordinates, then lift to Omega.
  const SpacePtr local = fixed_space(comp, gamma);
  std::vector<Vec> local_states;
  for (const auto& g : cover.generators) local_states.push_back(comp.coords * g);
  const StateSet local_set{local, local_states, {}, {}};
  const DecisionReport inner = jointly_distinguishable(local_set);
  cover.generators_distinguishable = inner.verdict;
  if (inner.verdict) {
    for (std::size_t j = 0; j < inner.measurement->effects.size(); ++j) {
      cover.measurement.effects.push_back(lift_effect(comp, gamma, inner.measurement->effects[j]));
      cover.measurement.labels.push_back("e" + idx(j));
    }
  }
  cover.checks.push_back({"lifted measurement distinguishes the generators",
                          inner.verdict && distinguishes(*ss.space, cover.measurement, cover.generators), ""});

  const Polytope hull = Polytope::from_extreme_points(ss.space->dim(), cover.generators);
  bool covered = true;
  for (const auto& w : ss.states) {
    Membership m = hull.member(w);
    covered = covered && m.inside;
    cover.weights.push_back(m.inside ? m.weights : Vec{});
  }
  cover.checks.push_back({"inputs lie in the hull of the generators", covered, ""});
  cover.checks.push_back({"broadcast set is a simplex", cover.fixed_set_is_simplex,
                          idx(cover.generators.size()) + " vertices, affine dimension " + idx(gamma.affine_dimension())});
  return cover;
}

namespace {

// Bounded search for a distinguishable simplex of Omega's vertices holding
// every state. A hit contradicts a "no" from the LP.
std::optional<std::vector<Vec>> search_vertex_simplices(const StateSet& ss, std::size_t vertex_limit) {
  const auto& verts = ss.space->vertices();
  if (verts.size() > vertex_limit) return std::nullopt;
  const std::size_t d = ss.space->dim();
  std::vector<std::size_t> pick;
  std::optional<std::vector<Vec>> found;
  auto recurse = [&](auto&& self, std::size_t from) -> void {
    if (found) return;
    if (!pick.empty()) {
      std::vector<Vec> gens;
      for (std::size_t i : pick) gens.push_back(verts[i]);
      if (rank(Matrix::from_rows(gens, d)) != gens.size()) return;
      const Polytope hull = Polytope::from_extreme_points(d, gens);
      bool holds = true;
      for (const auto& w : ss.states) holds = holds && hull.contains(w);
      if (holds && jointly_distinguishable(StateSet{ss.space, gens, {}, {}}).verdict) {
        found = gens;
        return;
      }
    }
    if (pick.size() == d) return;
    for (std::size_t i = from; i < verts.size(); ++i) {
      pick.push_back(i);
      self(self, i + 1);
      pick.pop_back();
    }
  };
  recurse(recurse, 0);
  return found;
}

}  // namespace

DecisionReport analyze(const StateSet& ss, const CompositePtr& joint, const AnalyzeOptions& options) {
  Stopwatch clock;
  DecisionReport r = broadcaster_exists(ss, joint);
  r.task = Task::analyze;
  if (r.verdict && !ss.states.empty()) {
    SimplexCover cover = extract_simplex_cover(*r.channel, ss);
    for (const auto& c : cover.checks) r.cross_checks.push_back(c);
    const CesaroResult ces = cesaro_compression(marginal_channel_a(cover.symmetrized));
    const double gap = max_abs_difference(ces.matrix, cover.compression);
    std::ostringstream detail;
    detail << ces.iterations << " doublings, max entry gap " << gap;
    r.cross_checks.push_back({"Cesaro average matches the exact compression",
                              ces.converged && gap <= options.cesaro_tolerance, detail.str()});
    if (cover.fixed_set_is_simplex && cover.generators_distinguishable) {
      bool rebuilt = false;
      std::string detail;
      try {
        const AffineChannel t = construct_broadcaster(make_state_set(ss.space, cover.generators), cover.measurement,
                                                      options.seed);
        rebuilt = true;
        for (const auto& w : ss.states) rebuilt = rebuilt && broadcasts(t, w);
      } catch (const std::exception& e) {
        detail = e.what();
      }
      r.cross_checks.push_back({"measure-and-prepare broadcaster built from the cover broadcasts the inputs", rebuilt,
                                detail});
    }
    r.cover = std::move(cover);
  } else if (!r.verdict) {
    const auto hit = search_vertex_simplices(ss, options.search_vertex_limit);
    std::string detail = ss.space->vertices().size() > options.search_vertex_limit
                             ? "skipped: too many vertices"
                             : "no distinguishable vertex simplex contains the set";
    if (hit) {
      detail = "found";
      for (const auto& g : *hit) detail += " " + to_string(g);
    }
    r.cross_checks.push_back({"heuristic vertex-simplex search agrees with no", !hit, detail});
  }

  const bool distinguishable = jointly_distinguishable(ss).verdict;
  const bool cloneable = channel_decision(Task::clone, ss, joint, ChannelGoal::clone).verdict;
  r.cross_checks.push_back({"cloneable iff jointly distinguishable", distinguishable == cloneable,
                            std::string("distinguishable: ") + (distinguishable ? "yes" : "no") +
                                ", cloneable: " + (cloneable ? "yes" : "no")});
  for (const auto variant : {TensorVariant::min, TensorVariant::max}) {
    if (variant == joint->variant()) continue;
    const bool other = broadcaster_exists(ss, make_tensor(ss.space, ss.space, variant)).verdict;
    r.cross_checks.push_back({"broadcast verdict agrees under the " + to_string(variant) + " composite",
                              other == r.verdict, std::string("other verdict: ") + (other ? "yes" : "no")});
  }
  r.seconds = clock.seconds();
  return r;
}

Validation verify_report(const DecisionReport& report, const StateSet& ss) {
  Validation v;
  auto fail = [&](std::string msg) { v.violations.push_back({std::move(msg), {}, {}}); };
  if (report.verdict) {
    if (report.task == Task::distinguish) {
      if (!report.measurement) {
        fail("yes verdict without a measurement");
      } else if (!distinguishes(*ss.space, *report.measurement, ss.states)) {
        fail("measurement does not distinguish the states");
      }
    } else {
      if (!report.channel) {
        fail("yes verdict without a channel");
        return v;
      }
      for (const auto& bad : validate_channel(*report.channel).violations) fail("channel: " + bad.message);
      for (std::size_t i = 0; i < ss.states.size(); ++i) {
        const bool ok = report.task == Task::clone ? clones(*report.channel, ss.states[i])
                                                   : broadcasts(*report.channel, ss.states[i]);
        if (!ok) fail("channel fails on state " + idx(i));
      }
      if (report.cover) {
        const SimplexCover& c = *report.cover;
        if (c.generators_distinguishable && !distinguishes(*ss.space, c.measurement, c.generators)) {
          fail("cover measurement does not distinguish the generators");
        }
        for (std::size_t i = 0; i < ss.states.size() && i < c.weights.size(); ++i) {
          if (c.weights[i].size() != c.generators.size()) {
            fail("state " + idx(i) + " has no weights over the generators");
            continue;
          }
          Vec sum = zeros(ss.space->dim());
          Scalar total = 0;
          for (std::size_t k = 0; k < c.generators.size(); ++k) {
            if (sgn(c.weights[i][k]) < 0) fail("negative weight for state " + idx(i));
            sum = add(sum, scale(c.generators[k], c.weights[i][k]));
            total += c.weights[i][k];
          }
          if (sum != ss.states[i] || total != 1) fail("weights do not recombine state " + idx(i));
        }
      }
    }
  } else {
    if (!report.certificate || !report.system) {
      fail("no verdict without a certificate");
    } else if (!verify_certificate(*report.system, *report.certificate)) {
      fail("certificate does not prove infeasibility");
    }
  }
  return v;
}

}  // namespace gpt
