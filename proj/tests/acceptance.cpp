// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

#include "demos.hpp"
#include "gpt/decisions.hpp"
#include "gpt/sampling.hpp"
#include "report.hpp"
#include "sweep.hpp"

using namespace gpt;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Collects the first few failure messages of a criterion.
struct Ledger {
  std::size_t checks = 0;
  std::size_t failures = 0;
  std::string first;

  void expect(bool ok, const std::string& what) {
    ++checks;
    if (ok) return;
    if (failures++ < 3) first += (first.empty() ? "" : "; ") + what;
  }
  Outcome outcome(const std::string& summary) const {
    return {failures == 0, failures == 0 ? summary : std::to_string(failures) + " of " + std::to_string(checks) +
                                                         " checks failed: " + first};
  }
};

// Contractions with the other factor's unit, written out here rather than
// taken from CompositeSpace.
Vec reduce_a(const Vec& joint, const StateSpace& b) {
  const std::size_t db = b.dim(), da = joint.size() / db;
  Vec out = zeros(da);
  for (std::size_t i = 0; i < da; ++i) {
    for (std::size_t j = 0; j < db; ++j) out[i] += joint[i * db + j] * b.unit()[j];
  }
  return out;
}

Vec reduce_b(const Vec& joint, const StateSpace& a) {
  const std::size_t da = a.dim(), db = joint.size() / da;
  Vec out = zeros(db);
  for (std::size_t i = 0; i < da; ++i) {
    for (std::size_t j = 0; j < db; ++j) out[j] += joint[i * db + j] * a.unit()[i];
  }
  return out;
}

bool broadcasts_exactly(const AffineChannel& t, const StateSpace& s, const Vec& w) {
  const Vec out = t.matrix * w;
  return reduce_a(out, s) == w && reduce_b(out, s) == w;
}

// Farkas check by hand: y >= 0 on inequalities, sum y_i a_i = 0 and sum y_i b_i < 0.
bool farkas_holds(const LpSystem& sys, const FarkasCertificate& c) {
  if (c.inequality_multipliers.size() != sys.inequalities().size() ||
      c.equality_multipliers.size() != sys.equalities().size()) {
    return false;
  }
  Vec combo = zeros(sys.variables());
  Scalar rhs = 0;
  for (std::size_t i = 0; i < sys.inequalities().size(); ++i) {
    const Scalar& y = c.inequality_multipliers[i];
    if (sgn(y) < 0) return false;
    for (std::size_t k = 0; k < combo.size(); ++k) combo[k] += y * sys.inequalities()[i].coeffs[k];
    rhs += y * sys.inequalities()[i].bound;
  }
  for (std::size_t i = 0; i < sys.equalities().size(); ++i) {
    const Scalar& y = c.equality_multipliers[i];
    for (std::size_t k = 0; k < combo.size(); ++k) combo[k] += y * sys.equalities()[i].coeffs[k];
    rhs += y * sys.equalities()[i].bound;
  }
  return is_zero(combo) && sgn(rhs) < 0;
}

// Strictly positive weights with small denominators.
Vec interior_point(const std::vector<Vec>& points, Rng& rng) {
  Vec w;
  Scalar total = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    w.push_back(Scalar(static_cast<long>(1 + draw_index(rng, 6))));
    total += w.back();
  }
  Vec x = zeros(points.front().size());
  for (std::size_t i = 0; i < points.size(); ++i) x = add(x, scale(points[i], w[i] / total));
  return x;
}

bool recombines(const std::vector<Vec>& generators, const Vec& weights, const Vec& x) {
  if (weights.size() != generators.size()) return false;
  Vec sum = zeros(x.size());
  Scalar total = 0;
  for (std::size_t k = 0; k < generators.size(); ++k) {
    if (sgn(weights[k]) < 0) return false;
    sum = add(sum, scale(generators[k], weights[k]));
    total += weights[k];
  }
  return total == 1 && sum == x;
}

std::string name_of(const SpacePtr& s) { return s->name(); }

// ---------------------------------------------------------------------------

Outcome classical_universal() {
  Ledger l;
  Rng rng(11);
  for (std::size_t n : {2, 3, 4}) {
    const auto s = make_classical(n);
    const StateSet ss = make_state_set(s, s->vertices());
    const DecisionReport r = broadcaster_exists(ss, make_tensor(s, s, TensorVariant::max));
    const std::string tag = "classical(" + std::to_string(n) + ")";
    l.expect(r.verdict && r.channel, tag + " verdict no");
    if (!r.channel) continue;
    l.expect(validate_channel(*r.channel).ok(), tag + " witness is not a channel");
    for (const auto& v : s->vertices()) l.expect(broadcasts_exactly(*r.channel, *s, v), tag + " vertex not broadcast");
    for (int k = 0; k < 10; ++k) {
      l.expect(broadcasts_exactly(*r.channel, *s, interior_point(s->vertices(), rng)), tag + " interior state not broadcast");
    }
  }
  return l.outcome("classical 2, 3, 4: yes; witnesses broadcast all vertices and 10 interior states each");
}

Outcome nonclassical_universal() {
  Ledger l;
  for (const auto& s : {make_square_gbit(), make_polygon(5)}) {
    const StateSet ss = make_state_set(s, s->vertices());
    const DecisionReport r = broadcaster_exists(ss, make_tensor(s, s, TensorVariant::max));
    l.expect(!r.verdict, name_of(s) + " verdict yes");
    l.expect(r.certificate && r.system && farkas_holds(*r.system, *r.certificate), name_of(s) + " certificate fails");
    l.expect(verify_report(r, ss).ok(), name_of(s) + " report does not re-verify");
  }
  return l.outcome("square and pentagon: no, Farkas certificates re-checked by hand");
}

struct SweepTrial {
  std::string space;
  std::size_t index = 0;
  bool distinguishable = false, clone_min = false, clone_max = false, bc_min = false, bc_max = false;
  std::string cover_failure;  // empty when the constructive checks pass or do not apply
  bool cover_tested = false;
  std::size_t constructed = 0;
};

std::vector<SweepTrial> g_sweep;
double g_sweep_seconds = 0;
constexpr std::size_t kTrialsPerSpace = 100;

// Constructive direction: construct_broadcaster on distinguishable generators
// broadcasts 10 random points of their simplex.
std::string check_construction(const SpacePtr& s, const std::vector<Vec>& generators, const Measurement& m,
                               std::uint64_t seed) {
  const AffineChannel t = construct_broadcaster(make_state_set(s, generators), m, seed);
  if (!validate_channel(t).ok()) return "constructed broadcaster is not a channel";
  Rng rng(seed);
  for (int k = 0; k < 10; ++k) {
    const Vec w = random_mixture(generators, rng);
    if (!broadcasts_exactly(t, *s, w)) return "constructed broadcaster misses " + to_string(w);
  }
  return "";
}

void run_sweep_once() {
  if (!g_sweep.empty()) return;
  const auto t0 = std::chrono::steady_clock::now();
  for (const auto& s : {make_square_gbit(), make_classical(4), make_polygon(5)}) {
    const auto mn = make_tensor(s, s, TensorVariant::min);
    const auto mx = make_tensor(s, s, TensorVariant::max);
    for (std::size_t i = 0; i < kTrialsPerSpace; ++i) {
      Rng rng = gptcast::trial_rng(2024, i);
      const std::size_t size = 1 + draw_index(rng, 3);
      const StateSet ss = make_state_set(s, random_states(*s, size, rng));
      SweepTrial t;
      t.space = s->name();
      t.index = i;
      const DecisionReport dist = jointly_distinguishable(ss);
      t.distinguishable = dist.verdict;
      t.clone_min = cloner_exists(ss, mn).verdict;
      t.clone_max = cloner_exists(ss, mx).verdict;
      const DecisionReport bmin = broadcaster_exists(ss, mn);
      const DecisionReport bmax = broadcaster_exists(ss, mx);
      t.bc_min = bmin.verdict;
      t.bc_max = bmax.verdict;

      // Distinguishable, affinely independent inputs are generators themselves.
      if (dist.verdict && rank(Matrix::from_rows(ss.states, s->dim())) == ss.states.size()) {
        const std::string bad = check_construction(s, ss.states, *dist.measurement, i + 1);
        if (!bad.empty()) t.cover_failure = "inputs: " + bad;
        ++t.constructed;
      }
      if (bmax.verdict) {
        t.cover_tested = true;
        const SimplexCover cover = extract_simplex_cover(*bmax.channel, ss);
        const StateSet gens = make_state_set(s, cover.generators);
        const DecisionReport gd = jointly_distinguishable(gens);
        const Polytope simplex = Polytope::from_extreme_points(s->dim(), cover.generators);
        if (!gd.verdict) t.cover_failure = "cover generators are not distinguishable";
        for (const auto& w : ss.states) {
          const Membership m = simplex.member(w);
          if (!m.inside || !recombines(simplex.vertices(), m.weights, w)) t.cover_failure = "input outside the cover";
        }
        if (gd.verdict && t.cover_failure.empty()) {
          if (rank(Matrix::from_rows(cover.generators, s->dim())) != cover.generators.size()) {
            t.cover_failure = "cover generators are affinely dependent";
          } else {
            const std::string bad = check_construction(s, cover.generators, *gd.measurement, i + 101);
            if (!bad.empty()) t.cover_failure = "cover: " + bad;
            ++t.constructed;
          }
        }
      }
      g_sweep.push_back(std::move(t));
    }
  }
  g_sweep_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string trial_tag(const SweepTrial& t) { return t.space + " trial " + std::to_string(t.index); }

Outcome clone_equivalence() {
  run_sweep_once();
  Ledger l;
  for (const auto& t : g_sweep) {
    l.expect(t.clone_min == t.distinguishable, trial_tag(t) + " min cloner disagrees");
    l.expect(t.clone_max == t.distinguishable, trial_tag(t) + " max cloner disagrees");
  }
  std::size_t yes = 0;
  for (const auto& t : g_sweep) yes += t.distinguishable;
  std::ostringstream s;
  s << g_sweep.size() << " sets (sizes 1-3) on square, classical(4), pentagon, min and max: all agree (" << yes
    << " distinguishable), sweep " << static_cast<int>(g_sweep_seconds) << " s";
  return l.outcome(s.str());
}

Outcome broadcast_equivalence() {
  run_sweep_once();
  Ledger l;
  std::size_t covers = 0, constructed = 0;
  for (const auto& t : g_sweep) {
    l.expect(t.cover_failure.empty(), trial_tag(t) + " " + t.cover_failure);
    covers += t.cover_tested;
    constructed += t.constructed;
  }
  return l.outcome(std::to_string(covers) + " yes-instances covered by distinguishable simplices; " +
                   std::to_string(constructed) + " generator sets rebuilt into broadcasters of 10 random points each");
}

Outcome compression_lemma() {
  Ledger l;
  long worst_steps = 0;
  double worst_gap = 0;
  for (const auto& s : {make_square_gbit(), make_classical(4)}) {
    Rng rng(99);
    for (int k = 0; k < 50; ++k) {
      const AffineChannel t = random_endochannel(s, rng);
      const std::string tag = name_of(s) + " channel " + std::to_string(k);
      l.expect(validate_channel(t).ok(), tag + " invalid");
      const Compression p = compression(t);
      const Matrix& pm = p.channel.matrix;
      l.expect(pm * pm == pm, tag + " P^2 != P");
      l.expect(t.matrix * pm == pm, tag + " TP != P");
      std::vector<Vec> image;
      for (const auto& v : s->vertices()) image.push_back(pm * v);
      const Polytope range = Polytope::from_vertices(s->dim(), image);
      l.expect(range.same_set(fixed_set(t)), tag + " range(P) != fixed set");
      const CesaroResult c = cesaro_compression(t, {1e-12, 1000000});
      const double gap = max_abs_difference(c.matrix, pm);
      l.expect(c.converged && c.iterations <= 1000000 && gap <= 1e-9, tag + " Cesaro gap " + std::to_string(gap));
      worst_steps = std::max(worst_steps, c.iterations);
      worst_gap = std::max(worst_gap, gap);
    }
  }
  std::ostringstream s;
  s << "100 channels: P^2 = P and range(P) = fixed set exactly; Cesaro gap <= " << worst_gap << " within "
    << worst_steps << " doubling steps";
  return l.outcome(s.str());
}

Outcome sandwich() {
  Ledger l;
  const auto sq = make_square_gbit();
  const auto mx = make_tensor(sq, sq, TensorVariant::max);
  const auto mn = make_tensor(sq, sq, TensorVariant::min);
  std::size_t products = 0, entangled = 0;
  for (const auto& v : mx->vertices()) {
    if (v == kron(reduce_a(v, *sq), reduce_b(v, *sq))) {
      ++products;
      continue;
    }
    ++entangled;
    const Membership m = mn->member(v);
    bool separates = !m.inside && dot(m.separator, v) > m.separator_bound;
    for (const auto& w : mn->vertices()) separates = separates && dot(m.separator, w) <= m.separator_bound;
    l.expect(separates, "entangled vertex " + to_string(v) + " not separated from min");
  }
  l.expect(mx->vertices().size() == 24, "square max has " + std::to_string(mx->vertices().size()) + " vertices");
  l.expect(products == 16 && entangled == 8, "products " + std::to_string(products));

  const std::vector<SpacePtr> others{make_classical(2), make_classical(3), sq, make_polygon(5)};
  for (std::size_t n : {2, 3}) {
    const auto c = make_classical(n);
    for (const auto& o : others) {
      l.expect(min_tensor(c, o)->omega().same_set(max_tensor(c, o)->omega()),
               "classical(" + std::to_string(n) + ") x " + name_of(o) + " min != max");
      l.expect(min_tensor(o, c)->omega().same_set(max_tensor(o, c)->omega()),
               name_of(o) + " x classical(" + std::to_string(n) + ") min != max");
    }
  }
  return l.outcome("square max: 24 vertices, 16 products, 8 separated from min; classical(2|3) with each builtin: min = max");
}

Outcome pure_marginals() {
  Ledger l;
  const std::vector<SpacePtr> builtins{make_classical(2), make_classical(3), make_classical(4), make_square_gbit(),
                                       make_polygon(5)};
  std::size_t tested = 0;
  auto pure = [](const StateSpace& s, const Vec& x) {
    const auto& vs = s.vertices();
    return std::find(vs.begin(), vs.end(), x) != vs.end();
  };
  for (const auto& a : builtins) {
    for (const auto& b : builtins) {
      const auto mx = max_tensor(a, b);
      for (const auto& v : mx->vertices()) {
        const Vec ma = reduce_a(v, *b), mb = reduce_b(v, *a);
        if (!pure(*a, ma) && !pure(*b, mb)) continue;
        ++tested;
        l.expect(v == kron(ma, mb), name_of(a) + " x " + name_of(b) + " vertex " + to_string(v));
      }
    }
  }
  return l.outcome(std::to_string(tested) + " vertices with a pure marginal across 25 builtin max composites all factorize");
}

Outcome tensor_invariance() {
  run_sweep_once();
  Ledger l;
  std::size_t yes = 0;
  for (const auto& t : g_sweep) {
    l.expect(t.bc_min == t.bc_max, trial_tag(t) + " min/max broadcast verdicts differ");
    yes += t.bc_max;
  }
  return l.outcome(std::to_string(g_sweep.size()) + " sets: min and max broadcast verdicts agree (" +
                   std::to_string(yes) + " yes)");
}

Outcome determinism() {
  Ledger l;
  gptcast::RunOptions o;
  for (const auto& d : gptcast::demos()) {
    const auto s = gptcast::parse_scenario(d.scenario);
    const std::string a = gptcast::dump(gptcast::run_scenario(s, o).report);
    const std::string b = gptcast::dump(gptcast::run_scenario(s, o).report);
    l.expect(a == b, "demo " + d.name + " differs between runs");
  }
  gptcast::Scenario sweep;
  sweep.space = gptcast::parse_space_spec("square");
  sweep.task = "sweep";
  sweep.trials = 12;
  sweep.size = 0;
  sweep.seed = 31;
  const auto first = gptcast::run_scenario(sweep, o);
  gptcast::RunOptions threaded = o;
  threaded.jobs = 3;
  l.expect(gptcast::dump(first.report) == gptcast::dump(gptcast::run_scenario(sweep, threaded).report),
           "sweep differs with 3 threads");
  l.expect(gptcast::dump(first.report) == gptcast::dump(gptcast::run_scenario(sweep, o).report), "sweep differs on rerun");
  // a replayed trial gives the same report each time
  const auto trial = gptcast::run_trial(gptcast::build_space(sweep), sweep.seed, 5, 0, o.tolerance);
  const auto replay = gptcast::replay_scenario(sweep, trial);
  l.expect(gptcast::dump(gptcast::run_scenario(replay, o).report) == gptcast::dump(gptcast::run_scenario(replay, o).report),
           "replayed trial differs");
  return l.outcome(std::to_string(gptcast::demos().size()) +
                   " demos, a 12-trial sweep (1 and 3 threads) and a replayed trial: byte-identical reports");
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"classical universal broadcasting", classical_universal},
      {"nonclassical spaces refuse universal broadcasting", nonclassical_universal},
      {"cloneable iff jointly distinguishable", clone_equivalence},
      {"broadcastable iff inside a simplex of distinguishable states", broadcast_equivalence},
      {"exact compression onto the fixed set", compression_lemma},
      {"min/max tensor sandwich and structure", sandwich},
      {"pure marginal forces a product state", pure_marginals},
      {"broadcast verdict independent of the composite", tensor_invariance},
      {"determinism of reports", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s %zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
