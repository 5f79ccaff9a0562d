#include "doctest.h"
#include "printing.hpp"

#include <algorithm>

#include "gpt/state_space.hpp"
#include "oracles.hpp"

using namespace gpt;

namespace {

bool contains_vec(const std::vector<Vec>& set, const Vec& v) { return std::find(set.begin(), set.end(), v) != set.end(); }

HRep effect_constraints(const StateSpace& s) {
  HRep h;
  h.dim = s.dim();
  for (const auto& v : s.vertices()) {
    h.inequalities.push_back({scale(v, -1), 0});
    h.inequalities.push_back({v, 1});
  }
  return h;
}

}  // namespace

TEST_CASE("make_classical") {
  const auto bit = make_classical(2);
  CHECK(bit->vertices() == std::vector<Vec>{{0, 1}, {1, 0}});
  CHECK(bit->unit() == Vec{1, 1});
  CHECK(bit->dim() == 2);

  const auto one = make_classical(1);
  CHECK(one->vertices() == std::vector<Vec>{{1}});

  const auto four = make_classical(4);
  CHECK(four->vertices().size() == 4);
  CHECK(is_classical(*four));

  CHECK_THROWS_AS(make_classical(0), std::invalid_argument);
}

TEST_CASE("make_square_gbit") {
  const auto sq = make_square_gbit();
  CHECK(sq->dim() == 3);
  CHECK(sq->vertices().size() == 4);
  for (const auto& v : sq->vertices()) CHECK(dot(sq->unit(), v) == 1);
  CHECK_FALSE(is_classical(*sq));
}

TEST_CASE("square gbit effects match the brute-force enumeration") {
  const auto sq = make_square_gbit();
  const Vec u{0, 0, 1};
  const Vec half{Scalar(1, 2), 0, Scalar(1, 2)};
  const std::vector<Vec> expected_list{zeros(3), u, {Scalar(1, 2), 0, Scalar(1, 2)}, {Scalar(-1, 2), 0, Scalar(1, 2)},
                                       {0, Scalar(1, 2), Scalar(1, 2)}, {0, Scalar(-1, 2), Scalar(1, 2)}};
  auto expected = expected_list;
  sort_unique(expected);
  CHECK(effect_polytope_vertices(*sq) == expected);
  CHECK(oracle::vertices_by_bases(effect_constraints(*sq)) == expected);
}

TEST_CASE("classical effect polytopes are cubes") {
  const auto bit = make_classical(2);
  auto expected = std::vector<Vec>{{0, 0}, {1, 1}, {1, 0}, {0, 1}};
  sort_unique(expected);
  CHECK(effect_polytope_vertices(*bit) == expected);
  CHECK(oracle::vertices_by_bases(effect_constraints(*bit)) == expected);

  const auto trit = make_classical(3);
  const auto effects = effect_polytope_vertices(*trit);
  CHECK(effects.size() == 8);
  CHECK(effects == oracle::vertices_by_bases(effect_constraints(*trit)));
}

TEST_CASE("make_polygon") {
  CHECK_THROWS_AS(make_polygon(2), std::invalid_argument);
  CHECK(is_classical(*make_polygon(3)));
  CHECK_FALSE(is_classical(*make_polygon(5)));
  CHECK_FALSE(is_classical(*make_polygon(7)));
  for (std::size_t n = 3; n <= 9; ++n) {
    const auto p = make_polygon(n);
    CHECK(p->vertices().size() == n);
    for (const auto& v : p->vertices()) CHECK(v[0] * v[0] + v[1] * v[1] == 1);
  }
}

TEST_CASE("polygon(4) is affinely equivalent to the square gbit") {
  const auto poly = make_polygon(4);
  const auto sq = make_square_gbit();
  const auto& p = poly->vertices();
  auto targets = sq->vertices();
  std::sort(targets.begin(), targets.end(), lex_less);
  bool found = false;
  do {
    // Linear map fixed by three vertices, checked on the fourth.
    const Matrix src = Matrix::from_columns({p[0], p[1], p[2]}, 3);
    const Matrix dst = Matrix::from_columns({targets[0], targets[1], targets[2]}, 3);
    const auto inv = inverse(src);
    if (!inv) continue;
    const Matrix map = dst * *inv;
    if (map * p[3] == targets[3] && inverse(map)) {
      found = true;
      CHECK(covector_times(sq->unit(), map) == poly->unit());
      break;
    }
  } while (std::next_permutation(targets.begin(), targets.end(), lex_less));
  CHECK(found);
}

TEST_CASE("is_classical over builtin families") {
  for (std::size_t n = 1; n <= 8; ++n) CHECK(is_classical(*make_classical(n)));
  for (std::size_t n = 3; n <= 8; ++n) CHECK(is_classical(*make_polygon(n)) == (n == 3));
}

TEST_CASE("effect polytope invariants for builtin spaces") {
  for (const auto& s : {make_classical(2), make_classical(3), make_square_gbit(), make_polygon(5), make_polygon(6)}) {
    const auto& effects = s->extreme_effects();
    CHECK(contains_vec(effects, zeros(s->dim())));
    CHECK(contains_vec(effects, s->unit()));
    for (const auto& e : effects) {
      bool extremal_value = false;
      for (const auto& v : s->vertices()) {
        const Scalar p = dot(e, v);
        CHECK(sgn(p) >= 0);
        CHECK(p <= 1);
        extremal_value = extremal_value || p == 0 || p == 1;
      }
      CHECK(extremal_value);
      CHECK(contains_vec(effects, sub(s->unit(), e)));
    }
  }
}

TEST_CASE("validate_measurement") {
  const auto bit = make_classical(2);
  CHECK(validate_measurement(*bit, {{{1, 0}, {0, 1}}, {}}).ok());
  CHECK(validate_measurement(*bit, {{{1, 1}}, {}}).ok());
  const auto bad = validate_measurement(*bit, {{{1, 0}, {1, 0}}, {}});
  REQUIRE_FALSE(bad.ok());
  CHECK(bad.violations.back().message.find("sum") != std::string::npos);

  const auto sq = make_square_gbit();
  const auto neg = validate_measurement(*sq, {{{1, 0, 0}, {-1, 0, 1}}, {}});
  REQUIRE_FALSE(neg.ok());
  REQUIRE(neg.violations[0].outcome);
  CHECK(*neg.violations[0].outcome == 0);
  CHECK(neg.violations[0].vertex.has_value());
}

TEST_CASE("custom spaces are validated on construction") {
  CHECK_THROWS_AS(make_custom_space("bad", Polytope::from_vertices(2, {{1, 0}, {0, 2}}), Vec{1, 1}),
                  std::invalid_argument);
  CHECK_THROWS_AS(make_custom_space("flat", Polytope::from_vertices(3, {{1, 0, 1}, {0, 1, 1}}), Vec{0, 0, 1}),
                  std::invalid_argument);
  const auto ok = make_custom_space("seg", Polytope::from_vertices(2, {{1, 0}, {1, 1}}), Vec{1, 0});
  CHECK(ok->vertices().size() == 2);
}
