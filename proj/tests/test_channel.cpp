#include "doctest.h"
#include "printing.hpp"

#include "gpt/channel.hpp"
#include "gpt/sampling.hpp"

using namespace gpt;

namespace {

// (x, y, 1) -> (0, y, 1): the average of the identity and the X reflection.
AffineChannel reflection_average(const SpacePtr& sq) {
  Matrix reflect = Matrix::identity(3);
  reflect(0, 0) = -1;
  return {ratio(1, 2) * (Matrix::identity(3) + reflect), sq, sq};
}

Matrix column(const Vec& v) { return Matrix::from_columns({v}, v.size()); }

// x -> (P x) (x) s, x -> s (x) (P x), and measure-and-prepare into joint states.
AffineChannel random_channel_into(const CompositePtr& joint, Rng& rng) {
  const SpacePtr& s = joint->factor_a();
  const std::size_t d = s->dim();
  Matrix m(d * d, d);
  const Vec w = random_weights(rng, 3);
  const AffineChannel p = random_endochannel(s, rng);
  m = m + w[0] * kron(p.matrix, column(random_state(*s, rng)));
  m = m + w[1] * kron(column(random_state(*s, rng)), p.matrix);
  const auto& effects = s->extreme_effects();
  const Vec e = effects[draw_index(rng, effects.size())];
  m = m + w[2] * (Matrix::outer(random_state(*joint, rng), e) +
                  Matrix::outer(random_state(*joint, rng), sub(s->unit(), e)));
  return {std::move(m), s, joint};
}

}  // namespace

TEST_CASE("validate_channel") {
  const auto sq = make_square_gbit();
  CHECK(validate_channel(identity_channel(sq)).ok());
  const Vec c = sq->centroid();
  const auto constant = constant_channel(sq, sq, c);
  CHECK(validate_channel(constant).ok());
  for (const auto& v : sq->vertices()) CHECK(constant(v) == c);

  Matrix stretch = Matrix::identity(3);
  stretch(0, 0) = 2;
  const auto bad = validate_channel({stretch, sq, sq});
  REQUIRE_FALSE(bad.ok());
  CHECK(bad.violations.size() == 4);
  CHECK(bad.violations[0].vertex == std::optional<std::size_t>(0));
  CHECK(bad.violations[0].message.find("outside") != std::string::npos);

  Matrix heavy = Matrix::identity(3);
  heavy(2, 2) = 2;
  const auto unit = validate_channel({heavy, sq, sq});
  REQUIRE_FALSE(unit.ok());
  CHECK(unit.violations[0].message.find("unit") != std::string::npos);

  CHECK_FALSE(validate_channel({Matrix::identity(2), sq, sq}).ok());
}

TEST_CASE("validation records membership certificates") {
  const auto sq = make_square_gbit();
  const auto v = validate_channel(reflection_average(sq));
  REQUIRE(v.ok());
  REQUIRE(v.images.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) {
    Vec recombined = zeros(3);
    for (std::size_t k = 0; k < 4; ++k) recombined = add(recombined, scale(sq->vertices()[k], v.images[i].weights[k]));
    CHECK(recombined == reflection_average(sq)(sq->vertices()[i]));
  }
}

TEST_CASE("compose and tensor_pair") {
  const auto sq = make_square_gbit();
  Rng rng(7);
  const auto c = random_endochannel(sq, rng);
  CHECK(compose(identity_channel(sq), c).matrix == c.matrix);
  CHECK(compose(c, identity_channel(sq)).matrix == c.matrix);
  CHECK_THROWS_AS(compose(identity_channel(make_classical(3)), c), std::invalid_argument);

  for (int trial = 0; trial < 10; ++trial) {
    const auto p = random_endochannel(sq, rng);
    const auto q = random_endochannel(sq, rng);
    const auto pq = tensor_pair(p, q);
    for (const auto& v : sq->vertices()) {
      for (const auto& w : sq->vertices()) CHECK(pq(kron(v, w)) == kron(p(v), q(w)));
    }
    CHECK(validate_channel(pq).ok());
    CHECK(validate_channel(tensor_pair(p, q, TensorVariant::min)).ok());
    CHECK(validate_channel(compose(q, p)).ok());
  }
}

TEST_CASE("symmetrize and marginal channels") {
  const auto sq = make_square_gbit();
  const auto joint = make_tensor(sq, sq, TensorVariant::max);
  const Vec w0 = sq->vertices()[2];

  // x -> x (x) w0
  const AffineChannel append{kron(Matrix::identity(3), column(w0)), sq, joint};
  CHECK(validate_channel(append).ok());
  CHECK(marginal_channel_a(append).matrix == Matrix::identity(3));
  const auto sym = symmetrize(append);
  CHECK(validate_channel(sym).ok());
  const Vec out = sym(w0);
  CHECK(joint->marginal_a(out) == w0);
  CHECK(joint->marginal_b(out) == w0);

  // Measure-and-prepare doubles are swap invariant.
  const Vec v1 = sq->vertices()[0], v2 = sq->vertices()[3];
  const Vec e{ratio(1, 2), 0, ratio(1, 2)};
  const AffineChannel mp{Matrix::outer(kron(v2, v2), e) + Matrix::outer(kron(v1, v1), sub(sq->unit(), e)), sq, joint};
  CHECK(symmetrize(mp).matrix == mp.matrix);

  CHECK_THROWS_AS(symmetrize(identity_channel(sq)), std::invalid_argument);
  const auto mixed = make_tensor(make_classical(2), sq, TensorVariant::max);
  CHECK_THROWS_AS(symmetrize({Matrix(6, 3), sq, mixed}), std::invalid_argument);
}

TEST_CASE("classical copier has identity marginals") {
  const auto bit = make_classical(2);
  const auto joint = make_tensor(bit, bit, TensorVariant::min);
  Matrix copy(4, 2);
  copy(0, 0) = 1;
  copy(3, 1) = 1;
  const AffineChannel copier{copy, bit, joint};
  CHECK(validate_channel(copier).ok());
  CHECK(marginal_channel_a(copier).matrix == Matrix::identity(2));
  CHECK(marginal_channel_b(copier).matrix == Matrix::identity(2));
}

TEST_CASE("fixed sets") {
  const auto sq = make_square_gbit();
  CHECK(fixed_set(identity_channel(sq)).same_set(sq->omega()));
  const Vec w0{ratio(1, 3), ratio(-1, 2), 1};
  CHECK(fixed_set(constant_channel(sq, sq, w0)).vertices() == std::vector<Vec>{w0});
  CHECK(fixed_set(reflection_average(sq)).vertices() == std::vector<Vec>{{0, -1, 1}, {0, 1, 1}});
}

TEST_CASE("exact compression on hand-checked maps") {
  const auto sq = make_square_gbit();
  CHECK(compression(identity_channel(sq)).channel.matrix == Matrix::identity(3));
  const Vec w0{ratio(1, 3), ratio(-1, 2), 1};
  const auto constant = constant_channel(sq, sq, w0);
  CHECK(compression(constant).channel.matrix == constant.matrix);

  Matrix expected(3, 3);
  expected(1, 1) = 1;
  expected(2, 2) = 1;
  CHECK(compression(reflection_average(sq)).channel.matrix == expected);

  // Quarter turn: only the centroid survives the averaging.
  Matrix turn(3, 3);
  turn(0, 1) = -1;
  turn(1, 0) = 1;
  turn(2, 2) = 1;
  const AffineChannel rotation{turn, sq, sq};
  CHECK(compression(rotation).channel.matrix == Matrix::outer(sq->centroid(), sq->unit()));
  const auto approx = cesaro_compression(rotation);
  CHECK(approx.converged);
  CHECK(max_abs_difference(approx.matrix, compression(rotation).channel.matrix) < 1e-12);

  CHECK_THROWS_AS(compression({Matrix(3, 3), sq, sq}), CompressionError);
  Matrix nilpotent = Matrix::identity(2);
  nilpotent(0, 1) = 1;
  CHECK_THROWS_AS(compression({nilpotent, make_classical(2), make_classical(2)}), CompressionError);
}

TEST_CASE("lifting effects from the fixed set") {
  const auto sq = make_square_gbit();
  const auto t = reflection_average(sq);
  const auto p = compression(t);
  const auto gamma = fixed_set(t);
  const auto gspace = fixed_space(p, gamma);
  REQUIRE(gspace->dim() == 2);
  CHECK(lift_effect(p, gamma, gspace->unit()) == sq->unit());
  CHECK(lift_effect(p, gamma, zeros(2)) == zeros(3));

  // Distinguish the two endpoints inside the fixed set, then lift.
  const auto& g = gspace->vertices();
  const Matrix at_vertices = Matrix::from_rows(g, 2);
  const Vec e0 = *solve(at_vertices, Vec{1, 0});
  const Vec e1 = *solve(at_vertices, Vec{0, 1});
  const Measurement lifted{{lift_effect(p, gamma, e0), lift_effect(p, gamma, e1)}, {}};
  CHECK(validate_measurement(*sq, lifted).ok());
  CHECK(dot(lifted.effects[0], gamma.vertices()[0]) == 1);
  CHECK(dot(lifted.effects[1], gamma.vertices()[1]) == 1);
  CHECK_THROWS_AS(lift_effect(p, gamma, scale(e0, 2)), std::invalid_argument);
}

TEST_CASE("symmetries of builtin spaces") {
  CHECK(symmetries(*make_square_gbit()).size() == 8);
  CHECK(symmetries(*make_classical(4)).size() == 24);
  CHECK(symmetries(*make_polygon(3)).size() == 6);
}

TEST_CASE("compression properties on random endochannels") {
  Rng rng(2024);
  for (const auto& s : {make_square_gbit(), make_classical(4)}) {
    for (int trial = 0; trial < 50; ++trial) {
      const auto t = random_endochannel(s, rng);
      REQUIRE(validate_channel(t).ok());
      const auto p = compression(t);
      const Matrix& pm = p.channel.matrix;
      CHECK(pm * pm == pm);
      CHECK(pm * t.matrix == pm);
      CHECK(t.matrix * pm == pm);
      CHECK(validate_channel(p.channel).ok());

      std::vector<Vec> range;
      for (const auto& v : s->vertices()) range.push_back(pm * v);
      const auto gamma = fixed_set(t);
      CHECK(Polytope::from_vertices(s->dim(), range).same_set(gamma));

      const auto approx = cesaro_compression(t);
      CHECK(approx.converged);
      CHECK(approx.iterations <= 1000000);
      CHECK(max_abs_difference(approx.matrix, pm) < 1e-9);
    }
  }
}

TEST_CASE("validity and symmetrization properties on random channels into composites") {
  Rng rng(99);
  const auto sq = make_square_gbit();
  for (const auto variant : {TensorVariant::min, TensorVariant::max}) {
    const auto joint = make_tensor(sq, sq, variant);
    for (int trial = 0; trial < 15; ++trial) {
      const auto b = random_channel_into(joint, rng);
      REQUIRE(validate_channel(b).ok());
      const auto sym = symmetrize(b);
      CHECK(validate_channel(sym).ok());
      CHECK(symmetrize(sym).matrix == sym.matrix);
      CHECK(joint->swap_matrix() * sym.matrix == sym.matrix);
      CHECK(marginal_channel_a(sym).matrix == marginal_channel_b(sym).matrix);
      CHECK(validate_channel(marginal_channel_a(sym)).ok());
    }
  }
}
