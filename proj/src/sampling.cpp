#include "gpt/sampling.hpp"

#include <algorithm>
#include <stdexcept>

namespace gpt {

std::size_t draw_index(Rng& rng, std::size_t n) {
  if (n == 0) throw std::invalid_argument("draw_index: empty range");
  return static_cast<std::size_t>(rng() % n);
}

Vec random_weights(Rng& rng, std::size_t k) {
  Vec w(k);
  Scalar total = 0;
  while (total == 0) {
    total = 0;
    for (auto& x : w) {
      x = static_cast<long>(draw_index(rng, 6));
      total += x;
    }
  }
  for (auto& x : w) x /= total;
  return w;
}

Vec random_mixture(const std::vector<Vec>& points, Rng& rng) {
  const Vec w = random_weights(rng, points.size());
  Vec out = zeros(points.front().size());
  for (std::size_t i = 0; i < points.size(); ++i) out = add(out, scale(points[i], w[i]));
  return out;
}

Vec random_state(const StateSpace& s, Rng& rng) {
  const auto& verts = s.vertices();
  switch (draw_index(rng, 10)) {
    case 0:
    case 1:
    case 2:
      return verts[draw_index(rng, verts.size())];
    case 3:
    case 4:
    case 5: {
      const Vec& a = verts[draw_index(rng, verts.size())];
      const Vec& b = verts[draw_index(rng, verts.size())];
      const Scalar t = ratio(static_cast<long>(1 + draw_index(rng, 7)), 8);
      return add(scale(a, t), scale(b, 1 - t));
    }
    default:
      return random_mixture(verts, rng);
  }
}

std::vector<Vec> random_states(const StateSpace& s, std::size_t count, Rng& rng) {
  std::vector<Vec> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(random_state(s, rng));
  return out;
}

std::vector<Matrix> symmetries(const StateSpace& s) {
  const auto& verts = s.vertices();
  const std::size_t d = s.dim();
  // A basis among the vertices; a symmetry is fixed by where it sends them.
  std::vector<std::size_t> basis;
  for (std::size_t i = 0; i < verts.size() && basis.size() < d; ++i) {
    std::vector<Vec> trial;
    for (std::size_t j : basis) trial.push_back(verts[j]);
    trial.push_back(verts[i]);
    if (rank(Matrix::from_rows(trial, d)) == trial.size()) basis.push_back(i);
  }
  std::vector<Vec> src;
  for (std::size_t j : basis) src.push_back(verts[j]);
  const Matrix src_inv = *inverse(Matrix::from_columns(src, d));

  std::vector<Matrix> out;
  std::vector<std::size_t> image(d);
  std::vector<bool> used(verts.size(), false);
  auto recurse = [&](auto&& self, std::size_t depth) -> void {
    if (depth == d) {
      std::vector<Vec> dst;
      for (std::size_t j : image) dst.push_back(verts[j]);
      Matrix m = Matrix::from_columns(dst, d) * src_inv;
      std::vector<Vec> mapped;
      for (const auto& v : verts) mapped.push_back(m * v);
      sort_unique(mapped);
      if (mapped == verts) out.push_back(std::move(m));
      return;
    }
    for (std::size_t j = 0; j < verts.size(); ++j) {
      if (used[j]) continue;
      used[j] = true;
      image[depth] = j;
      self(self, depth + 1);
      used[j] = false;
    }
  };
  recurse(recurse, 0);
  return out;
}

namespace {

Matrix measure_and_prepare(const std::vector<Vec>& effects, const std::vector<Vec>& states) {
  Matrix m(states.front().size(), effects.front().size());
  for (std::size_t j = 0; j < effects.size(); ++j) m = m + Matrix::outer(states[j], effects[j]);
  return m;
}

}  // namespace

AffineChannel random_endochannel(SpacePtr s, Rng& rng) {
  const auto syms = symmetries(*s);
  const auto& effects = s->extreme_effects();
  const std::size_t d = s->dim();
  auto component = [&]() -> Matrix {
    switch (draw_index(rng, is_classical(*s) ? 4 : 3)) {
      case 0:
        return syms[draw_index(rng, syms.size())];
      case 1: {
        const Vec& e = effects[draw_index(rng, effects.size())];
        return measure_and_prepare({e, sub(s->unit(), e)}, {random_state(*s, rng), random_state(*s, rng)});
      }
      case 2:
        return Matrix::outer(random_state(*s, rng), s->unit());
      default: {
        // Classical: read out the vertex label, then prepare anything.
        const Matrix dual = *inverse(Matrix::from_columns(s->vertices(), d));
        std::vector<Vec> rows, prepared;
        for (std::size_t i = 0; i < d; ++i) {
          rows.push_back(dual.row(i));
          prepared.push_back(random_state(*s, rng));
        }
        return measure_and_prepare(rows, prepared);
      }
    }
  };
  if (draw_index(rng, 5) == 0) return {syms[draw_index(rng, syms.size())], s, s};
  const std::size_t count = 1 + draw_index(rng, 3);
  const Vec w = random_weights(rng, count);
  Matrix m(d, d);
  for (std::size_t i = 0; i < count; ++i) {
    const Matrix c = component();
    m = m + w[i] * c;
  }
  return {std::move(m), s, s};
}

}  // namespace gpt
