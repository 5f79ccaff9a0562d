#include "gpt/state_space.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace gpt {

StateSpace::StateSpace(std::string name, Polytope omega, Vec unit)
    : name_(std::move(name)), omega_(std::move(omega)), unit_(std::move(unit)) {
  if (unit_.size() != omega_.dim()) throw std::invalid_argument(name_ + ": unit covector has wrong length");
  if (omega_.is_empty()) throw std::invalid_argument(name_ + ": state space is empty");
  for (std::size_t i = 0; i < vertices().size(); ++i) {
    if (dot(unit_, vertices()[i]) != 1) {
      throw std::invalid_argument(name_ + ": unit does not evaluate to 1 on vertex " + to_string(vertices()[i]));
    }
  }
  if (rank(Matrix::from_rows(vertices(), dim())) != dim()) {
    throw std::invalid_argument(name_ + ": vertices do not span the ambient space");
  }
}

StateSpace::StateSpace(Trusted, std::string name, Polytope omega, Vec unit)
    : name_(std::move(name)), omega_(std::move(omega)), unit_(std::move(unit)) {}

const std::vector<Vec>& StateSpace::extreme_effects() const {
  std::call_once(effects_once_, [this] {
    HRep h;
    h.dim = dim();
    for (const auto& v : vertices()) {
      h.inequalities.push_back({scale(v, -1), 0});
      h.inequalities.push_back({v, 1});
    }
    effects_ = halfspaces_to_vertices(h);
  });
  return effects_;
}

Vec StateSpace::centroid() const {
  Vec c = zeros(dim());
  for (const auto& v : vertices()) c = add(c, v);
  return scale(c, ratio(1, static_cast<long>(vertices().size())));
}

SpacePtr make_classical(std::size_t n) {
  if (n == 0) throw std::invalid_argument("make_classical: need at least one outcome");
  std::vector<Vec> verts;
  for (std::size_t i = 0; i < n; ++i) verts.push_back(unit_vector(n, i));
  return std::make_shared<StateSpace>("classical(" + std::to_string(n) + ")",
                                      Polytope::from_extreme_points(n, std::move(verts)), Vec(n, Scalar(1)));
}

SpacePtr make_square_gbit() {
  std::vector<Vec> verts{{1, 1, 1}, {1, -1, 1}, {-1, 1, 1}, {-1, -1, 1}};
  return std::make_shared<StateSpace>("square", Polytope::from_extreme_points(3, std::move(verts)), Vec{0, 0, 1});
}

Scalar rational_approximation(double x, long max_den) {
  // Convergents h/k of the continued fraction of x.
  mpz_class h_prev = 1, h = static_cast<long>(std::floor(x));
  mpz_class k_prev = 0, k = 1;
  double frac = x - std::floor(x);
  for (int iter = 0; iter < 64 && frac > 1e-12; ++iter) {
    const double inv = 1.0 / frac;
    const long a = static_cast<long>(std::floor(inv));
    frac = inv - static_cast<double>(a);
    mpz_class h_next = a * h + h_prev;
    mpz_class k_next = a * k + k_prev;
    if (k_next > max_den) break;
    h_prev = h;
    h = h_next;
    k_prev = k;
    k = k_next;
  }
  Scalar q(h, k);
  q.canonicalize();
  return q;
}

SpacePtr make_polygon(std::size_t n) {
  if (n < 3) throw std::invalid_argument("make_polygon: need at least 3 vertices");
  std::vector<Vec> verts;
  for (std::size_t k = 0; k < n; ++k) {
    if (2 * k == n) {
      verts.push_back({-1, 0, 1});
      continue;
    }
    const double half_angle = std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
    const Scalar t = rational_approximation(std::tan(half_angle), 100);
    const Scalar den = 1 + t * t;
    verts.push_back({(1 - t * t) / den, 2 * t / den, 1});
  }
  return std::make_shared<StateSpace>("polygon(" + std::to_string(n) + ")",
                                      Polytope::from_extreme_points(3, std::move(verts)), Vec{0, 0, 1});
}

SpacePtr make_custom_space(std::string name, Polytope omega, Vec unit) {
  return std::make_shared<StateSpace>(std::move(name), std::move(omega), std::move(unit));
}

bool is_classical(const StateSpace& s) { return s.vertices().size() == s.dim(); }

std::vector<Vec> effect_polytope_vertices(const StateSpace& s) { return s.extreme_effects(); }

Validation validate_measurement(const StateSpace& s, const Measurement& m) {
  Validation out;
  Vec total = zeros(s.dim());
  for (std::size_t j = 0; j < m.effects.size(); ++j) {
    const Vec& e = m.effects[j];
    if (e.size() != s.dim()) {
      out.violations.push_back({"outcome " + std::to_string(j) + " has wrong length", j, std::nullopt});
      continue;
    }
    total = add(total, e);
    for (std::size_t i = 0; i < s.vertices().size(); ++i) {
      const Scalar p = dot(e, s.vertices()[i]);
      if (sgn(p) < 0 || p > 1) {
        out.violations.push_back({"outcome " + std::to_string(j) + " evaluates to " + p.get_str() + " on vertex " +
                                      std::to_string(i),
                                  j, i});
      }
    }
  }
  if (total != s.unit()) {
    out.violations.push_back({"outcomes sum to " + to_string(total) + " instead of the unit " + to_string(s.unit()),
                              std::nullopt, std::nullopt});
  }
  return out;
}

}  // namespace gpt
