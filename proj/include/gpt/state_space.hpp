#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "gpt/polytope.hpp"

namespace gpt {

/// A problem found while validating a measurement or channel. Indices point
/// at the offending outcome / vertex when there is one.
struct Violation {
  std::string message;
  std::optional<std::size_t> outcome;
  std::optional<std::size_t> vertex;
};

struct Validation {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

/// A polytopic state space Omega sitting in the hyperplane u(x) = 1 of its
/// span V(Omega) = R^dim. Effects and the unit are covectors on R^dim.
class StateSpace {
 public:
  /// Checks u(v) = 1 on every vertex and that the vertices span R^dim;
  /// throws std::invalid_argument otherwise.
  StateSpace(std::string name, Polytope omega, Vec unit);
  virtual ~StateSpace() = default;

  StateSpace(const StateSpace&) = delete;
  StateSpace& operator=(const StateSpace&) = delete;

  const std::string& name() const { return name_; }
  std::size_t dim() const { return omega_.dim(); }
  const Vec& unit() const { return unit_; }
  const Polytope& omega() const { return omega_; }
  const std::vector<Vec>& vertices() const { return omega_.vertices(); }

  bool contains(const Vec& x) const { return omega_.contains(x); }
  Membership member(const Vec& x) const { return omega_.member(x); }

  /// Vertices of the effect polytope {a : 0 <= a(w) <= 1 on Omega}, cached.
  const std::vector<Vec>& extreme_effects() const;

  /// Uniform mixture of the vertices.
  Vec centroid() const;

 protected:
  struct Trusted {};
  /// For composites whose normalization holds by construction.
  StateSpace(Trusted, std::string name, Polytope omega, Vec unit);

 private:
  std::string name_;
  Polytope omega_;
  Vec unit_;
  mutable std::once_flag effects_once_;
  mutable std::vector<Vec> effects_;
};

using SpacePtr = std::shared_ptr<const StateSpace>;

/// Probability simplex on n outcomes: vertices e_i, unit = all ones.
SpacePtr make_classical(std::size_t n);

/// The gbit: vertices (+-1, +-1, 1), unit (0, 0, 1).
SpacePtr make_square_gbit();

/// Rational n-gon inscribed in the unit circle at height 1.
///
/// Vertex k sits at angle 2 pi k / n. Its exact coordinates come from the
/// rational circle parametrisation ((1 - t^2) / (1 + t^2), 2t / (1 + t^2))
/// with t the best rational approximation to tan(pi k / n) with denominator
/// at most 100 (the antipode of vertex 0 is (-1, 0) exactly). Every vertex
/// lies exactly on the unit circle, so the points are in convex position and
/// the polygon is the model under test, not an approximation of one.
SpacePtr make_polygon(std::size_t n);

/// Best rational approximation of x with denominator <= max_den (continued fractions).
Scalar rational_approximation(double x, long max_den);

SpacePtr make_custom_space(std::string name, Polytope omega, Vec unit);

/// Omega is a simplex: the vertices are linearly independent in V(Omega).
bool is_classical(const StateSpace& s);

std::vector<Vec> effect_polytope_vertices(const StateSpace& s);

struct Measurement {
  std::vector<Vec> effects;
  std::vector<std::string> labels;
};

/// Checks 0 <= e(v) <= 1 for every outcome and vertex, and that the outcomes sum to u.
Validation validate_measurement(const StateSpace& s, const Measurement& m);

}  // namespace gpt
