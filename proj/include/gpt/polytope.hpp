#pragma once

#include <memory>
#include <stdexcept>
#include <vector>

#include "gpt/linalg.hpp"
#include "gpt/lp.hpp"

namespace gpt {

/// normal · x <= offset
struct Halfspace {
  Vec normal;
  Scalar offset;
  friend bool operator==(const Halfspace&, const Halfspace&) = default;
};

/// normal · x == offset
struct Hyperplane {
  Vec normal;
  Scalar offset;
  friend bool operator==(const Hyperplane&, const Hyperplane&) = default;
};

struct HRep {
  std::size_t dim = 0;
  std::vector<Halfspace> inequalities;
  std::vector<Hyperplane> equalities;
};

class UnboundedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Extreme rays (primitive integer vectors) of the pointed cone {x : a x <= 0}.
/// Incremental double description; requires rank(a) == a.cols().
std::vector<Vec> extreme_rays(const Matrix& a);

/// Irredundant H-representation of conv(points). Equalities are in reduced
/// row echelon form; inequality normals vanish on the equality pivot columns
/// and are scaled to primitive integers, so the output is canonical.
HRep hull_to_halfspaces(const std::vector<Vec>& points);

/// Extreme points of a bounded H-polytope, sorted lexicographically. Empty
/// result for an infeasible system; throws UnboundedError when the system
/// has a recession direction.
std::vector<Vec> halfspaces_to_vertices(const HRep& h);

struct Membership {
  bool inside = false;
  /// Convex weights over Polytope::vertices() (inside only).
  Vec weights;
  /// Separating functional with separator · x > separator_bound >= max over the polytope (outside only).
  Vec separator;
  Scalar separator_bound;
};

/// Bounded convex polytope with lazily completed dual representations.
/// Copies share one immutable state, so a Polytope is cheap to pass by value
/// and safe to read from several threads.
class Polytope {
 public:
  /// Keeps only the extreme points of `points`.
  static Polytope from_vertices(std::size_t dim, std::vector<Vec> points);
  /// Trusts the caller that `points` are already the distinct extreme points.
  static Polytope from_extreme_points(std::size_t dim, std::vector<Vec> points);
  static Polytope from_halfspaces(HRep h);
  static Polytope empty(std::size_t dim);

  std::size_t dim() const;
  bool is_empty() const;

  /// Extreme points in lexicographic order.
  const std::vector<Vec>& vertices() const;
  /// Canonical irredundant H-representation, computed at most once.
  const HRep& hrep() const;

  std::size_t affine_dimension() const;
  bool is_simplex() const;

  /// Exact containment test (no certificate).
  bool contains(const Vec& x) const;
  Membership member(const Vec& x) const;

  /// Same point set (compares the canonical vertex lists).
  bool same_set(const Polytope& other) const;

 private:
  struct State;
  explicit Polytope(std::shared_ptr<State> s) : state_(std::move(s)) {}
  std::shared_ptr<State> state_;
};

Polytope intersect_with_affine(const Polytope& p, const std::vector<Hyperplane>& equalities);

/// Lexicographic order on vectors of equal length.
bool lex_less(const Vec& a, const Vec& b);
void sort_unique(std::vector<Vec>& v);

}  // namespace gpt
