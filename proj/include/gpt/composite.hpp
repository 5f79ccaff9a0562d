#pragma once

#include <memory>

#include "gpt/state_space.hpp"

namespace gpt {

enum class TensorVariant { min, max, custom };

std::string to_string(TensorVariant v);

/// A joint state space for systems A and B, living in V(A) (x) V(B) with
/// coordinates ordered (i, j) -> i * dim(B) + j.
class CompositeSpace : public StateSpace {
 public:
  const SpacePtr& factor_a() const { return a_; }
  const SpacePtr& factor_b() const { return b_; }
  TensorVariant variant() const { return variant_; }

  /// Contraction with u_B (marginal on A) / u_A (marginal on B).
  const Matrix& marginal_a_map() const { return marginal_a_; }
  const Matrix& marginal_b_map() const { return marginal_b_; }

  Vec marginal_a(const Vec& joint) const;
  Vec marginal_b(const Vec& joint) const;

  /// Coordinate transposition v (x) w -> w (x) v. Requires identical factors.
  Matrix swap_matrix() const;
  /// Both factors are the same space (same unit and vertex list).
  bool symmetric_factors() const;

 private:
  friend std::shared_ptr<const CompositeSpace> make_composite(SpacePtr, SpacePtr, TensorVariant, Polytope);
  CompositeSpace(SpacePtr a, SpacePtr b, TensorVariant variant, Polytope joint);

  SpacePtr a_;
  SpacePtr b_;
  TensorVariant variant_;
  Matrix marginal_a_;
  Matrix marginal_b_;
};

using CompositePtr = std::shared_ptr<const CompositeSpace>;

/// Convex hull of the products of vertices.
CompositePtr min_tensor(SpacePtr a, SpacePtr b);

/// All joint vectors that are nonnegative on every product of extreme
/// effects and normalised on u_A (x) u_B.
CompositePtr max_tensor(SpacePtr a, SpacePtr b);

/// The defining constraint system of max_tensor: one inequality per pair of
/// extreme effects (zero effects included) plus the normalisation equality.
HRep max_tensor_constraints(const StateSpace& a, const StateSpace& b);

/// An explicit joint H-polytope; throws std::invalid_argument unless
/// min_tensor(a, b) <= joint <= max_tensor(a, b).
CompositePtr custom_tensor(SpacePtr a, SpacePtr b, HRep joint);

/// min_tensor or max_tensor, shared with any other live composite of the same factors.
CompositePtr make_tensor(SpacePtr a, SpacePtr b, TensorVariant variant);

inline Vec product_state(const Vec& wa, const Vec& wb) { return kron(wa, wb); }

/// Product state with validation of the factors' membership.
Vec product_state(const StateSpace& a, const Vec& wa, const StateSpace& b, const Vec& wb);

}  // namespace gpt
