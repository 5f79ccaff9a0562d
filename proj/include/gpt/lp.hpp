#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gpt/linalg.hpp"

namespace gpt {

/// One constraint row `coeffs · x (<= | =) bound`.
struct LpRow {
  Vec coeffs;
  Scalar bound;
  std::string label;
};

/// Feasibility (or maximization) problem over free real variables.
/// Sign restrictions are ordinary inequality rows.
class LpSystem {
 public:
  explicit LpSystem(std::size_t variables) : variables_(variables) {}

  std::size_t variables() const { return variables_; }

  void add_inequality(Vec coeffs, Scalar bound, std::string label = {});
  void add_equality(Vec coeffs, Scalar bound, std::string label = {});
  /// x[var] >= 0
  void add_nonnegative(std::size_t var, std::string label = {});
  void set_objective(Vec maximize);

  const std::vector<LpRow>& inequalities() const { return inequalities_; }
  const std::vector<LpRow>& equalities() const { return equalities_; }
  const std::optional<Vec>& objective() const { return objective_; }

 private:
  void check_width(const Vec& coeffs) const;

  std::size_t variables_;
  std::vector<LpRow> inequalities_;
  std::vector<LpRow> equalities_;
  std::optional<Vec> objective_;
};

/// Proof that an LpSystem is empty: nonnegative multipliers on the
/// inequalities and free multipliers on the equalities whose combination
/// has zero coefficients and a negative right-hand side (0 <= negative).
struct FarkasCertificate {
  Vec inequality_multipliers;
  Vec equality_multipliers;
};

struct LpResult {
  std::optional<Vec> witness;
  std::optional<FarkasCertificate> certificate;
  /// Set only by lp_optimize when the objective is unbounded above.
  bool unbounded = false;
  /// Objective at the witness (lp_optimize only).
  Scalar objective_value = 0;

  bool feasible() const { return witness.has_value(); }
};

/// Decides feasibility exactly. Exactly one of witness / certificate is set,
/// and both are re-verified by substitution before returning.
LpResult lp_feasible(const LpSystem& sys);

/// Maximizes the system's objective. Infeasible systems return a certificate;
/// an unbounded objective returns a feasible witness with `unbounded` set.
LpResult lp_optimize(const LpSystem& sys);

bool verify_witness(const LpSystem& sys, const Vec& x);
bool verify_certificate(const LpSystem& sys, const FarkasCertificate& cert);

struct StandardResult {
  std::optional<Vec> solution;
  /// When infeasible: y with y^T a >= 0 entrywise and y . b < 0.
  std::optional<Vec> farkas;
  bool unbounded = false;
};

/// max c . w subject to a w = b, w >= 0 (c may be empty for pure
/// feasibility). Uses a tableau with one row per equation, which stays small
/// when there are many sign-constrained columns and few equations, as in
/// convex-hull membership. Results are verified by substitution.
StandardResult lp_standard(const Matrix& a, const Vec& b, const Vec& c = {});

}  // namespace gpt
