#include "gpt/lp.hpp"

#include <stdexcept>

namespace gpt {

void LpSystem::check_width(const Vec& coeffs) const {
  if (coeffs.size() != variables_) throw std::invalid_argument("LpSystem: row length does not match variable count");
}

void LpSystem::add_inequality(Vec coeffs, Scalar bound, std::string label) {
  check_width(coeffs);
  inequalities_.push_back({std::move(coeffs), std::move(bound), std::move(label)});
}

void LpSystem::add_equality(Vec coeffs, Scalar bound, std::string label) {
  check_width(coeffs);
  equalities_.push_back({std::move(coeffs), std::move(bound), std::move(label)});
}

void LpSystem::add_nonnegative(std::size_t var, std::string label) {
  Vec row = zeros(variables_);
  row.at(var) = -1;
  add_inequality(std::move(row), 0, std::move(label));
}

void LpSystem::set_objective(Vec maximize) {
  check_width(maximize);
  objective_ = std::move(maximize);
}

bool verify_witness(const LpSystem& sys, const Vec& x) {
  if (x.size() != sys.variables()) return false;
  for (const auto& r : sys.inequalities()) {
    if (dot(r.coeffs, x) > r.bound) return false;
  }
  for (const auto& r : sys.equalities()) {
    if (dot(r.coeffs, x) != r.bound) return false;
  }
  return true;
}

bool verify_certificate(const LpSystem& sys, const FarkasCertificate& cert) {
  if (cert.inequality_multipliers.size() != sys.inequalities().size() ||
      cert.equality_multipliers.size() != sys.equalities().size()) {
    return false;
  }
  Vec combo = zeros(sys.variables());
  Scalar rhs = 0;
  for (std::size_t i = 0; i < sys.inequalities().size(); ++i) {
    const Scalar& y = cert.inequality_multipliers[i];
    if (sgn(y) < 0) return false;
    if (sgn(y) == 0) continue;
    const auto& r = sys.inequalities()[i];
    for (std::size_t j = 0; j < combo.size(); ++j) combo[j] += y * r.coeffs[j];
    rhs += y * r.bound;
  }
  for (std::size_t i = 0; i < sys.equalities().size(); ++i) {
    const Scalar& z = cert.equality_multipliers[i];
    if (sgn(z) == 0) continue;
    const auto& r = sys.equalities()[i];
    for (std::size_t j = 0; j < combo.size(); ++j) combo[j] += z * r.coeffs[j];
    rhs += z * r.bound;
  }
  return is_zero(combo) && sgn(rhs) < 0;
}

namespace {

// Dense simplex tableau over the reduced system G z + s - a = h, where the
// equalities of the original system have been solved as x = x0 + N z.
// Columns: z (free), s (slack >= 0), a (artificial >= 0), then the rhs.
// The artificial column is only populated once phase one starts.
class Tableau {
 public:
  Tableau(const Matrix& g, const Vec& h) : m_(g.rows()), k_(g.cols()), width_(k_ + m_ + 2) {
    rows_.assign(m_, Vec(width_, Scalar(0)));
    basis_.resize(m_);
    free_row_.assign(m_, false);
    for (std::size_t i = 0; i < m_; ++i) {
      for (std::size_t j = 0; j < k_; ++j) rows_[i][j] = g(i, j);
      rows_[i][k_ + i] = 1;
      rows_[i][rhs()] = h[i];
      basis_[i] = k_ + i;
    }
    objective_.assign(width_, Scalar(0));
  }

  std::size_t art() const { return k_ + m_; }
  std::size_t rhs() const { return k_ + m_ + 1; }

  void pivot(std::size_t r, std::size_t c) {
    Vec& pr = rows_[r];
    const Scalar inv = 1 / pr[c];
    for (auto& x : pr) {
      if (sgn(x) != 0) x *= inv;
    }
    auto eliminate = [&](Vec& row) {
      if (sgn(row[c]) == 0) return;
      const Scalar f = row[c];
      for (std::size_t j = 0; j < width_; ++j) {
        if (sgn(pr[j]) != 0) row[j] -= f * pr[j];
      }
    };
    for (std::size_t i = 0; i < m_; ++i) {
      if (i != r) eliminate(rows_[i]);
    }
    eliminate(objective_);
    basis_[r] = c;
  }

  // Brings every free variable into the basis where possible; their rows are
  // then excluded from ratio tests.
  void pivot_in_free_variables() {
    for (std::size_t j = 0; j < k_; ++j) {
      for (std::size_t i = 0; i < m_; ++i) {
        if (!free_row_[i] && sgn(rows_[i][j]) != 0) {
          pivot(i, j);
          free_row_[i] = true;
          break;
        }
      }
    }
  }

  // Installs reduced costs for `cost` (minimization) given the current basis.
  void set_cost(const Vec& cost) {
    objective_.assign(width_, Scalar(0));
    for (std::size_t j = 0; j < cost.size(); ++j) objective_[j] = cost[j];
    for (std::size_t i = 0; i < m_; ++i) {
      const Scalar& cb = cost[basis_[i]];
      if (sgn(cb) == 0) continue;
      for (std::size_t j = 0; j < width_; ++j) {
        if (sgn(rows_[i][j]) != 0) objective_[j] -= cb * rows_[i][j];
      }
    }
  }

  bool needs_phase_one() const {
    for (std::size_t i = 0; i < m_; ++i) {
      if (!free_row_[i] && sgn(rows_[i][rhs()]) < 0) return true;
    }
    return false;
  }

  // Adds -a to every restricted row and pivots a in at the most violated one,
  // which leaves every restricted right-hand side nonnegative.
  void enter_artificial() {
    std::size_t best = m_;
    for (std::size_t i = 0; i < m_; ++i) {
      if (free_row_[i]) continue;
      rows_[i][art()] = -1;
      if (best == m_ || rows_[i][rhs()] < rows_[best][rhs()]) best = i;
    }
    pivot(best, art());
    artificial_active_ = true;
  }

  enum class Outcome { optimal, unbounded };

  // Most negative reduced cost over the sign-restricted columns, with
  // Bland's rule after a run of degenerate pivots. Free columns that are
  // still nonbasic have zero entries in every restricted row, so a nonzero
  // reduced cost on one of them means the objective is unbounded.
  Outcome minimize() {
    std::size_t degenerate_run = 0;
    for (;;) {
      for (std::size_t j = 0; j < k_; ++j) {
        if (!is_basic(j) && sgn(objective_[j]) != 0) return Outcome::unbounded;
      }
      const bool bland = degenerate_run >= 32;
      std::size_t enter = width_;
      for (std::size_t j = k_; j < rhs(); ++j) {
        if (j == art() && !artificial_active_) continue;
        if (sgn(objective_[j]) >= 0 || is_basic(j)) continue;
        if (enter == width_ || (!bland && objective_[j] < objective_[enter])) enter = j;
        if (bland) break;
      }
      if (enter == width_) return Outcome::optimal;
      std::size_t leave = m_;
      Scalar best_ratio;
      for (std::size_t i = 0; i < m_; ++i) {
        if (free_row_[i] || sgn(rows_[i][enter]) <= 0) continue;
        Scalar ratio = rows_[i][rhs()] / rows_[i][enter];
        if (leave == m_ || ratio < best_ratio || (ratio == best_ratio && basis_[i] < basis_[leave])) {
          leave = i;
          best_ratio = std::move(ratio);
        }
      }
      if (leave == m_) return Outcome::unbounded;
      degenerate_run = sgn(best_ratio) == 0 ? degenerate_run + 1 : 0;
      pivot(leave, enter);
    }
  }

  // After a successful phase one, removes the artificial variable so the
  // tableau describes the original region.
  void retire_artificial() {
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] != art()) continue;
      for (std::size_t j = k_; j < art(); ++j) {
        if (sgn(rows_[i][j]) != 0) {
          pivot(i, j);
          break;
        }
      }
      if (basis_[i] == art()) {
        // Row reads a = 0 identically.
        rows_[i].assign(width_, Scalar(0));
        rows_[i][art()] = 1;
        dead_row_.push_back(i);
      }
    }
    for (auto& row : rows_) row[art()] = 0;
    for (auto r : dead_row_) {
      rows_[r][art()] = 1;
      free_row_[r] = true;
    }
    artificial_active_ = false;
  }

  Vec free_values() const {
    Vec z = zeros(k_);
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] < k_) z[basis_[i]] = rows_[i][rhs()];
    }
    return z;
  }

  Scalar objective_value() const { return -objective_[rhs()]; }

  // Dual values of the slack rows at a minimizing basis (y = reduced cost of s_i).
  Vec slack_duals() const {
    Vec y(m_);
    for (std::size_t i = 0; i < m_; ++i) y[i] = objective_[k_ + i];
    return y;
  }

  std::size_t width() const { return width_; }

 private:
  bool is_basic(std::size_t col) const {
    for (auto b : basis_) {
      if (b == col) return true;
    }
    return false;
  }

  std::size_t m_;
  std::size_t k_;
  std::size_t width_;
  std::vector<Vec> rows_;
  std::vector<std::size_t> basis_;
  std::vector<bool> free_row_;
  std::vector<std::size_t> dead_row_;
  Vec objective_;
  bool artificial_active_ = false;
};

struct Reduced {
  Matrix eq;
  Vec eq_rhs;
  Matrix ineq;
  Vec ineq_rhs;
  Vec x0;
  Matrix basis;  // columns span the solution space of the equalities
  Matrix g;
  Vec h;
};

FarkasCertificate inconsistent_equalities(const LpSystem& sys, const Reduced& red) {
  // Find w with E^T w = 0 and c^T w = -1.
  const std::size_t me = sys.equalities().size();
  Matrix m(sys.variables() + 1, me);
  for (std::size_t i = 0; i < me; ++i) {
    for (std::size_t j = 0; j < sys.variables(); ++j) m(j, i) = red.eq(i, j);
    m(sys.variables(), i) = red.eq_rhs[i];
  }
  Vec target = zeros(sys.variables() + 1);
  target.back() = -1;
  auto w = solve(m, target);
  if (!w) throw std::logic_error("lp: inconsistent equalities without certificate");
  return {zeros(sys.inequalities().size()), *w};
}

FarkasCertificate lift_certificate(const LpSystem& sys, const Reduced& red, const Vec& y) {
  // y^T A must lie in the row space of E: find w with E^T w = A^T y.
  const std::size_t n = sys.variables();
  const std::size_t me = sys.equalities().size();
  Vec ay = covector_times(y, red.ineq);
  Vec w = zeros(me);
  if (me > 0) {
    auto sol = solve(red.eq.transpose(), ay);
    if (!sol) throw std::logic_error("lp: dual multipliers do not lift");
    w = *sol;
  } else if (!is_zero(ay)) {
    throw std::logic_error("lp: dual multipliers do not annihilate the constraint matrix");
  }
  (void)n;
  return {y, scale(w, -1)};
}

enum class Mode { feasibility, optimize };

LpResult run(const LpSystem& sys, Mode mode) {
  const std::size_t n = sys.variables();
  Reduced red;
  red.eq = Matrix(sys.equalities().size(), n);
  red.eq_rhs.resize(sys.equalities().size());
  for (std::size_t i = 0; i < sys.equalities().size(); ++i) {
    for (std::size_t j = 0; j < n; ++j) red.eq(i, j) = sys.equalities()[i].coeffs[j];
    red.eq_rhs[i] = sys.equalities()[i].bound;
  }
  red.ineq = Matrix(sys.inequalities().size(), n);
  red.ineq_rhs.resize(sys.inequalities().size());
  for (std::size_t i = 0; i < sys.inequalities().size(); ++i) {
    for (std::size_t j = 0; j < n; ++j) red.ineq(i, j) = sys.inequalities()[i].coeffs[j];
    red.ineq_rhs[i] = sys.inequalities()[i].bound;
  }

  LpResult result;
  auto x0 = solve(red.eq, red.eq_rhs);
  if (!x0) {
    result.certificate = inconsistent_equalities(sys, red);
    if (!verify_certificate(sys, *result.certificate)) throw std::logic_error("lp: certificate failed verification");
    return result;
  }
  red.x0 = *x0;
  red.basis = Matrix::from_columns(nullspace(red.eq), n);
  red.g = red.ineq * red.basis;
  red.h = sub(red.ineq_rhs, red.ineq * red.x0);

  const std::size_t k = red.basis.cols();
  const std::size_t m = red.g.rows();
  Tableau tab(red.g, red.h);
  tab.pivot_in_free_variables();

  if (tab.needs_phase_one()) {
    tab.enter_artificial();
    Vec cost = zeros(tab.width());
    cost[tab.art()] = 1;
    tab.set_cost(cost);
    tab.minimize();
    if (sgn(tab.objective_value()) > 0) {
      result.certificate = lift_certificate(sys, red, tab.slack_duals());
      if (!verify_certificate(sys, *result.certificate)) throw std::logic_error("lp: certificate failed verification");
      return result;
    }
    tab.retire_artificial();
  }

  if (mode == Mode::optimize && sys.objective()) {
    // maximize c.x  ==  minimize -(N^T c).z
    Vec reduced_c = covector_times(*sys.objective(), red.basis);
    Vec cost = zeros(tab.width());
    for (std::size_t j = 0; j < k; ++j) cost[j] = -reduced_c[j];
    tab.set_cost(cost);
    if (tab.minimize() == Tableau::Outcome::unbounded) result.unbounded = true;
  }
  (void)m;

  Vec z = tab.free_values();
  Vec x = add(red.x0, red.basis * z);
  if (!verify_witness(sys, x)) throw std::logic_error("lp: witness failed verification");
  if (sys.objective()) result.objective_value = dot(*sys.objective(), x);
  result.witness = std::move(x);
  return result;
}

}  // namespace

LpResult lp_feasible(const LpSystem& sys) { return run(sys, Mode::feasibility); }

LpResult lp_optimize(const LpSystem& sys) { return run(sys, Mode::optimize); }

namespace {

// Dense tableau [a | I | b] for the standard form, artificial column n + i
// starting basic in row i. `cost` holds reduced costs with -objective in its
// last entry.
class StandardTableau {
 public:
  StandardTableau(const Matrix& a, const Vec& b) : m_(a.rows()), n_(a.cols()), rows_(m_), basis_(m_), sign_(m_, 1) {
    for (std::size_t i = 0; i < m_; ++i) {
      rows_[i].assign(n_ + m_ + 1, Scalar(0));
      if (sgn(b[i]) < 0) sign_[i] = -1;
      for (std::size_t j = 0; j < n_; ++j) rows_[i][j] = sign_[i] * a(i, j);
      rows_[i][n_ + i] = 1;
      rows_[i][n_ + m_] = sign_[i] * b[i];
      basis_[i] = n_ + i;
    }
    active_.assign(m_, true);
  }

  // Phase one: minimize the sum of the artificials. True if it reaches zero.
  bool phase_one() {
    cost_.assign(n_ + m_ + 1, Scalar(0));
    for (std::size_t i = 0; i < m_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) cost_[j] -= rows_[i][j];
      cost_[n_ + m_] -= rows_[i][n_ + m_];
    }
    minimize();
    return sgn(cost_[n_ + m_]) == 0;
  }

  // Dual of the phase-one optimum, mapped back to the caller's row signs.
  Vec farkas() const {
    Vec y(m_);
    for (std::size_t i = 0; i < m_; ++i) y[i] = -sign_[i] * (1 - cost_[n_ + i]);
    return y;
  }

  // Pivots zero-level artificials out of the basis; rows where that is
  // impossible are redundant and dropped.
  void retire_artificials() {
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] < n_) continue;
      std::size_t col = n_;
      for (std::size_t j = 0; j < n_; ++j) {
        if (sgn(rows_[i][j]) != 0) {
          col = j;
          break;
        }
      }
      if (col == n_) {
        active_[i] = false;
      } else {
        pivot(i, col);
      }
    }
  }

  // Phase two for max c . w. False when unbounded.
  bool maximize(const Vec& c) {
    cost_.assign(n_ + m_ + 1, Scalar(0));
    for (std::size_t j = 0; j < n_; ++j) cost_[j] = -c[j];
    for (std::size_t i = 0; i < m_; ++i) {
      if (!active_[i] || basis_[i] >= n_) continue;
      const Scalar& cb = c[basis_[i]];
      if (sgn(cb) == 0) continue;
      for (std::size_t j = 0; j <= n_ + m_; ++j) cost_[j] += cb * rows_[i][j];
    }
    return minimize();
  }

  Vec solution() const {
    Vec w(n_);
    for (std::size_t i = 0; i < m_; ++i) {
      if (active_[i] && basis_[i] < n_) w[basis_[i]] = rows_[i][n_ + m_];
    }
    return w;
  }

 private:
  void pivot(std::size_t r, std::size_t c) {
    const Scalar inv = 1 / rows_[r][c];
    for (auto& x : rows_[r]) x *= inv;
    auto eliminate = [&](Vec& row) {
      if (sgn(row[c]) == 0) return;
      const Scalar f = row[c];
      for (std::size_t j = 0; j < row.size(); ++j) {
        if (sgn(rows_[r][j]) != 0) row[j] -= f * rows_[r][j];
      }
    };
    for (std::size_t i = 0; i < m_; ++i) {
      if (i != r && active_[i]) eliminate(rows_[i]);
    }
    if (!cost_.empty()) eliminate(cost_);
    basis_[r] = c;
  }

  // Most negative reduced cost over the original columns; after a run of
  // degenerate pivots fall back to Bland's rule, which cannot cycle, until
  // the objective moves again.
  bool minimize() {
    std::size_t degenerate_run = 0;
    for (;;) {
      const bool bland = degenerate_run >= 32;
      std::size_t enter = n_;
      for (std::size_t j = 0; j < n_; ++j) {
        if (sgn(cost_[j]) >= 0) continue;
        if (enter == n_ || (!bland && cost_[j] < cost_[enter])) enter = j;
        if (bland) break;
      }
      if (enter == n_) return true;
      std::size_t leave = m_;
      Scalar best;
      for (std::size_t i = 0; i < m_; ++i) {
        if (!active_[i] || sgn(rows_[i][enter]) <= 0) continue;
        Scalar ratio_i = rows_[i][n_ + m_] / rows_[i][enter];
        if (leave == m_ || ratio_i < best || (ratio_i == best && basis_[i] < basis_[leave])) {
          leave = i;
          best = std::move(ratio_i);
        }
      }
      if (leave == m_) return false;
      degenerate_run = sgn(best) == 0 ? degenerate_run + 1 : 0;
      pivot(leave, enter);
    }
  }

  std::size_t m_, n_;
  std::vector<Vec> rows_;
  std::vector<std::size_t> basis_;
  std::vector<int> sign_;
  std::vector<bool> active_;
  Vec cost_;
};

}  // namespace

StandardResult lp_standard(const Matrix& a, const Vec& b, const Vec& c) {
  if (b.size() != a.rows() || (!c.empty() && c.size() != a.cols())) {
    throw std::invalid_argument("lp_standard: dimension mismatch");
  }
  StandardTableau t(a, b);
  StandardResult out;
  if (!t.phase_one()) {
    Vec y = t.farkas();
    const Vec ya = covector_times(y, a);
    for (const auto& x : ya) {
      if (sgn(x) < 0) throw std::logic_error("lp_standard: Farkas vector fails y^T a >= 0");
    }
    if (sgn(dot(y, b)) >= 0) throw std::logic_error("lp_standard: Farkas vector fails y . b < 0");
    out.farkas = std::move(y);
    return out;
  }
  t.retire_artificials();
  if (!c.empty() && !t.maximize(c)) out.unbounded = true;
  Vec w = t.solution();
  for (const auto& x : w) {
    if (sgn(x) < 0) throw std::logic_error("lp_standard: negative solution entry");
  }
  if (a * w != b) throw std::logic_error("lp_standard: solution fails a w = b");
  out.solution = std::move(w);
  return out;
}

}  // namespace gpt
