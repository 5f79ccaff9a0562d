#include "gpt/polytope.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <mutex>
#include <optional>

namespace gpt {

bool lex_less(const Vec& a, const Vec& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

void sort_unique(std::vector<Vec>& v) {
  std::sort(v.begin(), v.end(), lex_less);
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

namespace {

class Bits {
 public:
  explicit Bits(std::size_t n = 0) : words_((n + 63) / 64, 0) {}
  void set(std::size_t i) { words_[i / 64] |= std::uint64_t{1} << (i % 64); }
  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }
  Bits operator&(const Bits& o) const {
    Bits r = *this;
    for (std::size_t i = 0; i < words_.size(); ++i) r.words_[i] &= o.words_[i];
    return r;
  }
  bool contains(const Bits& o) const {
    for (std::size_t i = 0; i < words_.size(); ++i) {
      if ((words_[i] & o.words_[i]) != o.words_[i]) return false;
    }
    return true;
  }

 private:
  std::vector<std::uint64_t> words_;
};

struct Ray {
  Vec v;
  Bits zero;
};

}  // namespace

std::vector<Vec> extreme_rays(const Matrix& a) {
  const std::size_t n = a.cols();
  const std::size_t m = a.rows();
  if (n == 0) return {};

  // Greedy choice of n independent rows for the initial simplicial cone.
  std::vector<std::size_t> basis_rows;
  {
    std::vector<Vec> chosen;
    for (std::size_t i = 0; i < m && basis_rows.size() < n; ++i) {
      chosen.push_back(a.row(i));
      if (rank(Matrix::from_rows(chosen, n)) == chosen.size()) {
        basis_rows.push_back(i);
      } else {
        chosen.pop_back();
      }
    }
  }
  if (basis_rows.size() < n) throw UnboundedError("cone is not pointed");

  std::vector<Vec> rows;
  for (auto i : basis_rows) rows.push_back(a.row(i));
  const Matrix inv = *inverse(Matrix::from_rows(rows, n));

  std::vector<Ray> rays;
  for (std::size_t j = 0; j < n; ++j) {
    Ray r{primitive(scale(inv.col(j), -1)), Bits(m)};
    for (std::size_t t = 0; t < n; ++t) {
      if (t != j) r.zero.set(basis_rows[t]);
    }
    rays.push_back(std::move(r));
  }

  std::vector<bool> used(m, false);
  for (auto i : basis_rows) used[i] = true;

  for (std::size_t i = 0; i < m; ++i) {
    if (used[i]) continue;
    const Vec row = a.row(i);
    std::vector<Scalar> s(rays.size());
    std::vector<std::size_t> pos, neg;
    for (std::size_t r = 0; r < rays.size(); ++r) {
      s[r] = dot(row, rays[r].v);
      if (sgn(s[r]) > 0) pos.push_back(r);
      else if (sgn(s[r]) < 0) neg.push_back(r);
    }
    if (pos.empty()) {
      for (std::size_t r = 0; r < rays.size(); ++r) {
        if (sgn(s[r]) == 0) rays[r].zero.set(i);
      }
      continue;
    }

    std::vector<Ray> next;
    for (auto p : pos) {
      for (auto q : neg) {
        Bits common = rays[p].zero & rays[q].zero;
        if (n >= 2 && common.count() < n - 2) continue;
        bool adjacent = true;
        for (std::size_t r = 0; r < rays.size() && adjacent; ++r) {
          if (r != p && r != q && rays[r].zero.contains(common)) adjacent = false;
        }
        if (!adjacent) continue;
        Vec v = sub(scale(rays[q].v, s[p]), scale(rays[p].v, s[q]));
        Ray nr{primitive(v), common};
        nr.zero.set(i);
        next.push_back(std::move(nr));
      }
    }
    for (std::size_t r = 0; r < rays.size(); ++r) {
      if (sgn(s[r]) > 0) continue;
      if (sgn(s[r]) == 0) rays[r].zero.set(i);
      next.push_back(std::move(rays[r]));
    }
    rays = std::move(next);
  }

  std::vector<Vec> out;
  out.reserve(rays.size());
  for (auto& r : rays) out.push_back(std::move(r.v));
  sort_unique(out);
  return out;
}

namespace {

struct AffineChart {
  std::vector<Hyperplane> equalities;  // RREF
  std::vector<std::size_t> pivots;
  std::vector<std::size_t> free;
};

// Canonical RREF of the equality system; nothing if it is inconsistent.
std::optional<AffineChart> chart_of(std::size_t dim, const std::vector<Hyperplane>& eqs) {
  AffineChart chart;
  if (!eqs.empty()) {
    Matrix aug(eqs.size(), dim + 1);
    for (std::size_t i = 0; i < eqs.size(); ++i) {
      if (eqs[i].normal.size() != dim) throw std::invalid_argument("equality dimension mismatch");
      for (std::size_t j = 0; j < dim; ++j) aug(i, j) = eqs[i].normal[j];
      aug(i, dim) = eqs[i].offset;
    }
    Rref red = rref(aug);
    for (std::size_t i = 0; i < red.pivots.size(); ++i) {
      if (red.pivots[i] == dim) return std::nullopt;
      Vec normal = red.reduced.row(i);
      Scalar offset = normal.back();
      normal.pop_back();
      chart.equalities.push_back({std::move(normal), std::move(offset)});
      chart.pivots.push_back(red.pivots[i]);
    }
  }
  std::vector<bool> is_pivot(dim, false);
  for (auto p : chart.pivots) is_pivot[p] = true;
  for (std::size_t j = 0; j < dim; ++j) {
    if (!is_pivot[j]) chart.free.push_back(j);
  }
  return chart;
}

// Full point from its free coordinates.
Vec lift_point(std::size_t dim, const AffineChart& chart, const Vec& z) {
  Vec x = zeros(dim);
  for (std::size_t f = 0; f < chart.free.size(); ++f) x[chart.free[f]] = z[f];
  for (std::size_t i = 0; i < chart.pivots.size(); ++i) {
    Scalar v = chart.equalities[i].offset;
    for (std::size_t f = 0; f < chart.free.size(); ++f) {
      const Scalar& c = chart.equalities[i].normal[chart.free[f]];
      if (sgn(c) != 0) v -= c * z[f];
    }
    x[chart.pivots[i]] = v;
  }
  return x;
}

Halfspace canonical_halfspace(Vec normal, Scalar offset) {
  normal.push_back(offset);
  Vec p = primitive(normal);
  Scalar b = p.back();
  p.pop_back();
  return {std::move(p), std::move(b)};
}

bool halfspace_less(const Halfspace& a, const Halfspace& b) {
  if (a.normal != b.normal) return lex_less(a.normal, b.normal);
  return a.offset < b.offset;
}

LpSystem system_of(const HRep& h) {
  LpSystem sys(h.dim);
  for (const auto& hs : h.inequalities) sys.add_inequality(hs.normal, hs.offset);
  for (const auto& eq : h.equalities) sys.add_equality(eq.normal, eq.offset);
  return sys;
}

}  // namespace

HRep hull_to_halfspaces(const std::vector<Vec>& input) {
  if (input.empty()) throw std::invalid_argument("hull_to_halfspaces: no points");
  const std::size_t dim = input.front().size();
  for (const auto& v : input) {
    if (v.size() != dim) throw std::invalid_argument("hull_to_halfspaces: dimension mismatch");
  }
  std::vector<Vec> points = input;
  sort_unique(points);

  // Affine hull: all (a, a0) with a.v + a0 = 0 on every point.
  Matrix lifted(points.size(), dim + 1);
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = 0; j < dim; ++j) lifted(i, j) = points[i][j];
    lifted(i, dim) = 1;
  }
  std::vector<Hyperplane> raw;
  for (auto& w : nullspace(lifted)) {
    Scalar offset = -w.back();
    w.pop_back();
    raw.push_back({std::move(w), std::move(offset)});
  }
  const AffineChart chart = *chart_of(dim, raw);

  HRep out;
  out.dim = dim;
  out.equalities = chart.equalities;
  const std::size_t r = chart.free.size();
  if (r == 0) return out;

  Matrix cone(points.size(), r + 1);
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t f = 0; f < r; ++f) cone(i, f) = points[i][chart.free[f]];
    cone(i, r) = -1;
  }
  for (const auto& ray : extreme_rays(cone)) {
    Vec normal = zeros(dim);
    bool nonzero = false;
    for (std::size_t f = 0; f < r; ++f) {
      normal[chart.free[f]] = ray[f];
      nonzero = nonzero || sgn(ray[f]) != 0;
    }
    if (!nonzero) continue;
    out.inequalities.push_back(canonical_halfspace(std::move(normal), ray[r]));
  }
  std::sort(out.inequalities.begin(), out.inequalities.end(), halfspace_less);
  return out;
}

std::vector<Vec> halfspaces_to_vertices(const HRep& h) {
  for (const auto& hs : h.inequalities) {
    if (hs.normal.size() != h.dim) throw std::invalid_argument("halfspaces_to_vertices: dimension mismatch");
  }
  if (!lp_feasible(system_of(h)).feasible()) return {};
  const auto chart = chart_of(h.dim, h.equalities);
  const std::size_t r = chart->free.size();

  // Inequalities in free coordinates: g . z <= b'.
  std::vector<Vec> g_rows;
  Vec b_rows;
  const Vec origin = lift_point(h.dim, *chart, zeros(r));
  for (const auto& hs : h.inequalities) {
    Vec g(r);
    for (std::size_t f = 0; f < r; ++f) {
      g[f] = dot(hs.normal, sub(lift_point(h.dim, *chart, unit_vector(r, f)), origin));
    }
    g_rows.push_back(std::move(g));
    b_rows.push_back(hs.offset - dot(hs.normal, origin));
  }
  if (r == 0) return {origin};
  if (rank(Matrix::from_rows(g_rows, r)) < r) throw UnboundedError("polytope has a lineality direction");

  Matrix cone(g_rows.size() + 1, r + 1);
  for (std::size_t i = 0; i < g_rows.size(); ++i) {
    for (std::size_t f = 0; f < r; ++f) cone(i, f) = g_rows[i][f];
    cone(i, r) = -b_rows[i];
  }
  cone(g_rows.size(), r) = -1;

  std::vector<Vec> out;
  for (const auto& ray : extreme_rays(cone)) {
    if (sgn(ray[r]) == 0) throw UnboundedError("polytope has a recession direction");
    Vec z(r);
    for (std::size_t f = 0; f < r; ++f) z[f] = ray[f] / ray[r];
    out.push_back(lift_point(h.dim, *chart, z));
  }
  sort_unique(out);
  return out;
}

struct Polytope::State {
  std::size_t dim = 0;
  bool empty = false;
  std::vector<Vec> vertices;
  std::optional<HRep> given;  // as supplied by the caller, used for fast containment
  mutable std::once_flag hrep_once;
  mutable HRep hrep;
};

namespace {

// Weights over `points` reproducing x, or nothing.
// Columns (p_i, 1); the last row asks the weights to sum to one.
Matrix hull_columns(const std::vector<Vec>& points, std::size_t dim) {
  Matrix a(dim + 1, points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = 0; j < dim; ++j) a(j, i) = points[i][j];
    a(dim, i) = 1;
  }
  return a;
}

Vec with_one(const Vec& x) {
  Vec b = x;
  b.push_back(1);
  return b;
}

bool in_hull_of(const std::vector<Vec>& points, const Vec& x) {
  if (points.empty()) return false;
  return lp_standard(hull_columns(points, x.size()), with_one(x)).solution.has_value();
}

}  // namespace

namespace {

std::size_t affine_rank(const std::vector<const Vec*>& pts, std::size_t dim) {
  if (pts.size() <= 1) return 0;
  std::vector<Vec> diffs;
  for (std::size_t i = 1; i < pts.size(); ++i) diffs.push_back(sub(*pts[i], *pts[0]));
  return rank(Matrix::from_rows(diffs, dim));
}

// Irredundant canonical H-rep when a (possibly redundant) H-rep and the
// vertices are both known: a given inequality is a facet exactly when the
// vertices it is tight on span an affine hyperplane of the polytope. Cheaper
// than a second double-description pass.
HRep facets_of_given(std::size_t dim, const HRep& given, const std::vector<Vec>& vertices) {
  std::vector<const Vec*> all;
  for (const auto& v : vertices) all.push_back(&v);
  const std::size_t full = affine_rank(all, dim);

  HRep out;
  out.dim = dim;
  {
    // Affine hull equalities, canonical as in hull_to_halfspaces.
    Matrix lifted(vertices.size(), dim + 1);
    for (std::size_t i = 0; i < vertices.size(); ++i) {
      for (std::size_t j = 0; j < dim; ++j) lifted(i, j) = vertices[i][j];
      lifted(i, dim) = 1;
    }
    std::vector<Hyperplane> raw;
    for (auto& w : nullspace(lifted)) {
      Scalar offset = -w.back();
      w.pop_back();
      raw.push_back({std::move(w), std::move(offset)});
    }
    out.equalities = chart_of(dim, raw)->equalities;
  }
  if (full == 0) return out;
  const AffineChart chart = *chart_of(dim, out.equalities);

  for (const auto& hs : given.inequalities) {
    std::vector<const Vec*> tight;
    for (const auto& v : vertices) {
      if (dot(hs.normal, v) == hs.offset) tight.push_back(&v);
    }
    if (tight.empty() || affine_rank(tight, dim) + 1 != full) continue;
    // Reduce modulo the equalities so the normal vanishes on pivot columns.
    Vec normal = hs.normal;
    Scalar offset = hs.offset;
    for (std::size_t i = 0; i < chart.pivots.size(); ++i) {
      const Scalar f = normal[chart.pivots[i]];
      if (sgn(f) == 0) continue;
      for (std::size_t j = 0; j < dim; ++j) normal[j] -= f * chart.equalities[i].normal[j];
      offset -= f * chart.equalities[i].offset;
    }
    out.inequalities.push_back(canonical_halfspace(std::move(normal), std::move(offset)));
  }
  std::sort(out.inequalities.begin(), out.inequalities.end(), halfspace_less);
  out.inequalities.erase(std::unique(out.inequalities.begin(), out.inequalities.end()), out.inequalities.end());
  return out;
}

}  // namespace

Polytope Polytope::from_vertices(std::size_t dim, std::vector<Vec> points) {
  for (const auto& p : points) {
    if (p.size() != dim) throw std::invalid_argument("Polytope::from_vertices: dimension mismatch");
  }
  sort_unique(points);
  std::vector<Vec> extreme;
  for (std::size_t i = 0; i < points.size(); ++i) {
    std::vector<Vec> others;
    for (std::size_t j = 0; j < points.size(); ++j) {
      if (j != i) others.push_back(points[j]);
    }
    if (!in_hull_of(others, points[i])) extreme.push_back(points[i]);
  }
  return from_extreme_points(dim, std::move(extreme));
}

Polytope Polytope::from_extreme_points(std::size_t dim, std::vector<Vec> points) {
  auto s = std::make_shared<State>();
  s->dim = dim;
  sort_unique(points);
  s->empty = points.empty();
  s->vertices = std::move(points);
  return Polytope(std::move(s));
}

Polytope Polytope::from_halfspaces(HRep h) {
  auto s = std::make_shared<State>();
  s->dim = h.dim;
  s->vertices = halfspaces_to_vertices(h);
  s->empty = s->vertices.empty();
  s->given = std::move(h);
  return Polytope(std::move(s));
}

Polytope Polytope::empty(std::size_t dim) { return from_extreme_points(dim, {}); }

std::size_t Polytope::dim() const { return state_->dim; }
bool Polytope::is_empty() const { return state_->empty; }
const std::vector<Vec>& Polytope::vertices() const { return state_->vertices; }

const HRep& Polytope::hrep() const {
  std::call_once(state_->hrep_once, [this] {
    if (state_->empty) {
      // 0 . x = 1 has no solution.
      HRep h;
      h.dim = state_->dim;
      h.equalities.push_back({zeros(state_->dim), 1});
      state_->hrep = std::move(h);
    } else if (state_->given) {
      state_->hrep = facets_of_given(state_->dim, *state_->given, state_->vertices);
    } else {
      state_->hrep = hull_to_halfspaces(state_->vertices);
    }
  });
  return state_->hrep;
}

std::size_t Polytope::affine_dimension() const {
  if (is_empty()) return 0;
  const auto& v = vertices();
  std::vector<Vec> diffs;
  for (std::size_t i = 1; i < v.size(); ++i) diffs.push_back(sub(v[i], v[0]));
  if (diffs.empty()) return 0;
  return rank(Matrix::from_rows(diffs, dim()));
}

bool Polytope::is_simplex() const {
  return !is_empty() && vertices().size() == affine_dimension() + 1;
}

bool Polytope::contains(const Vec& x) const {
  if (x.size() != dim()) throw std::invalid_argument("Polytope::contains: dimension mismatch");
  if (is_empty()) return false;
  if (state_->given) {
    for (const auto& hs : state_->given->inequalities) {
      if (dot(hs.normal, x) > hs.offset) return false;
    }
    for (const auto& eq : state_->given->equalities) {
      if (dot(eq.normal, x) != eq.offset) return false;
    }
    return true;
  }
  return in_hull_of(vertices(), x);
}

Membership Polytope::member(const Vec& x) const {
  if (x.size() != dim()) throw std::invalid_argument("Polytope::member: dimension mismatch");
  Membership out;
  const auto& v = vertices();
  const std::size_t k = v.size();
  if (k == 0) {
    // Everything is separated from the empty set; 0 > -1 with the zero functional.
    out.separator = zeros(dim());
    out.separator_bound = -1;
    return out;
  }
  auto separate_by = [&](Vec h) {
    h = primitive(h);
    Scalar bound = dot(h, v[0]);
    for (const auto& p : v) bound = std::max(bound, dot(h, p));
    out.separator = std::move(h);
    out.separator_bound = std::move(bound);
    return out;
  };

  // With a known H-description a violated row separates, and an inside
  // point can only be a mixture of the vertices of its smallest face.
  std::vector<std::size_t> support;
  if (state_->given) {
    for (const auto& eq : state_->given->equalities) {
      const int side = cmp(dot(eq.normal, x), eq.offset);
      if (side != 0) return separate_by(side > 0 ? eq.normal : scale(eq.normal, -1));
    }
    std::vector<const Halfspace*> tight;
    for (const auto& hs : state_->given->inequalities) {
      const Scalar lhs = dot(hs.normal, x);
      if (lhs > hs.offset) return separate_by(hs.normal);
      if (lhs == hs.offset) tight.push_back(&hs);
    }
    for (std::size_t i = 0; i < k; ++i) {
      bool on_face = true;
      for (const auto* hs : tight) on_face = on_face && dot(hs->normal, v[i]) == hs->offset;
      if (on_face) support.push_back(i);
    }
  } else {
    for (std::size_t i = 0; i < k; ++i) support.push_back(i);
  }

  // Balanced weights w_i = t + s_i with s, t >= 0, maximizing t:
  // columns (v_i, 1) for s and (sum v_i, count) for t.
  const std::size_t n = support.size();
  std::vector<Vec> pts;
  for (std::size_t i : support) pts.push_back(v[i]);
  const Matrix base = hull_columns(pts, dim());
  Matrix a(dim() + 1, n + 1);
  for (std::size_t j = 0; j <= dim(); ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      a(j, i) = base(j, i);
      a(j, n) += base(j, i);
    }
  }
  const StandardResult res = lp_standard(a, with_one(x), unit_vector(n + 1, n));
  if (!res.solution) {
    if (state_->given) throw std::logic_error("Polytope::member: point satisfies the H-description but not the hull");
    // y = (z, z0) with z.v_i + z0 >= 0 and z.x + z0 < 0, so h = -z separates.
    const Vec& y = *res.farkas;
    Vec h(dim());
    for (std::size_t j = 0; j < dim(); ++j) h[j] = -y[j];
    return separate_by(std::move(h));
  }
  out.inside = true;
  const Vec& w = *res.solution;
  out.weights = zeros(k);
  for (std::size_t i = 0; i < n; ++i) out.weights[support[i]] = w[i] + w[n];
  return out;
}

bool Polytope::same_set(const Polytope& other) const {
  return dim() == other.dim() && vertices() == other.vertices();
}

Polytope intersect_with_affine(const Polytope& p, const std::vector<Hyperplane>& equalities) {
  if (p.is_empty()) return Polytope::empty(p.dim());
  HRep h = p.hrep();
  for (const auto& eq : equalities) {
    if (eq.normal.size() != p.dim()) throw std::invalid_argument("intersect_with_affine: dimension mismatch");
    h.equalities.push_back(eq);
  }
  return Polytope::from_halfspaces(std::move(h));
}

}  // namespace gpt
