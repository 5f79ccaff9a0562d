#pragma once

// Brute-force reference computations used only by the tests. They share the
// exact linear algebra with the library but none of its polytope or LP code.

#include <functional>
#include <vector>

#include "gpt/linalg.hpp"
#include "gpt/polytope.hpp"

namespace oracle {

using gpt::Matrix;
using gpt::Scalar;
using gpt::Vec;

inline void for_each_subset(std::size_t n, std::size_t k, const std::function<void(const std::vector<std::size_t>&)>& f) {
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  if (k > n) return;
  for (;;) {
    f(idx);
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

/// Vertices of {x : ineq rows <= b, eq rows = c} by trying every choice of
/// tight inequalities that pins a unique point.
inline std::vector<Vec> vertices_by_bases(const gpt::HRep& h) {
  const std::size_t n = h.dim;
  std::vector<Vec> eq_rows;
  Vec eq_rhs;
  for (const auto& e : h.equalities) {
    eq_rows.push_back(e.normal);
    eq_rhs.push_back(e.offset);
  }
  const std::size_t eq_rank = eq_rows.empty() ? 0 : gpt::rank(Matrix::from_rows(eq_rows, n));
  std::vector<Vec> out;
  auto feasible = [&](const Vec& x) {
    for (const auto& hs : h.inequalities) {
      if (gpt::dot(hs.normal, x) > hs.offset) return false;
    }
    for (const auto& e : h.equalities) {
      if (gpt::dot(e.normal, x) != e.offset) return false;
    }
    return true;
  };
  for_each_subset(h.inequalities.size(), n - eq_rank, [&](const std::vector<std::size_t>& idx) {
    std::vector<Vec> rows = eq_rows;
    Vec rhs = eq_rhs;
    for (auto i : idx) {
      rows.push_back(h.inequalities[i].normal);
      rhs.push_back(h.inequalities[i].offset);
    }
    const Matrix m = Matrix::from_rows(rows, n);
    if (gpt::rank(m) != n) return;
    auto x = gpt::solve(m, rhs);
    if (x && feasible(*x)) out.push_back(*x);
  });
  gpt::sort_unique(out);
  return out;
}

/// Facets of a full-dimensional point set: hyperplanes through n affinely
/// independent points with every point on one side.
inline std::vector<gpt::Halfspace> facets_by_subsets(const std::vector<Vec>& pts) {
  const std::size_t n = pts.front().size();
  std::vector<gpt::Halfspace> out;
  for_each_subset(pts.size(), n, [&](const std::vector<std::size_t>& idx) {
    std::vector<Vec> rows;
    for (auto i : idx) {
      Vec r = pts[i];
      r.push_back(-1);
      rows.push_back(r);
    }
    const auto ns = gpt::nullspace(Matrix::from_rows(rows, n + 1));
    if (ns.size() != 1) return;
    Vec a(ns[0].begin(), ns[0].end() - 1);
    Scalar b = ns[0].back();
    int side = 0;
    for (const auto& p : pts) {
      const int s = sgn(gpt::dot(a, p) - b);
      if (s == 0) continue;
      if (side == 0) side = s;
      if (s != side) return;
    }
    if (side > 0) {
      a = gpt::scale(a, -1);
      b = -b;
    }
    Vec ab = a;
    ab.push_back(b);
    ab = gpt::primitive(ab);
    Scalar off = ab.back();
    ab.pop_back();
    gpt::Halfspace hs{ab, off};
    for (const auto& f : out) {
      if (f == hs) return;
    }
    out.push_back(hs);
  });
  return out;
}

}  // namespace oracle
