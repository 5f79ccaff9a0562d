#include "gpt/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace gpt {

namespace {

CompositePtr as_composite(const SpacePtr& s) { return std::dynamic_pointer_cast<const CompositeSpace>(s); }

// The codomain as a composite of two copies of the domain.
CompositePtr doubled_codomain(const AffineChannel& b, const char* who) {
  auto joint = as_composite(b.codomain);
  if (!joint || !embeds(*joint->factor_a(), *b.domain) || !embeds(*b.domain, *joint->factor_a()) ||
      !joint->symmetric_factors()) {
    throw std::invalid_argument(std::string(who) + ": codomain is not a composite of two copies of the domain");
  }
  return joint;
}

// Squaring T^n doubles relative rounding error along the fixed space on
// every step, so the averages run in 256-bit floats rather than doubles.
constexpr mp_bitcnt_t kCesaroBits = 256;
using FMatrix = std::vector<std::vector<mpf_class>>;

FMatrix to_float(const Matrix& m) {
  FMatrix out(m.rows(), std::vector<mpf_class>(m.cols(), mpf_class(0, kCesaroBits)));
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) out[i][j] = m(i, j);
  }
  return out;
}

FMatrix multiply(const FMatrix& a, const FMatrix& b) {
  const std::size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
  FMatrix out(n, std::vector<mpf_class>(m, mpf_class(0, kCesaroBits)));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t l = 0; l < k; ++l) {
      if (sgn(a[i][l]) == 0) continue;
      for (std::size_t j = 0; j < m; ++j) out[i][j] += a[i][l] * b[l][j];
    }
  }
  return out;
}

}  // namespace

ChannelValidation validate_channel(const AffineChannel& c) {
  ChannelValidation out;
  if (!c.domain || !c.codomain) {
    out.violations.push_back({"channel has no domain or codomain", {}, {}});
    return out;
  }
  if (c.matrix.rows() != c.codomain->dim() || c.matrix.cols() != c.domain->dim()) {
    out.violations.push_back({"matrix is " + std::to_string(c.matrix.rows()) + "x" + std::to_string(c.matrix.cols()) +
                                  ", expected " + std::to_string(c.codomain->dim()) + "x" +
                                  std::to_string(c.domain->dim()),
                              {}, {}});
    return out;
  }
  if (covector_times(c.codomain->unit(), c.matrix) != c.domain->unit()) {
    out.violations.push_back({"unit not preserved: u_out T = " + to_string(covector_times(c.codomain->unit(), c.matrix)) +
                                  ", u_in = " + to_string(c.domain->unit()),
                              {}, {}});
  }
  const auto& verts = c.domain->vertices();
  for (std::size_t i = 0; i < verts.size(); ++i) {
    out.images.push_back(c.codomain->member(c.matrix * verts[i]));
    if (!out.images.back().inside) {
      out.violations.push_back({"vertex " + std::to_string(i) + " " + to_string(verts[i]) + " maps to " +
                                    to_string(c.matrix * verts[i]) + " outside the codomain",
                                {}, i});
    }
  }
  return out;
}

AffineChannel identity_channel(SpacePtr s) {
  Matrix m = Matrix::identity(s->dim());
  return {std::move(m), s, s};
}

AffineChannel constant_channel(SpacePtr domain, SpacePtr codomain, const Vec& state) {
  if (state.size() != codomain->dim()) throw std::invalid_argument("constant_channel: state dimension mismatch");
  Matrix m = Matrix::outer(state, domain->unit());
  return {std::move(m), std::move(domain), std::move(codomain)};
}

bool embeds(const StateSpace& inner, const StateSpace& outer) {
  if (&inner == &outer) return true;
  if (inner.dim() != outer.dim() || inner.unit() != outer.unit()) return false;
  for (const auto& v : inner.vertices()) {
    if (!outer.contains(v)) return false;
  }
  return true;
}

AffineChannel compose(const AffineChannel& c2, const AffineChannel& c1) {
  if (!embeds(*c1.codomain, *c2.domain)) {
    throw std::invalid_argument("compose: codomain " + c1.codomain->name() + " does not fit domain " +
                                c2.domain->name());
  }
  return {c2.matrix * c1.matrix, c1.domain, c2.codomain};
}

AffineChannel tensor_pair(const AffineChannel& p, const AffineChannel& q, TensorVariant variant) {
  return {kron(p.matrix, q.matrix), make_tensor(p.domain, q.domain, variant),
          make_tensor(p.codomain, q.codomain, variant)};
}

AffineChannel symmetrize(const AffineChannel& b) {
  const auto joint = doubled_codomain(b, "symmetrize");
  const Matrix sum = b.matrix + joint->swap_matrix() * b.matrix;
  return {ratio(1, 2) * sum, b.domain, b.codomain};
}

AffineChannel marginal_channel_a(const AffineChannel& b) {
  const auto joint = as_composite(b.codomain);
  if (!joint) throw std::invalid_argument("marginal_channel_a: codomain is not a composite");
  return {joint->marginal_a_map() * b.matrix, b.domain, joint->factor_a()};
}

AffineChannel marginal_channel_b(const AffineChannel& b) {
  const auto joint = as_composite(b.codomain);
  if (!joint) throw std::invalid_argument("marginal_channel_b: codomain is not a composite");
  return {joint->marginal_b_map() * b.matrix, b.domain, joint->factor_b()};
}

Polytope fixed_set(const AffineChannel& t) {
  if (t.matrix.rows() != t.matrix.cols() || t.matrix.cols() != t.domain->dim()) {
    throw std::invalid_argument("fixed_set: not an endochannel");
  }
  const Matrix shifted = t.matrix - Matrix::identity(t.domain->dim());
  std::vector<Hyperplane> eqs;
  for (std::size_t i = 0; i < shifted.rows(); ++i) {
    Vec row = shifted.row(i);
    if (!is_zero(row)) eqs.push_back({std::move(row), 0});
  }
  return intersect_with_affine(t.domain->omega(), eqs);
}

Compression compression(const AffineChannel& t) {
  const std::size_t d = t.domain->dim();
  if (t.matrix.rows() != d || t.matrix.cols() != d) throw std::invalid_argument("compression: not an endochannel");
  const Matrix shifted = t.matrix - Matrix::identity(d);
  const auto kernel = nullspace(shifted);
  if (kernel.empty()) throw CompressionError("compression: T has no nonzero fixed vector");
  std::vector<Vec> cols = kernel;
  for (std::size_t p : rref(shifted).pivots) cols.push_back(shifted.col(p));
  const auto inv = inverse(Matrix::from_columns(cols, d));
  if (!inv) throw CompressionError("compression: ker(T - I) and im(T - I) overlap");

  const std::size_t k = kernel.size();
  Matrix basis = Matrix::from_columns(kernel, d);
  Matrix coords(k, d);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < d; ++j) coords(i, j) = (*inv)(i, j);
  }
  Matrix p = basis * coords;
  return {{std::move(p), t.domain, t.domain}, std::move(basis), std::move(coords)};
}

SpacePtr fixed_space(const Compression& p, const Polytope& fixed) {
  std::vector<Vec> pts;
  for (const auto& g : fixed.vertices()) pts.push_back(p.coords * g);
  return make_custom_space("fixed set", Polytope::from_extreme_points(p.coords.rows(), std::move(pts)),
                           covector_times(p.channel.domain->unit(), p.basis));
}

Vec lift_effect(const Compression& p, const Polytope& fixed, const Vec& e_gamma) {
  if (e_gamma.size() != p.coords.rows()) throw std::invalid_argument("lift_effect: effect dimension mismatch");
  for (const auto& g : fixed.vertices()) {
    const Scalar value = dot(e_gamma, p.coords * g);
    if (sgn(value) < 0 || value > 1) {
      throw std::invalid_argument("lift_effect: effect takes value " + to_string(value) + " on fixed state " +
                                  to_string(g));
    }
  }
  return covector_times(e_gamma, p.coords);
}

CesaroResult cesaro_compression(const AffineChannel& t, const CesaroOptions& options) {
  const FMatrix base = to_float(t.matrix);
  FMatrix average = base;
  FMatrix power = base;
  CesaroResult out;
  int quiet_steps = 0;
  mpf_class next(0, kCesaroBits);
  while (out.iterations < options.max_iterations) {
    const FMatrix shifted = multiply(power, average);
    double diff = 0.0;
    for (std::size_t i = 0; i < average.size(); ++i) {
      for (std::size_t j = 0; j < average[i].size(); ++j) {
        next = (average[i][j] + shifted[i][j]) / 2;
        diff = std::max(diff, std::abs(mpf_class(next - average[i][j]).get_d()));
        average[i][j] = next;
      }
    }
    power = multiply(power, power);
    ++out.iterations;
    out.last_difference = diff;
    quiet_steps = diff < options.tolerance ? quiet_steps + 1 : 0;
    if (quiet_steps == 2) {
      out.converged = true;
      break;
    }
  }
  out.matrix.assign(average.size(), {});
  for (std::size_t i = 0; i < average.size(); ++i) {
    for (const auto& x : average[i]) out.matrix[i].push_back(x.get_d());
  }
  return out;
}

double max_abs_difference(const std::vector<std::vector<double>>& a, const Matrix& b) {
  if (a.size() != b.rows()) throw std::invalid_argument("max_abs_difference: shape mismatch");
  double worst = 0.0;
  for (std::size_t i = 0; i < b.rows(); ++i) {
    if (a[i].size() != b.cols()) throw std::invalid_argument("max_abs_difference: shape mismatch");
    for (std::size_t j = 0; j < b.cols(); ++j) worst = std::max(worst, std::abs(a[i][j] - b(i, j).get_d()));
  }
  return worst;
}

}  // namespace gpt
