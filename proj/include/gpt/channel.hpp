#pragma once

#include <vector>

#include "gpt/composite.hpp"

namespace gpt {

/// Linear map between the spans of two state spaces. Valid channels preserve
/// the unit and send every domain vertex into the codomain.
struct AffineChannel {
  Matrix matrix;
  SpacePtr domain;
  SpacePtr codomain;

  Vec operator()(const Vec& x) const { return matrix * x; }
};

struct ChannelValidation {
  std::vector<Violation> violations;
  /// Membership of each image T(v), indexed like domain->vertices().
  std::vector<Membership> images;
  bool ok() const { return violations.empty(); }
};

ChannelValidation validate_channel(const AffineChannel& c);

AffineChannel identity_channel(SpacePtr s);
/// x -> u(x) * state.
AffineChannel constant_channel(SpacePtr domain, SpacePtr codomain, const Vec& state);

/// Same space, or same span and unit with inner's vertices inside outer.
bool embeds(const StateSpace& inner, const StateSpace& outer);

/// c2 after c1. Throws std::invalid_argument unless c1's codomain embeds in c2's domain.
AffineChannel compose(const AffineChannel& c2, const AffineChannel& c1);

/// p (x) q between the min or max composites of the domains and codomains.
AffineChannel tensor_pair(const AffineChannel& p, const AffineChannel& q, TensorVariant variant = TensorVariant::max);

/// (b + swap b) / 2 for a channel into a composite of two copies of its domain.
AffineChannel symmetrize(const AffineChannel& b);

/// Reduced channels of a channel into a composite.
AffineChannel marginal_channel_a(const AffineChannel& b);
AffineChannel marginal_channel_b(const AffineChannel& b);

/// Fixed states of an endochannel, Omega ∩ ker(T - I). May be empty for
/// invalid input; callers report that rather than assume it away.
Polytope fixed_set(const AffineChannel& t);

/// Idempotent P = K L onto ker(T - I) along im(T - I), where the columns
/// of K span the fixed space and L is the matching block of [K R]^-1.
struct Compression {
  AffineChannel channel;
  Matrix basis;
  Matrix coords;
};

class CompressionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Exact compression onto fixed_set(t). Throws CompressionError when the
/// kernel and image of T - I overlap, which no valid channel can produce.
Compression compression(const AffineChannel& t);

/// The fixed set in the coordinates given by Compression::coords.
SpacePtr fixed_space(const Compression& p, const Polytope& fixed);

/// e_gamma . coords, an effect on Omega agreeing with e_gamma on the fixed
/// set. Throws std::invalid_argument if e_gamma leaves [0, u] on `fixed`.
Vec lift_effect(const Compression& p, const Polytope& fixed, const Vec& e_gamma);

struct CesaroOptions {
  double tolerance = 1e-12;
  long max_iterations = 1000000;
};

struct CesaroResult {
  std::vector<std::vector<double>> matrix;
  /// Doubling steps taken; the average after k steps covers 2^k powers.
  long iterations = 0;
  bool converged = false;
  double last_difference = 0;
};

/// Cesaro limit of (T + ... + T^n) / n in 256-bit floats along n = 2^k,
/// using A_2n = (A_n + T^n A_n) / 2. Stops once two successive differences
/// fall below the tolerance.
CesaroResult cesaro_compression(const AffineChannel& t, const CesaroOptions& options = {});

double max_abs_difference(const std::vector<std::vector<double>>& a, const Matrix& b);

}  // namespace gpt
