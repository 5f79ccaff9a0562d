#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace gpt {

/// Exact rational scalar. GMP keeps every value in lowest terms with a
/// positive denominator after each operation.
using Scalar = mpq_class;
using Vec = std::vector<Scalar>;

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Canonical num/den. Prefer this over Scalar(num, den), which GMP does not reduce.
Scalar ratio(long num, long den);

/// Parses "p" or "p/q" with optional sign. Rejects a zero denominator,
/// decimals and stray characters.
Scalar parse_scalar(std::string_view text);

std::string to_string(const Scalar& x);
std::string to_string(const Vec& v);

Vec zeros(std::size_t n);
Vec unit_vector(std::size_t n, std::size_t i);

Scalar dot(const Vec& a, const Vec& b);
Vec add(const Vec& a, const Vec& b);
Vec sub(const Vec& a, const Vec& b);
Vec scale(const Vec& a, const Scalar& s);
bool is_zero(const Vec& v);

/// Kronecker product of coordinate vectors; index (i, j) maps to i * b.size() + j.
Vec kron(const Vec& a, const Vec& b);

/// Scales v to a primitive integer vector with the same direction.
Vec primitive(const Vec& v);

}  // namespace gpt
