#include "gpt/rational.hpp"

#include <cctype>

namespace gpt {

namespace {

bool is_integer_literal(std::string_view s) {
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

mpz_class parse_integer(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  return mpz_class(std::string(s), 10);
}

}  // namespace

Scalar ratio(long num, long den) {
  if (den == 0) throw std::invalid_argument("ratio: zero denominator");
  Scalar q(num, den);
  q.canonicalize();
  return q;
}

Scalar parse_scalar(std::string_view text) {
  const std::string original(text);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  const auto slash = text.find('/');
  const std::string_view num = text.substr(0, slash);
  const std::string_view den = slash == std::string_view::npos ? std::string_view{"1"} : text.substr(slash + 1);
  if (!is_integer_literal(num) || !is_integer_literal(den) || den.front() == '-' || den.front() == '+') {
    throw ParseError("malformed rational '" + original + "' (expected p or p/q with integers)");
  }
  mpz_class d = parse_integer(den);
  if (d == 0) throw ParseError("malformed rational '" + original + "' (zero denominator)");
  Scalar q(parse_integer(num), d);
  q.canonicalize();
  return q;
}

std::string to_string(const Scalar& x) { return x.get_str(); }

std::string to_string(const Vec& v) {
  std::string out = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += v[i].get_str();
  }
  return out + ")";
}

Vec zeros(std::size_t n) { return Vec(n, Scalar(0)); }

Vec unit_vector(std::size_t n, std::size_t i) {
  Vec v = zeros(n);
  v.at(i) = 1;
  return v;
}

Scalar dot(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: dimension mismatch");
  Scalar s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (sgn(a[i]) != 0 && sgn(b[i]) != 0) s += a[i] * b[i];
  }
  return s;
}

Vec add(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw std::invalid_argument("add: dimension mismatch");
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

Vec sub(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw std::invalid_argument("sub: dimension mismatch");
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

Vec scale(const Vec& a, const Scalar& s) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] * s;
  return r;
}

bool is_zero(const Vec& v) {
  for (const auto& x : v) {
    if (sgn(x) != 0) return false;
  }
  return true;
}

Vec kron(const Vec& a, const Vec& b) {
  Vec r;
  r.reserve(a.size() * b.size());
  for (const auto& x : a) {
    for (const auto& y : b) r.push_back(x * y);
  }
  return r;
}

Vec primitive(const Vec& v) {
  mpz_class den = 1;
  for (const auto& x : v) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), x.get_den_mpz_t());
  mpz_class g = 0;
  for (const auto& x : v) {
    mpz_class n = x.get_num() * (den / x.get_den());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), n.get_mpz_t());
  }
  if (g == 0) return v;
  Vec r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    mpz_class n = v[i].get_num() * (den / v[i].get_den());
    r[i] = Scalar(mpz_class(n / g));
  }
  return r;
}

}  // namespace gpt
