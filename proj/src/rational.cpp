#include "coneasym/rational.hpp"

#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace coneasym {

namespace {

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out)) throw std::overflow_error("Rational: multiplication overflow");
  return out;
}

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t out = 0;
  if (__builtin_add_overflow(a, b, &out)) throw std::overflow_error("Rational: addition overflow");
  return out;
}

std::optional<std::int64_t> isqrt_exact(std::int64_t v) {
  if (v < 0) return std::nullopt;
  auto r = static_cast<std::int64_t>(std::llround(std::sqrt(static_cast<long double>(v))));
  for (std::int64_t c = std::max<std::int64_t>(0, r - 2); c <= r + 2; ++c) {
    if (c * c == v) return c;
  }
  return std::nullopt;
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw std::domain_error("Rational: zero denominator");
  if (den < 0) {
    if (num == INT64_MIN || den == INT64_MIN) throw std::overflow_error("Rational: negation overflow");
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num, den);
  num_ = num / g;
  den_ = den / g;
}

Rational Rational::operator-() const {
  if (num_ == INT64_MIN) throw std::overflow_error("Rational: negation overflow");
  return Rational(-num_, den_);
}

Rational operator+(const Rational& a, const Rational& b) {
  const std::int64_t g = std::gcd(a.den_, b.den_);
  const std::int64_t lhs = checked_mul(a.num_, b.den_ / g);
  const std::int64_t rhs = checked_mul(b.num_, a.den_ / g);
  return Rational(checked_add(lhs, rhs), checked_mul(a.den_, b.den_ / g));
}

Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }

Rational operator*(const Rational& a, const Rational& b) {
  const std::int64_t g1 = std::gcd(a.num_, b.den_);
  const std::int64_t g2 = std::gcd(b.num_, a.den_);
  return Rational(checked_mul(a.num_ / g1, b.num_ / g2), checked_mul(a.den_ / g2, b.den_ / g1));
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.num_ == 0) throw std::domain_error("Rational: division by zero");
  return a * Rational(b.den_, b.num_);
}

bool operator<(const Rational& a, const Rational& b) {
  // Denominators are positive, so cross-multiplication preserves order.
  __extension__ using wide = __int128;
  const wide lhs = static_cast<wide>(a.num_) * b.den_;
  const wide rhs = static_cast<wide>(b.num_) * a.den_;
  return lhs < rhs;
}

std::string Rational::str() const {
  std::ostringstream os;
  os << *this;
  return os.str();
}

Rational Rational::parse(const std::string& text) {
  const auto slash = text.find('/');
  try {
    if (slash == std::string::npos) return Rational(std::stoll(text));
    return Rational(std::stoll(text.substr(0, slash)), std::stoll(text.substr(slash + 1)));
  } catch (const std::logic_error&) {
    throw std::invalid_argument("Rational::parse: cannot parse '" + text + "'");
  }
}

std::ostream& operator<<(std::ostream& os, const Rational& r) {
  os << r.num();
  if (r.den() != 1) os << '/' << r.den();
  return os;
}

std::optional<Rational> exact_sqrt(const Rational& r) {
  const auto n = isqrt_exact(r.num());
  const auto d = isqrt_exact(r.den());
  if (!n || !d) return std::nullopt;
  return Rational(*n, *d);
}

std::optional<Rational> recognize_rational(double x, std::int64_t max_den, double tol) {
  if (!std::isfinite(x)) return std::nullopt;
  // Continued-fraction convergents of x.
  double rem = x;
  std::int64_t h0 = 1, h1 = 0, k0 = 0, k1 = 1;
  for (int iter = 0; iter < 64; ++iter) {
    const double a_d = std::floor(rem);
    if (std::abs(a_d) > 9.0e15) return std::nullopt;
    const auto a = static_cast<std::int64_t>(a_d);
    const std::int64_t h = a * h0 + h1;
    const std::int64_t k = a * k0 + k1;
    if (k > max_den) return std::nullopt;
    h1 = h0;
    h0 = h;
    k1 = k0;
    k0 = k;
    const double approx = static_cast<double>(h) / static_cast<double>(k);
    if (std::abs(approx - x) <= tol * std::max(1.0, std::abs(x))) return Rational(h, k);
    const double frac = rem - a_d;
    if (frac == 0.0) return std::nullopt;
    rem = 1.0 / frac;
  }
  return std::nullopt;
}

}  // namespace coneasym
