#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

namespace coneasym {

/// Exact rational number with 64-bit numerator and denominator.
///
/// Always normalized: gcd(num, den) == 1 and den > 0. Arithmetic that would
/// overflow throws std::overflow_error; callers that only want exactness
/// opportunistically catch it and fall back to floating point.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t num, std::int64_t den = 1);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  bool is_integer() const { return den_ == 1; }

  Rational operator-() const;
  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);
  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }

  friend bool operator==(const Rational& a, const Rational& b) = default;
  friend bool operator<(const Rational& a, const Rational& b);
  friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
  friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

  std::string str() const;
  /// Parses "p" or "p/q".
  static Rational parse(const std::string& text);

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

/// Exact square root if r is the square of a rational, else nullopt.
std::optional<Rational> exact_sqrt(const Rational& r);

/// Recognizes x as p/q with q <= max_den if |x - p/q| <= tol * max(1, |x|).
std::optional<Rational> recognize_rational(double x, std::int64_t max_den = 10000,
                                           double tol = 1e-14);

/// A real number carried as a double, plus its exact rational value when known.
struct ExactReal {
  double value = 0.0;
  std::optional<Rational> exact;

  ExactReal() = default;
  ExactReal(double v) : value(v) {}
  ExactReal(const Rational& r) : value(r.to_double()), exact(r) {}
  ExactReal(double v, std::optional<Rational> r) : value(v), exact(std::move(r)) {}

  bool is_exact() const { return exact.has_value(); }
};

/// Combines two optionally exact values; the result is exact only if both are
/// and the rational operation does not overflow.
template <class Op>
std::optional<Rational> exact_combine(const std::optional<Rational>& a,
                                      const std::optional<Rational>& b, Op op) {
  if (!a || !b) return std::nullopt;
  try {
    return op(*a, *b);
  } catch (const std::overflow_error&) {
    return std::nullopt;
  }
}

}  // namespace coneasym
