#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

namespace phnls {

__extension__ typedef __int128 wide_int;

/// Exact rational number with 64-bit numerator and denominator.
///
/// Always stored in lowest terms with a positive denominator. Every
/// arithmetic operation is carried out in 128-bit intermediates and throws
/// std::overflow_error if the reduced result does not fit back into 64 bits.
class Rational {
public:
  constexpr Rational() = default;
  Rational(std::int64_t num, std::int64_t den = 1);

  /// Parses "num/den" or a bare integer "num".
  static Rational parse(std::string_view text);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  bool is_integer() const { return den_ == 1; }

  /// Always "num/den", including den == 1.
  std::string str() const;

  Rational reciprocal() const;

  Rational operator-() const;
  Rational &operator+=(const Rational &rhs);
  Rational &operator-=(const Rational &rhs);
  Rational &operator*=(const Rational &rhs);
  Rational &operator/=(const Rational &rhs);

  friend Rational operator+(Rational lhs, const Rational &rhs) { return lhs += rhs; }
  friend Rational operator-(Rational lhs, const Rational &rhs) { return lhs -= rhs; }
  friend Rational operator*(Rational lhs, const Rational &rhs) { return lhs *= rhs; }
  friend Rational operator/(Rational lhs, const Rational &rhs) { return lhs /= rhs; }

  friend bool operator==(const Rational &, const Rational &) = default;
  friend std::strong_ordering operator<=>(const Rational &lhs, const Rational &rhs);

private:
  static Rational from_wide(wide_int num, wide_int den);

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

std::ostream &operator<<(std::ostream &os, const Rational &r);

/// Lebesgue exponent in [1, ∞], with ∞ as a distinguished value.
///
/// reciprocal() of ∞ is 0 and the Hölder conjugate maps 1 ↔ ∞.
class Exponent {
public:
  Exponent(Rational value); // NOLINT(google-explicit-constructor)
  static Exponent infinity();

  bool is_infinite() const { return infinite_; }
  /// Throws std::domain_error for ∞.
  const Rational &value() const;
  Rational reciprocal() const;
  /// x' = x/(x−1); 1' = ∞ and ∞' = 1. Requires x ≥ 1.
  Exponent conjugate() const;

  std::string str() const;
  double to_double() const;

  friend bool operator==(const Exponent &lhs, const Exponent &rhs);

private:
  Exponent() = default;
  bool infinite_ = false;
  Rational value_{};
};

} // namespace phnls
