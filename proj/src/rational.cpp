#include "phnls/rational.hpp"

#include <charconv>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace phnls {

namespace {

wide_int gcd_wide(wide_int a, wide_int b) {
  if (a < 0)
    a = -a;
  if (b < 0)
    b = -b;
  while (b != 0) {
    const wide_int t = a % b;
    a = b;
    b = t;
  }
  return a;
}

bool fits(wide_int v) {
  return v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max();
}

std::int64_t parse_int(std::string_view text) {
  std::int64_t value = 0;
  const auto *first = text.data();
  const auto *last = text.data() + text.size();
  if (first != last && *first == '+')
    ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || first == last)
    throw std::invalid_argument("rational: cannot parse integer '" + std::string(text) + "'");
  return value;
}

} // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0)
    throw std::domain_error("rational: zero denominator");
  *this = from_wide(num, den);
}

Rational Rational::from_wide(wide_int num, wide_int den) {
  if (den == 0)
    throw std::domain_error("rational: zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const wide_int g = gcd_wide(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  if (num == 0)
    den = 1;
  if (!fits(num) || !fits(den))
    throw std::overflow_error("rational: result exceeds 64-bit range");
  Rational r;
  r.num_ = static_cast<std::int64_t>(num);
  r.den_ = static_cast<std::int64_t>(den);
  return r;
}

Rational Rational::parse(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos)
    return Rational(parse_int(text));
  return Rational(parse_int(text.substr(0, slash)), parse_int(text.substr(slash + 1)));
}

std::string Rational::str() const { return std::to_string(num_) + "/" + std::to_string(den_); }

Rational Rational::reciprocal() const {
  if (num_ == 0)
    throw std::domain_error("rational: reciprocal of zero");
  return from_wide(den_, num_);
}

Rational Rational::operator-() const { return from_wide(-static_cast<wide_int>(num_), den_); }

Rational &Rational::operator+=(const Rational &rhs) {
  *this = from_wide(static_cast<wide_int>(num_) * rhs.den_ + static_cast<wide_int>(rhs.num_) * den_,
                    static_cast<wide_int>(den_) * rhs.den_);
  return *this;
}

Rational &Rational::operator-=(const Rational &rhs) { return *this += -rhs; }

Rational &Rational::operator*=(const Rational &rhs) {
  *this = from_wide(static_cast<wide_int>(num_) * rhs.num_, static_cast<wide_int>(den_) * rhs.den_);
  return *this;
}

Rational &Rational::operator/=(const Rational &rhs) {
  if (rhs.num_ == 0)
    throw std::domain_error("rational: division by zero");
  *this = from_wide(static_cast<wide_int>(num_) * rhs.den_, static_cast<wide_int>(den_) * rhs.num_);
  return *this;
}

std::strong_ordering operator<=>(const Rational &lhs, const Rational &rhs) {
  const wide_int a = static_cast<wide_int>(lhs.num_) * rhs.den_;
  const wide_int b = static_cast<wide_int>(rhs.num_) * lhs.den_;
  if (a < b)
    return std::strong_ordering::less;
  if (a > b)
    return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::ostream &operator<<(std::ostream &os, const Rational &r) { return os << r.str(); }

Exponent::Exponent(Rational value) : value_(value) {}

Exponent Exponent::infinity() {
  Exponent e;
  e.infinite_ = true;
  return e;
}

const Rational &Exponent::value() const {
  if (infinite_)
    throw std::domain_error("exponent: infinite exponent has no rational value");
  return value_;
}

Rational Exponent::reciprocal() const { return infinite_ ? Rational(0) : value_.reciprocal(); }

Exponent Exponent::conjugate() const {
  if (infinite_)
    return Exponent(Rational(1));
  if (value_ < Rational(1))
    throw std::domain_error("exponent: conjugate requires x >= 1, got " + value_.str());
  if (value_ == Rational(1))
    return infinity();
  return Exponent(value_ / (value_ - Rational(1)));
}

std::string Exponent::str() const { return infinite_ ? std::string("inf") : value_.str(); }

double Exponent::to_double() const {
  return infinite_ ? std::numeric_limits<double>::infinity() : value_.to_double();
}

bool operator==(const Exponent &lhs, const Exponent &rhs) {
  if (lhs.infinite_ || rhs.infinite_)
    return lhs.infinite_ == rhs.infinite_;
  return lhs.value_ == rhs.value_;
}

} // namespace phnls
