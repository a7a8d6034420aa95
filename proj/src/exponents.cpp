#include "phnls/exponents.hpp"

#include "phnls/error.hpp"

#include <cmath>
#include <stdexcept>

namespace phnls {

namespace {

const Rational kHalf(1, 2);

std::optional<std::int64_t> exact_sqrt(std::int64_t v) {
  if (v < 0)
    return std::nullopt;
  auto root = static_cast<std::int64_t>(std::llround(std::sqrt(static_cast<double>(v))));
  for (std::int64_t c = root > 0 ? root - 1 : 0; c <= root + 1; ++c)
    if (c * c == v)
      return c;
  return std::nullopt;
}

void require(bool condition, const char *what) {
  if (!condition)
    throw std::logic_error(std::string("exponent identity violated: ") + what);
}

} // namespace

std::string SigmaCritical::description() const {
  return "positive root of " + std::to_string(a) + "*s^2 + " + std::to_string(b) + "*s - " + std::to_string(-c);
}

SigmaCritical sigma_c(int d) {
  if (d < 1)
    throw ValidationError("sigma_c: d must be positive");
  SigmaCritical sc;
  sc.d = d;
  sc.a = 2 * d;
  sc.b = d - 2;
  sc.c = -2;
  const std::int64_t disc = sc.b * sc.b - 4 * sc.a * sc.c; // d² + 12d + 4
  sc.value = (-static_cast<double>(sc.b) + std::sqrt(static_cast<double>(disc))) / (2.0 * static_cast<double>(sc.a));
  if (const auto root = exact_sqrt(disc))
    sc.exact = Rational(-sc.b + *root, 2 * sc.a);

  // The polynomial is increasing on σ > 0 with value −2 at 0, so the root
  // lies below 2/d iff the polynomial is positive there.
  const Rational two_over_d(2, d);
  const Rational at = Rational(sc.a) * two_over_d * two_over_d + Rational(sc.b) * two_over_d + Rational(sc.c);
  require(at > Rational(0), "sigma_c(d) < 2/d");
  return sc;
}

Rational conjugate(const Rational &x) {
  if (x <= Rational(1))
    throw std::domain_error("conjugate: exponent must exceed 1, got " + x.str());
  return x / (x - Rational(1));
}

ExponentSet exponent_set(int d, int n, const Rational &sigma) {
  const ModelParams params{d, n, sigma, -1};
  if (!validate(params).strichartz_window)
    throw ValidationError("exponent_set: sigma = " + sigma.str() + " outside 2/(d-n) <= sigma < 2/(d-2) for d=" +
                          std::to_string(d) + ", n=" + std::to_string(n));

  const Rational one(1);
  const Rational two(2);
  const Rational dd(d);
  const Rational free(d - n);
  const Rational nn(n);
  const Rational &s = sigma;
  const Rational numer = Rational(4) * s * (s + one);

  ExponentSet e;
  e.d = d;
  e.n = n;
  e.sigma = sigma;
  e.q_tilde = numer / (two * dd * s * s + s * (dd - two) - two);
  e.p_tilde = numer / (two * dd * s * s + s * (dd - two - nn) - two * (nn * s * s + one));
  e.p = numer / (two * s + two - free * s);
  e.q = numer / (two * s + two - dd * s);
  e.r = two * s + two;
  e.p0 = (Rational(4) * s + Rational(4)) / (free * s);
  e.q0 = (Rational(4) * s + Rational(4)) / (dd * s);
  e.s = kHalf * (dd / two - s.reciprocal());
  e.delta = free * (kHalf - e.r.reciprocal());
  e.sigma_critical = sigma_c(d);

  const Rational two_sigma_plus_one = two * s + one;
  require(e.q == two_sigma_plus_one * conjugate(e.q_tilde), "q = (2σ+1) q̃'");
  require(e.p == two_sigma_plus_one * conjugate(e.p_tilde), "p = (2σ+1) p̃'");
  require(e.r == two_sigma_plus_one * conjugate(e.r), "r = (2σ+1) r'");
  require(conjugate(e.p0).reciprocal() == e.p0.reciprocal() + two * s / e.p, "1/p0' = 1/p0 + 2σ/p");
  require(conjugate(e.q0).reciprocal() == e.q0.reciprocal() + two * s / e.q, "1/q0' = 1/q0 + 2σ/q");
  if (Rational(2, d) < s)
    require(Rational(0) < e.s && e.s < kHalf, "0 < s < 1/2");
  require(e.p >= e.p0, "p >= p0");
  require(check_triplet(e.p0, e.q0, e.r, d, n), "(p0, q0, r) triplet");
  return e;
}

bool check_admissible(const Exponent &q, const Exponent &r, int d) {
  if (r.is_infinite())
    return false;
  const Rational &rv = r.value();
  if (rv < Rational(2))
    return false;
  if (d > 2 && !(rv * Rational(d - 2) < Rational(2 * d)))
    return false;
  return Rational(2) * q.reciprocal() == Rational(d) * (kHalf - r.reciprocal());
}

bool check_triplet(const Exponent &p, const Exponent &q, const Exponent &r, int d, int n) {
  if (!check_admissible(q, r, d))
    return false;
  return Rational(2) * p.reciprocal() == Rational(d - n) * (kHalf - r.reciprocal());
}

AcceptabilityReport check_acceptable(const Exponent &p, const Exponent &p_tilde, const Exponent &r, int d, int n) {
  const Rational free(d - n);
  const Rational inv_p = p.reciprocal();
  const Rational inv_pt = p_tilde.reciprocal();
  const Rational inv_r = r.reciprocal();
  const Rational half_free = free * kHalf;

  AcceptabilityReport rep;
  rep.scaling_identity = Rational(2) * inv_p + Rational(2) * inv_pt == free * (Rational(1) - Rational(2) * inv_r);
  rep.p_acceptable = inv_p + free * inv_r < half_free;
  rep.p_tilde_acceptable = inv_pt + free * inv_r < half_free;
  rep.sum_below_one = inv_p + inv_pt < Rational(1);
  return rep;
}

} // namespace phnls
