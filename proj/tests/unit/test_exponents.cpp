#include "phnls/error.hpp"
#include "phnls/exponents.hpp"

#include <cmath>
#include <doctest.h>

using namespace phnls;

namespace {

Rational R(std::int64_t a, std::int64_t b = 1) { return Rational(a, b); }

/// Identities every exponent set must satisfy.
void check_identities(const ExponentSet &e) {
  const Rational two_sigma_p1 = R(2) * e.sigma + R(1);
  CHECK(e.r == R(2) * e.sigma + R(2));
  CHECK(e.q == two_sigma_p1 * conjugate(e.q_tilde));
  CHECK(e.p == two_sigma_p1 * conjugate(e.p_tilde));
  CHECK(e.r == two_sigma_p1 * conjugate(e.r));
  CHECK(conjugate(e.p0).reciprocal() == e.p0.reciprocal() + R(2) * e.sigma / e.p);
  CHECK(conjugate(e.q0).reciprocal() == e.q0.reciprocal() + R(2) * e.sigma / e.q);
  CHECK(check_triplet(e.p0, e.q0, e.r, e.d, e.n));
  CHECK(check_admissible(e.q0, e.r, e.d));
  CHECK(e.p >= e.p0);
  const auto acc = check_acceptable(e.p, e.p_tilde, e.r, e.d, e.n);
  CHECK(acc.all());
  if (e.sigma > R(2, e.d)) {
    CHECK(e.s > R(0));
    CHECK(e.s < R(1, 2));
  }
  CHECK(e.delta == R(e.d - e.n) * (R(1, 2) - e.r.reciprocal()));
}

} // namespace

TEST_SUITE("exponents") {
  TEST_CASE("reference table d=3, n=1, sigma=3/2") {
    const auto e = exponent_set(3, 1, R(3, 2));
    CHECK(e.r == R(5));
    CHECK(e.q0 == R(20, 9));
    CHECK(e.p0 == R(10, 3));
    CHECK(e.q == R(30));
    CHECK(e.p == R(15, 2));
    CHECK(e.q_tilde == R(15, 13));
    CHECK(e.p_tilde == R(15, 7));
    CHECK(e.s == R(5, 12));
    CHECK(e.delta == R(3, 5));
    check_identities(e);
  }

  TEST_CASE("reference table d=2, n=1, sigma=3") {
    const auto e = exponent_set(2, 1, R(3));
    CHECK(e.r == R(8));
    CHECK(e.q0 == R(8, 3));
    CHECK(e.p0 == R(16, 3));
    CHECK(e.q == R(24));
    CHECK(e.p == R(48, 5));
    CHECK(e.q_tilde == R(24, 17));
    CHECK(e.p_tilde == R(48, 13));
    CHECK(e.s == R(1, 3));
    CHECK(e.delta == R(3, 8));
    check_identities(e);
  }

  TEST_CASE("fifty-point sigma sweeps per (d, n)") {
    for (int d = 2; d <= 5; ++d)
      for (int n = 1; n < d; ++n) {
        const Rational lo = R(2, d - n);
        const bool bounded = d > 2;
        const Rational hi = bounded ? R(2, d - 2) : lo + R(4);
        if (!(lo < hi)) {
          for (int k = 0; k < 50; ++k)
            CHECK_THROWS_AS(exponent_set(d, n, lo + R(k, 50)), ValidationError);
          continue;
        }
        for (int k = 0; k < 50; ++k) {
          const Rational sigma = lo + (hi - lo) * R(k, 50);
          CAPTURE(d);
          CAPTURE(n);
          CAPTURE(sigma.str());
          check_identities(exponent_set(d, n, sigma));
        }
      }
  }

  TEST_CASE("outside the Strichartz window is rejected") {
    CHECK_THROWS_AS(exponent_set(3, 1, R(1, 2)), ValidationError);
    CHECK_THROWS_AS(exponent_set(3, 1, R(2)), ValidationError);
  }

  TEST_CASE("admissibility examples") {
    CHECK_FALSE(check_admissible(R(2), R(2), 3));
    CHECK(check_admissible(Exponent::infinity(), R(2), 3));
    CHECK(check_admissible(Exponent::infinity(), R(2), 2));
    const auto e = exponent_set(2, 1, R(3));
    CHECK_FALSE(check_admissible(e.q, e.r, 2));
  }

  TEST_CASE("broken pair fails the scaling identity") {
    const auto e = exponent_set(3, 1, R(3, 2));
    const auto acc = check_acceptable(e.p, e.p_tilde / R(2), e.r, 3, 1);
    CHECK_FALSE(acc.scaling_identity);
  }

  TEST_CASE("critical sigma as a quadratic root") {
    const auto c3 = sigma_c(3);
    REQUIRE(c3.exact.has_value());
    CHECK(*c3.exact == R(1, 2));
    CHECK(c3.a * 1 + c3.b * 2 + c3.c * 4 == 0);
    const auto c2 = sigma_c(2);
    CHECK_FALSE(c2.exact.has_value());
    CHECK(c2.value == doctest::Approx(std::sqrt(2.0) / 2).epsilon(1e-12));
    for (int d = 2; d <= 5; ++d)
      CHECK(sigma_c(d).value < 2.0 / d);
  }
}
