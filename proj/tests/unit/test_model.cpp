#include "phnls/error.hpp"
#include "phnls/model.hpp"

#include <doctest.h>

using namespace phnls;

TEST_SUITE("model") {
  TEST_CASE("window flags for reference models") {
    const auto a = validate({3, 1, Rational(3, 2), -1});
    CHECK(a.theorem_window);
    CHECK(a.strichartz_window);
    CHECK(a.profile_window);

    const auto b = validate({3, 1, Rational(1), -1});
    CHECK_FALSE(b.theorem_window);
    CHECK(b.strichartz_window);
    CHECK_FALSE(b.profile_window);

    const auto c = validate({2, 1, Rational(3), -1});
    CHECK(c.theorem_window);
    CHECK(c.strichartz_window);
    CHECK(c.profile_window);
  }

  TEST_CASE("defocusing sign leaves only the theorem window") {
    const auto r = validate({3, 1, Rational(3, 2), 1});
    CHECK_FALSE(r.theorem_window);
    CHECK(r.strichartz_window);
  }

  TEST_CASE("energy-critical bound is exclusive") {
    CHECK_FALSE(validate({3, 1, Rational(2), -1}).strichartz_window);
    CHECK_FALSE(energy_critical_sigma(2).has_value());
    CHECK(*energy_critical_sigma(4) == Rational(1));
  }

  TEST_CASE("theorem window implies the other two") {
    for (int d = 2; d <= 5; ++d)
      for (int n = 1; n < d; ++n)
        for (int num = 1; num <= 40; ++num) {
          const ModelParams p{d, n, Rational(num, 8), -1};
          const auto r = validate(p);
          if (r.theorem_window)
            CHECK(r.strichartz_window);
          if (r.profile_window)
            CHECK(r.strichartz_window);
        }
  }

  TEST_CASE("invalid parameters are rejected") {
    CHECK_THROWS_AS(check({1, 1, Rational(1), -1}), ValidationError);
    CHECK_THROWS_AS(check({3, 0, Rational(1), -1}), ValidationError);
    CHECK_THROWS_AS(check({3, 3, Rational(1), -1}), ValidationError);
    CHECK_THROWS_AS(check({3, 1, Rational(0), -1}), ValidationError);
    CHECK_THROWS_AS(check({3, 1, Rational(-1, 2), -1}), ValidationError);
    CHECK_THROWS_AS(check({3, 1, Rational(1), 0}), ValidationError);
    CHECK_THROWS_AS(validate({3, 1, Rational(1), 2}), ValidationError);
  }

  TEST_CASE("rational arithmetic is exact") {
    CHECK(Rational(6, -4) == Rational(-3, 2));
    CHECK(Rational::parse("3/2") + Rational(1, 2) == Rational(2));
    CHECK(Rational::parse("7").str() == "7/1");
    CHECK(Rational(1, 3) < Rational(1, 2));
    CHECK_THROWS(Rational(1, 0));
    CHECK(Exponent(Rational(1)).conjugate().is_infinite());
    CHECK(Exponent::infinity().conjugate() == Exponent(Rational(1)));
    CHECK(Exponent(Rational(8)).conjugate() == Exponent(Rational(8, 7)));
  }
}
