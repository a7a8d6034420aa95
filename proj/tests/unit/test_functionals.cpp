#include "phnls/error.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace phnls;
using namespace phnls::test;

namespace {

constexpr double pi = std::numbers::pi;

double bisect(double lo, double hi, const std::function<double(double)> &f) {
  double flo = f(lo);
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

} // namespace

TEST_SUITE("functionals") {
  TEST_CASE("unit Gaussian closed forms") {
    const auto r = evaluate(gaussian(d2(), grid2(64, 128, 20.0)));
    const double l = 1.0 / (4 * pi * pi * pi);
    CHECK(rel(r.M, 1.0) < 1e-8);
    CHECK(std::abs(r.G[0]) < 1e-12);
    CHECK(rel(r.grady_sq, 0.5) < 1e-8);
    CHECK(rel(r.gradz_sq, 0.5) < 1e-8);
    CHECK(rel(r.ymom_sq, 0.5) < 1e-8);
    CHECK(rel(r.L2s2s2, l) < 1e-8);
    CHECK(rel(r.B1sq, 2.5) < 1e-8);
    CHECK(rel(r.S, 1.25 - l / 8) < 1e-8);
    CHECK(rel(r.I, 2.5 - l) < 1e-8);
    CHECK(rel(r.P, 1.0 - 0.75 * l) < 1e-8);
    CHECK(rel(r.E + r.M / 2, r.S) < 1e-14);
    CHECK(rel(r.B1sq, r.grady_sq + r.gradz_sq + r.ymom_sq + r.M) < 1e-14);
  }

  TEST_CASE("zero field has zero functionals") {
    const auto r = evaluate(Field::zeros(d2(), grid2()));
    CHECK(r.M == 0.0);
    CHECK(r.S == 0.0);
    CHECK(r.I == 0.0);
    CHECK(r.P == 0.0);
    CHECK(r.B1sq == 0.0);
    CHECK(r.L2s2s2 == 0.0);
  }

  TEST_CASE("Galilean phase shifts momentum and gradient") {
    const double L = 20.0;
    const double v = 2 * pi * 3 / L;
    const auto g = grid2(32, 128, L);
    const auto base = gaussian(d2(), g, {.amplitude = 1.3});
    const auto moved = gaussian(d2(), g, {.amplitude = 1.3, .velocity = {v}});
    const auto a = evaluate(base);
    const auto b = evaluate(moved);
    CHECK(b.M == doctest::Approx(a.M).epsilon(1e-12));
    CHECK(b.L2s2s2 == doctest::Approx(a.L2s2s2).epsilon(1e-12));
    CHECK(b.grady_sq == doctest::Approx(a.grady_sq).epsilon(1e-12));
    CHECK(b.ymom_sq == doctest::Approx(a.ymom_sq).epsilon(1e-12));
    CHECK(b.G[0] == doctest::Approx(a.G[0] + v * a.M).epsilon(1e-10));
    CHECK(b.gradz_sq == doctest::Approx(a.gradz_sq + v * v * a.M).epsilon(1e-10));
  }

  TEST_CASE("scale family basics") {
    const auto f = random_field(d2(), grid2(), 5);
    CHECK(distance(scale_ab(f, {1.0, -2.0, 0.0}), f) < 1e-14);
    const double t = 0.3;
    const auto s = scale_ab(f, {0.7, 0.0, t});
    CHECK(distance(s, f * std::exp(0.7 * t)) < 1e-12 * s.l2_norm());
    CHECK(evaluate(s).M == doctest::Approx(std::exp(1.4 * t) * evaluate(f).M).epsilon(1e-12));
    CHECK(distance(scale_r(f, 1.0), f) < 1e-14);
  }

  TEST_CASE("norm identities of the scale family") {
    const auto p = d2();
    const auto f = gaussian(p, grid2(32, 256, 24.0));
    const double a = 1.0, b = -2.0, lam = 0.1;
    const auto base = evaluate(f);
    const auto s = evaluate(scale_ab(f, {a, b, lam}));
    const int k = p.free_dims();
    const double sg = p.sigma_value();
    CHECK(rel(s.M, std::exp(lam * (2 * a + b * k)) * base.M) < 1e-6);
    CHECK(rel(s.grady_sq, std::exp(lam * (2 * a + b * k)) * base.grady_sq) < 1e-6);
    CHECK(rel(s.ymom_sq, std::exp(lam * (2 * a + b * k)) * base.ymom_sq) < 1e-6);
    CHECK(rel(s.gradz_sq, std::exp(lam * (2 * a + b * (k - 2))) * base.gradz_sq) < 1e-6);
    CHECK(rel(s.L2s2s2, std::exp(lam * ((2 * sg + 2) * a + b * k)) * base.L2s2s2) < 1e-6);
  }

  TEST_CASE("z rescaling and the Pohozaev radius") {
    const auto p = d2();
    const auto f = gaussian(p, grid2(32, 256, 24.0));
    const auto base = evaluate(f);
    const auto s = evaluate(scale_r(f, 2.0));
    CHECK(rel(s.gradz_sq, 4 * base.gradz_sq) < 1e-6);
    CHECK(rel(s.L2s2s2, std::pow(2.0, 3.0) * base.L2s2s2) < 1e-6);
    CHECK(rel(s.M, base.M) < 1e-10);

    const auto amp = gaussian(p, grid2(32, 256, 24.0), {.amplitude = 2.5});
    const auto r = evaluate(amp);
    const double r0 = pohozaev_radius(r, p);
    const double oracle = bisect(1e-3, 1e3, [&](double x) {
      return 2.0 * x * x * r.gradz_sq - 0.75 * std::pow(x, 3.0) * r.L2s2s2;
    });
    CHECK(rel(r0, oracle) < 1e-10);
    const auto at = evaluate(scale_r(amp, r0));
    CHECK(std::abs(at.P) < 1e-6 * at.B1sq);
  }

  TEST_CASE("J reduces to I and P") {
    for (auto [params, g] : {std::pair{d2(), grid2()}, std::pair{d3(), grid3()}}) {
      for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto f = random_field(params, g, seed) * cplx(1.7);
        const auto r = evaluate(f);
        const double scale = std::max(1.0, r.B1sq);
        CHECK(std::abs(J_ab(r, params, 1.0, 0.0) - r.I) < 1e-12 * scale);
        CHECK(std::abs(J_ab(r, params, 1.0, -2.0 / params.free_dims()) - r.P) < 1e-12 * scale);
      }
    }
  }

  TEST_CASE("J matches a central difference of S along the family") {
    const auto p = d2();
    const auto g = grid2(32, 256, 24.0);
    for (std::uint64_t seed : {2u, 7u}) {
      const auto f = random_field(p, g, seed) * cplx(2.0);
      for (auto [a, b] : {std::pair{1.0, 0.0}, std::pair{1.0, -2.0}, std::pair{1.0, -1.0}}) {
        const double J = J_ab(f, a, b);
        auto fd = [&](double h) {
          return (evaluate(scale_ab(f, {a, b, h})).S - evaluate(scale_ab(f, {a, b, -h})).S) / (2 * h);
        };
        const double f1 = fd(1e-2), f2 = fd(1e-3);
        const double e1 = std::abs(f1 - J);
        const double e2 = std::abs(f2 - J);
        CAPTURE(e1);
        CAPTURE(e2);
        // second-order error: ten times smaller h, a hundred times smaller error
        CHECK((e2 < 1e-10 || e1 / e2 == doctest::Approx(100.0).epsilon(0.05)));
        CHECK(std::abs((100.0 * f2 - f1) / 99.0 - J) < 1e-8 * std::max(1.0, std::abs(J)));
      }
    }
  }

  TEST_CASE("B coefficients and admissibility") {
    const auto p = d2();
    const auto c = b_coefficients(p, 1.0, 0.0);
    CHECK(c.denominator == doctest::Approx(8.0));
    CHECK(ScaleParams{1.0, 0.0, 0.0}.admissible(p));
    CHECK(ScaleParams{1.0, -2.0, 0.0}.admissible(p));
    CHECK_FALSE(ScaleParams{1.0, 0.5, 0.0}.admissible(p));
    CHECK_FALSE(ScaleParams{-1.0, 0.0, 0.0}.admissible(p));
    const auto f = random_field(p, grid2(), 4);
    const auto r = evaluate(f);
    CHECK(B_ab(r, p, 1.0, 0.0) == doctest::Approx(r.S - J_ab(r, p, 1.0, 0.0) / 8.0).epsilon(1e-12));
  }

  TEST_CASE("Nehari scaling") {
    const auto g = grid2(64, 128, 20.0);
    const auto n = nehari_scale(gaussian(d2(), g));
    CHECK(rel(n.t, std::pow(10 * pi * pi * pi, 1.0 / 6)) < 1e-8);
    CHECK(std::abs(evaluate(n.scaled).I) < 1e-10 * evaluate(n.scaled).B1sq);
    CHECK(nehari_scale(n.scaled).t == doctest::Approx(1.0).epsilon(1e-10));
    const auto f = random_field(d2(), g, 9);
    const double t = nehari_scale(f).t;
    CHECK(nehari_scale(f * cplx(3.0)).t == doctest::Approx(t / 3.0).epsilon(1e-12));
  }

  TEST_CASE("Galilean boost") {
    const double L = 20.0;
    const auto g = grid2(32, 128, L);
    const auto real = gaussian(d2(), g);
    const auto same = galilean_boost(real);
    CHECK(std::abs(same.z0[0]) < 1e-14);
    CHECK(distance(same.boosted, real) < 1e-14);

    const double v = 2 * pi * 2 / L;
    const auto moving = galilean_boost(gaussian(d2(), g, {.velocity = {v}}));
    CHECK(moving.z0[0] == doctest::Approx(-v).epsilon(1e-10));
    CHECK(distance(moving.boosted, real) < 1e-10);

    const auto wide = Grid::make(16, {{64, 24.0}, {64, 24.0}});
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      for (const auto &f : {random_field(d3(), wide, seed), random_field(d2(), g, seed)}) {
        const auto b = galilean_boost(f);
        for (double G : evaluate(b.boosted).G)
          CHECK(std::abs(G) < 1e-10);
      }
    }
  }

  TEST_CASE("uncertainty bound on random fields") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      const auto r = evaluate(random_field(d2(), grid2(), seed));
      CHECK(r.M <= 2.0 * std::sqrt(r.ymom_sq * r.grady_sq) * (1 + 1e-12));
    }
  }

  TEST_CASE("virial rate of a real field vanishes") {
    CHECK(std::abs(y_virial_rate(gaussian(d2(), grid2()))) < 1e-14);
  }
}
