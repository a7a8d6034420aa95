#include "phnls/diagnostics.hpp"
#include "phnls/error.hpp"
#include "phnls/ground_state.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace phnls;
using namespace phnls::test;

namespace {

constexpr double pi = std::numbers::pi;

const GroundStateResult &ground() {
  static const GroundStateResult gs = petviashvili(d2(), grid2(32, 512, 20.0));
  return gs;
}

TraceSample sample(double t, double gradx, double l2s2s2, double b1, double tail = 0.0) {
  TraceSample s;
  s.t = t;
  s.gradx_sq = gradx;
  s.L2s2s2 = l2s2s2;
  s.profile_B1 = b1;
  s.tail = tail;
  return s;
}

/// Smooth bump supported in |z| < w.
double bump(double z, double w) {
  const double x = z / w;
  return std::abs(x) < 1.0 ? std::exp(-1.0 / (1.0 - x * x)) : 0.0;
}

} // namespace

TEST_SUITE("diagnostics") {
  TEST_CASE("radial profiles meet their constraints") {
    for (int i = 0; i <= 5000; ++i) {
      const double r = 5.0 * i / 5000.0;
      const auto m = profile::mass(r);
      CHECK(m.phi >= 0.0);
      CHECK(m.phi <= 1.0);
      CHECK(m.d1 >= 0.0);
      CHECK(m.d1 <= 4.0 + 1e-12);
      if (r <= 0.5)
        CHECK(m.phi == 0.0);
      if (r >= 1.0)
        CHECK(m.phi == 1.0);

      const auto q = profile::quadratic(r);
      CHECK(q.phi >= -1e-14);
      CHECK(q.phi <= r * r + 1e-14);
      CHECK(q.d2 <= 2.0 + 1e-12);
      if (r <= 1.0)
        CHECK(q.phi == doctest::Approx(r * r).epsilon(1e-14));
      if (r >= profile::quadratic_support)
        CHECK(q.phi == 0.0);

      const double s = 2.5 * i / 5000.0 - 1.25;
      const auto th = profile::theta(s);
      CHECK(std::abs(th.phi) <= std::abs(s) + 1e-14);
      CHECK(std::abs(th.phi) <= 2.0);
      CHECK(std::abs(th.d1) <= 4.0 + 1e-12);
      if (std::abs(s) <= 1.0)
        CHECK(th.phi == doctest::Approx(s).epsilon(1e-14));
      if (std::abs(s) >= std::cbrt(2.0))
        CHECK(th.phi == 0.0);
    }
  }

  TEST_CASE("cutoffs must fit the box") {
    const auto g = grid2(16, 256, 32.0);
    CHECK_NOTHROW(make_cutoff(*g, CutoffKind::QuadraticVirial, 4.0));
    CHECK_THROWS_AS(make_cutoff(*g, CutoffKind::QuadraticVirial, 5.0), ValidationError);
    CHECK_THROWS_AS(make_cutoff(*g, CutoffKind::MassCutoff, 16.0), ValidationError);
    CHECK_THROWS_AS(make_cutoff(*g, CutoffKind::MassCutoff, -1.0), ValidationError);
  }

  TEST_CASE("classification of scaled ground states") {
    const auto &gs = ground();
    const auto half = classify(gs.Q * cplx(0.5), gs.beta);
    const auto r = evaluate(gs.Q * cplx(0.5));
    CHECK(half.S == doctest::Approx(r.S).epsilon(1e-14));
    CHECK(half.P == doctest::Approx(r.P).epsilon(1e-14));
    CHECK(r.S < gs.beta);
    CHECK(half.membership == (r.P >= 0.0 ? Membership::KPlus : Membership::KMinus));
    CHECK(half.membership == Membership::KPlus);
    CHECK_FALSE(half.sign_disagreement);

    CHECK(classify(gs.Q, gs.beta).membership == Membership::OutOfScope);

    const auto km = classify(k_minus_sample(gaussian(d2(), gs.Q.grid_ptr()), gs.beta), gs.beta);
    CHECK(km.membership == Membership::KMinus);
    REQUIRE(km.lemma38_bound.has_value());
    CHECK(km.lemma38_holds);
    CHECK(km.P <= *km.lemma38_bound + 1e-6);

    auto defocusing = d2();
    defocusing.lambda = 1;
    const auto f = gaussian(defocusing, grid2());
    CHECK(classify(f, 10.0).membership == Membership::OutOfScope);
  }

  TEST_CASE("virial split on the exact quadratic region") {
    const auto g = grid2(32, 512, 64.0);
    const auto f = gaussian(d2(), g, {.amplitude = 1.5, .velocity = {2 * pi * 3 / 64.0}});
    const auto c = make_cutoff(*g, CutoffKind::QuadraticVirial, 8.0);
    const auto v = virial_series(f, c);
    const double scale = std::abs(v.V2) + 1.0;
    CHECK(std::abs(v.R1) < 1e-8 * scale);
    CHECK(std::abs(v.R2) < 1e-8 * scale);
    CHECK(std::abs(v.R3) < 1e-8 * scale);
    CHECK(std::abs(v.V2 - 4.0 * v.P) < 1e-8 * scale);
    CHECK(v.P == doctest::Approx(evaluate(f).P).epsilon(1e-10));
  }

  TEST_CASE("virial forms agree and the first remainder is nonpositive") {
    const auto g = grid2(24, 256, 32.0);
    const auto c = make_cutoff(*g, CutoffKind::QuadraticVirial, 2.0);
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const auto f = random_field(d2(), g, seed) * cplx(2.0);
      const auto v = virial_series(f, c);
      CHECK(std::abs(v.V2 - v.V2_split) <= 1e-10 * std::max(1.0, std::abs(v.V2)));
      CHECK(v.R1 <= 1e-12);
    }
  }

  TEST_CASE("first virial derivative matches the linear flow") {
    const auto g = grid2(24, 256, 32.0);
    const auto c = make_cutoff(*g, CutoffKind::QuadraticVirial, 2.0);
    const auto f = random_field(d2(), g, 4);
    const double h = 1e-4;
    const double fd = (cutoff_mass(linear_evolve(f, h), c) - cutoff_mass(linear_evolve(f, -h), c)) / (2 * h);
    CHECK(fd == doctest::Approx(virial_series(f, c).V1).epsilon(1e-6));
  }

  TEST_CASE("mass outside a compactly supported field") {
    const auto g = grid2(16, 256, 32.0);
    const auto f = factorized_h0(d2(), g, [](std::span<const double> z) { return cplx(bump(z[0], 2.0)); });
    CHECK(mass_outside(f, 4.0) == 0.0);
    CHECK(mass_outside(f, 1.0) > 0.0);
  }

  TEST_CASE("mass leakage bound along a linear run") {
    const auto g = grid2(24, 512, 64.0);
    const auto u0 = gaussian(d2(), g, {.amplitude = 1.0, .velocity = {2 * pi * 4 / 64.0}});
    const auto c = make_cutoff(*g, CutoffKind::MassCutoff, 8.0);
    const auto c2 = make_cutoff(*g, CutoffKind::MassCutoff, 16.0);
    std::vector<double> times, V, V2;
    double k0 = 0.0;
    for (int i = 0; i <= 40; ++i) {
      const double t = 0.1 * i;
      const auto u = linear_evolve(u0, t);
      times.push_back(t);
      V.push_back(cutoff_mass(u, c));
      V2.push_back(cutoff_mass(u, c2));
      k0 = std::max(k0, std::sqrt(evaluate(u).gradx_sq()));
    }
    const double m0 = evaluate(u0).M;
    const auto r = leakage_check(times, V, m0, k0, c);
    CHECK(r.holds);
    CHECK(r.rigorous_holds);
    CHECK(r.min_margin >= 0.0);
    const auto r2 = leakage_check(times, V2, m0, k0, c2);
    const double slope = (r.bound.back() - r.bound.front()) / times.back();
    const double slope2 = (r2.bound.back() - r2.bound.front()) / times.back();
    CHECK(slope2 == doctest::Approx(slope / 2).epsilon(1e-12));
  }

  TEST_CASE("truncated centre of mass") {
    const double L = 32.0;
    const auto g = grid2(16, 256, L);
    const auto c = make_cutoff(*g, CutoffKind::CenterOfMass, 8.0);
    const auto even = center_of_mass(gaussian(d2(), g, {.amplitude = 1.3}), c);
    CHECK(std::abs(even.gamma[0]) < 1e-14);
    CHECK(std::abs(even.rate[0]) < 1e-14);

    const double v = 2 * pi * 2 / L;
    const auto moving = gaussian(d2(), g, {.amplitude = 1.0, .velocity = {v}});
    const auto r = evaluate(moving);
    const double h = 1e-3;
    const double fd =
        (center_of_mass(step_strang(moving, 0.0, h), c).gamma[0] - center_of_mass(step_strang(moving, 0.0, -h), c).gamma[0]) /
        (2 * h);
    CHECK(fd == doctest::Approx(2 * r.G[0]).epsilon(1e-4));
    CHECK(center_of_mass(moving, c).rate[0] == doctest::Approx(2 * r.G[0]).epsilon(1e-10));

    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const auto f = galilean_boost(random_field(d2(), g, seed)).boosted;
      const auto cm = center_of_mass(f, c);
      CHECK(std::abs(cm.rate[0]) <= cm.energy_bound[0] + 1e-12);
      CHECK(std::abs(cm.rate[0]) <= cm.bound[0] + 1e-12);
    }
  }

  TEST_CASE("detector on zero data") {
    EvolveOptions opt;
    opt.dt = 1e-2;
    const auto tr = evolve(Field::zeros(d2(), grid2(16, 64, 20.0)), 1.0, opt);
    CHECK(detect(tr).outcome == Outcome::GlobalScattering);
  }

  TEST_CASE("detector on synthetic traces") {
    EvolutionTrace blow;
    for (int i = 0; i <= 10; ++i)
      blow.samples.push_back(sample(0.1 * i, 1.0 + i, 1.0, 1.0));
    blow.samples.push_back(sample(1.1, 3000.0, 1.0, 1.0));
    blow.reason = Termination::BlowupTrigger;
    const auto vb = detect(blow);
    CHECK(vb.outcome == Outcome::FiniteTimeBlowup);
    REQUIRE(vb.trigger_time.has_value());
    CHECK(*vb.trigger_time == doctest::Approx(1.1));

    EvolutionTrace invalid = blow;
    invalid.samples.back().tail = 0.5;
    CHECK(detect(invalid).outcome == Outcome::Undetermined);
    CHECK_FALSE(detect(invalid).valid);

    EvolutionTrace decay;
    for (int i = 0; i <= 100; ++i)
      decay.samples.push_back(sample(0.1 * i, 1.0, std::exp(-0.5 * i), 2.0));
    CHECK(detect(decay).outcome == Outcome::GlobalScattering);

    EvolutionTrace grow;
    for (int i = 0; i <= 100; ++i)
      grow.samples.push_back(sample(0.1 * i, std::pow(1.6, 0.05 * i), 1.0, 2.0 + 0.1 * i));
    CHECK(detect(grow).outcome == Outcome::GrowAlongSequence);

    EvolutionTrace flat;
    for (int i = 0; i <= 100; ++i)
      flat.samples.push_back(sample(0.1 * i, 1.0, 1.0, 2.0 + std::sin(i)));
    CHECK(detect(flat).outcome == Outcome::Undetermined);
  }

  TEST_CASE("windowed Strichartz sum of a constant norm") {
    const int N = 6;
    const double c = 0.7, p = 48.0 / 5, q = 24.0;
    std::vector<double> t, n;
    for (int i = 0; i <= 6000; ++i) {
      t.push_back(pi * N * i / 6000.0);
      n.push_back(c);
    }
    const auto s = windowed_strichartz(t, n, p, q);
    const double interior = std::pow(2 * pi, p / q) * std::pow(c, p);
    const double edge = std::pow(pi, p / q) * std::pow(c, p);
    CHECK(s.total == doctest::Approx((N - 1) * interior + 2 * edge).epsilon(1e-12));
    for (auto [gam, v] : s.windows)
      if (gam >= 1 && gam <= N - 1)
        CHECK(v == doctest::Approx(interior).epsilon(1e-12));

    const auto z = windowed_strichartz(t, std::vector<double>(t.size(), 0.0), p, q);
    CHECK(z.total == 0.0);
    CHECK(z.tail_share(5) == 0.0);
  }
}
