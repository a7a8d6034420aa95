#include "phnls/field_io.hpp"
#include "phnls/runner.hpp"
#include "support.hpp"

#include <doctest.h>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace phnls;
using namespace phnls::test;
using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

std::string scratch(const std::string &name) {
  const auto dir = fs::temp_directory_path() / ("phnls_unit_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir.string();
}

std::string slurp(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ExperimentConfig base_config() {
  return parse_config(json::parse(R"({
    "model": {"d": 2, "n": 1, "sigma": "3/1", "lambda": -1},
    "grid": {"hermite_modes": 32, "z_points": [512], "z_length": [20.0]},
    "time": {"dt": 1e-3, "t_max": 0.2, "sample_stride": 20},
    "initial": {"kind": "gaussian", "amplitude": 1.0}
  })"));
}

/// Ground state summary and field, solved once per process.
const std::string &ground_dir() {
  static const std::string dir = [] {
    const auto d = scratch("ground");
    run_ground_state(base_config(), d);
    return d;
  }();
  return dir;
}

} // namespace

TEST_SUITE("runner") {
  TEST_CASE("exit status per outcome") {
    CHECK(exit_status_for(Outcome::GlobalScattering) == 0);
    CHECK(exit_status_for(Outcome::FiniteTimeBlowup) == 10);
    CHECK(exit_status_for(Outcome::GrowAlongSequence) == 11);
    CHECK(exit_status_for(Outcome::Undetermined) == 12);
    CHECK(exit_status_for(Outcome::OutOfScope) == 13);
  }

  TEST_CASE("ground-state summary is converged and reproducible") {
    const auto &dir = ground_dir();
    const auto first = slurp(dir + "/ground_state.json");
    const auto j = json::parse(first);
    CHECK(std::abs(j["I_of_Q"].get<double>()) < 1e-7 * j["B1sq_of_Q"].get<double>());
    CHECK(std::abs(j["P_of_Q"].get<double>()) < 1e-7 * j["B1sq_of_Q"].get<double>());
    CHECK(j["residual"].get<double>() < 1e-8);
    CHECK(j["d_1_0_delta"].get<double>() < 1e-4);
    CHECK(j["d_1_m_delta"].get<double>() < 1e-4);
    const auto again = scratch("ground_again");
    run_ground_state(base_config(), again);
    CHECK(slurp(again + "/ground_state.json") == first);
    CHECK(slurp(again + "/Q.nlsfld") == slurp(dir + "/Q.nlsfld"));
  }

  TEST_CASE("defocusing ground state is refused") {
    auto cfg = base_config();
    cfg.model.lambda = 1;
    CHECK_THROWS_AS(run_ground_state(cfg, ""), ValidationError);
  }

  TEST_CASE("beta resolution and stale caches") {
    auto cfg = base_config();
    const auto grid = cfg.grid.make();
    cfg.beta_cache = ground_dir() + "/ground_state.json";
    const auto cached = resolve_beta(cfg, grid);
    CHECK(cached.source == "cache");
    CHECK(cached.value == json::parse(slurp(cfg.beta_cache))["beta"].get<double>());

    auto other_grid = cfg;
    other_grid.grid.z_points = {256};
    CHECK_THROWS_AS(resolve_beta(other_grid, other_grid.grid.make()), ValidationError);
    auto other_model = cfg;
    other_model.model.sigma = Rational(2);
    CHECK_THROWS_AS(resolve_beta(other_model, grid), ValidationError);

    cfg.beta = 3.0;
    CHECK(resolve_beta(cfg, grid).source == "config");
  }

  TEST_CASE("classification from a state file") {
    auto cfg = base_config();
    cfg.beta_cache = ground_dir() + "/ground_state.json";
    const auto q = run_classify(cfg, ground_dir() + "/Q.nlsfld");
    CHECK(q["membership"] == to_string(Membership::OutOfScope));

    const Field Q = read_field(ground_dir() + "/Q.nlsfld");
    const auto half_path = ground_dir() + "/half.nlsfld";
    write_field(half_path, Q * cplx(0.5));
    const auto h = run_classify(cfg, half_path);
    const auto rep = evaluate(Q * cplx(0.5));
    CHECK(h["S"].get<double>() == doctest::Approx(rep.S).epsilon(1e-14));
    CHECK(h["P"].get<double>() == doctest::Approx(rep.P).epsilon(1e-14));
    CHECK(h["membership"] == to_string(rep.P >= 0 ? Membership::KPlus : Membership::KMinus));
    CHECK(h.contains("boost"));

    auto mismatch = cfg;
    mismatch.grid.hermite_modes = 16;
    CHECK_THROWS_AS(run_classify(mismatch, half_path), ValidationError);
  }

  TEST_CASE("boosted state prints its zero-momentum reduction") {
    auto cfg = base_config();
    cfg.beta = 3.3;
    cfg.initial.phase_velocity = {2 * std::numbers::pi * 2 / 20.0};
    const auto j = run_classify(cfg, "");
    CHECK(j["G"][0].get<double>() == doctest::Approx(2 * std::numbers::pi * 2 / 20.0).epsilon(1e-8));
    CHECK(std::abs(j["boost"]["G"][0].get<double>()) < 1e-10);
    CHECK(j["boost"]["z0"][0].get<double>() == doctest::Approx(-2 * std::numbers::pi * 2 / 20.0).epsilon(1e-8));
  }

  TEST_CASE("evolve writes deterministic artefacts") {
    auto cfg = base_config();
    cfg.beta = 3.3;
    cfg.initial.amplitude = 0.5;
    const auto a = scratch("evolve_a");
    const auto b = scratch("evolve_b");
    const auto ra = run_evolve(cfg, a);
    run_evolve(cfg, b);
    for (const char *name : {"trace.csv", "plot.csv", "verdict.json"}) {
      CHECK(fs::exists(a + "/" + name));
      CHECK(slurp(a + "/" + name) == slurp(b + "/" + name));
    }
    CHECK(ra.exit_code == exit_status_for(ra.verdict.outcome));
    const auto header = slurp(a + "/trace.csv").substr(0, 80);
    CHECK(header.rfind("t,M,E,G1,gradx_sq,lr_norm,L2s2s2", 0) == 0);
    CHECK(ra.summary["membership_initial"] == to_string(Membership::KPlus));
    CHECK(ra.summary["membership_constant"] == true);
  }

  TEST_CASE("single-step sweep equals a plain run") {
    auto cfg = base_config();
    cfg.beta = 3.3;
    cfg.initial.amplitude = 0.8;
    const auto run = run_evolve(cfg, "");
    const auto sweep = run_sweep(cfg, {.from = 0.8, .to = 2.0, .steps = 1}, "");
    REQUIRE(sweep.points.size() == 1);
    const auto &v = sweep.points.front().verdict;
    CHECK(v.outcome == run.verdict.outcome);
    // the sweep rescales a unit-amplitude field, so agreement is to round-off
    CHECK(rel(v.growth_factor, run.verdict.growth_factor) < 1e-10);
    CHECK(rel(v.l2s2s2_final_frac, run.verdict.l2s2s2_final_frac) < 1e-10);
    CHECK(rel(v.profile_residual, run.verdict.profile_residual) < 1e-6);
  }

  TEST_CASE("membership flip brackets the Pohozaev crossing") {
    auto cfg = base_config();
    cfg.beta_cache = ground_dir() + "/ground_state.json";
    cfg.time.t_max = 0.01;
    cfg.time.sample_stride = 5;
    const auto dir = scratch("sweep");
    const auto r = run_sweep(cfg, {.from = 0.5, .to = 3.5, .steps = 31, .workers = 4}, dir);
    REQUIRE(r.points.size() == 31);
    for (std::size_t i = 1; i < r.points.size(); ++i)
      CHECK(r.points[i].value > r.points[i - 1].value);
    REQUIRE(r.p_crossing.has_value());
    REQUIRE(r.membership_flip.has_value());
    CHECK(r.membership_flip->first <= r.p_crossing->first);
    CHECK(r.p_crossing->second <= r.membership_flip->second);
    CHECK(fs::exists(dir + "/sweep.csv"));
    CHECK(fs::exists(dir + "/sweep.json"));
  }

  TEST_CASE("invalid sweep options are rejected") {
    auto cfg = base_config();
    cfg.beta = 3.3;
    CHECK_THROWS_AS(run_sweep(cfg, {.steps = 0}, ""), ValidationError);
    CHECK_THROWS_AS(run_sweep(cfg, {.steps = 2, .bisect = true, .width = 0.0}, ""), ValidationError);
  }

  TEST_CASE("exponent summary uses exact rationals") {
    const auto j = exponents_json({2, 1, Rational(3), -1});
    CHECK(j["p"] == "48/5");
    CHECK(j["q_tilde"] == "24/17");
    CHECK(j["delta"] == "3/8");
    CHECK(j["checks"]["acceptable"]["all"] == true);
    CHECK(j["checks"]["triplet_p0_q0_r"] == true);
  }

  TEST_CASE("linear decay of factorized data matches the one-dimensional fit") {
    const auto g = Grid::make(16, {{4096, 1024.0}});
    const auto u0 = gaussian(d2(), g);
    const auto fit = linear_decay(u0);
    CHECK(fit.relative_error < 0.1);
    CHECK(fit.delta == doctest::Approx(0.375));

    // Closed-form L^r norm of the freely evolving e^{−z²/2}, up to a constant factor.
    const double r = fit.r;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (double t : fit.times) {
      const cplx a(1.0, 2.0 * t);
      const double re = (1.0 / a).real();
      const double lr = std::pow(std::pow(std::abs(a), -r / 2) * std::sqrt(2 * std::numbers::pi / (r * re)), 1.0 / r);
      const double x = std::log(t), y = std::log(lr);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    const double m = static_cast<double>(fit.times.size());
    const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    CHECK(fit.slope == doctest::Approx(slope).epsilon(1e-6));
  }
}
