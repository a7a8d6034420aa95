// Command-line front end for the experiment runner.
#include "phnls/error.hpp"
#include "phnls/runner.hpp"

#include <CLI11.hpp>

#include <iostream>

using namespace phnls;
using json = nlohmann::ordered_json;

namespace {

struct Common {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
};

void add_common(CLI::App *sub, Common &c, bool config_required = true) {
  auto *opt = sub->add_option("--config", c.config, "experiment config (JSON)");
  if (config_required)
    opt->required()->check(CLI::ExistingFile);
  sub->add_option("--out", c.out, "output directory (overrides output_dir)");
  sub->add_option("--seed", c.seed, "random seed (overrides seed)");
}

ExperimentConfig load(const Common &c) {
  auto cfg = load_config(c.config);
  if (!c.out.empty())
    cfg.output_dir = c.out;
  if (c.seed)
    cfg.seed = *c.seed;
  return cfg;
}

void print(const json &j) { std::cout << j.dump(2) << '\n'; }

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"NLS with partial harmonic confinement: ground states, classification and dynamics"};
  app.require_subcommand(1);

  Common common;
  auto *gs = app.add_subcommand("ground-state", "solve for Q and beta; writes Q.nlsfld and ground_state.json");
  add_common(gs, common);

  std::string state;
  auto *cl = app.add_subcommand("classify", "K+/K- membership of a state file or the configured initial data");
  add_common(cl, common);
  cl->add_option("--state", state, "field file (defaults to the configured initial data)")
      ->check(CLI::ExistingFile);

  auto *ev = app.add_subcommand("evolve", "integrate the configured initial data and classify the outcome");
  add_common(ev, common);

  SweepOptions sweep;
  std::string param = "amplitude";
  auto *sw = app.add_subcommand("sweep", "amplitude sweep of evolve with optional bisection");
  add_common(sw, common);
  sw->add_option("--param", param, "swept parameter")->check(CLI::IsMember({"amplitude"}));
  sw->add_option("--from", sweep.from, "first value")->required();
  sw->add_option("--to", sweep.to, "last value")->required();
  sw->add_option("--steps", sweep.steps, "number of values")->check(CLI::PositiveNumber);
  sw->add_flag("--bisect", sweep.bisect, "refine the dynamic transition");
  sw->add_option("--width", sweep.width, "bisection width")->check(CLI::PositiveNumber);
  sw->add_option("--workers", sweep.workers, "worker threads (0: hardware)")->check(CLI::NonNegativeNumber);

  ModelParams model;
  std::string sigma;
  auto *ex = app.add_subcommand("exponents", "exact Strichartz exponents and condition checks");
  add_common(ex, common, false);
  ex->add_option("--d", model.d, "dimension");
  ex->add_option("--n", model.n, "confined dimensions");
  ex->add_option("--sigma", sigma, "nonlinearity exponent, e.g. 3/2");

  auto *ld = app.add_subcommand("linear-decay", "fit the L^{2sigma+2} decay of the linear flow over t in [5, 50]");
  add_common(ld, common);

  CLI11_PARSE(app, argc, argv);

  try {
    if (gs->parsed()) {
      const auto cfg = load(common);
      print(run_ground_state(cfg, cfg.output_dir));
    } else if (cl->parsed()) {
      const auto cfg = load(common);
      const auto j = run_classify(cfg, state);
      write_json(cfg.output_dir + "/classify.json", j);
      print(j);
    } else if (ev->parsed()) {
      const auto cfg = load(common);
      const auto run = run_evolve(cfg, cfg.output_dir);
      print(run.summary);
      return run.exit_code;
    } else if (sw->parsed()) {
      const auto cfg = load(common);
      const auto res = run_sweep(cfg, sweep, cfg.output_dir);
      print(sweep_json(res));
      return res.inconclusive ? exit_status::undetermined : exit_status::ok;
    } else if (ex->parsed()) {
      if (!common.config.empty())
        model = load(common).model;
      else if (!sigma.empty())
        model.sigma = Rational::parse(sigma);
      print(exponents_json(model));
    } else if (ld->parsed()) {
      const auto cfg = load(common);
      const auto j = run_linear_decay(cfg, cfg.output_dir);
      print(j);
      return j["within_10_percent"].get<bool>() ? exit_status::ok : exit_status::undetermined;
    }
  } catch (const ValidationError &e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_status::validation_error;
  } catch (const NonConvergence &e) {
    std::cerr << "solver error: " << e.what() << '\n';
    return exit_status::solver_error;
  } catch (const CollapseToZero &e) {
    std::cerr << "solver error: " << e.what() << '\n';
    return exit_status::solver_error;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return exit_status::ok;
}
