#include "phnls/runner.hpp"

#include "phnls/error.hpp"
#include "phnls/exponents.hpp"
#include "phnls/field_io.hpp"
#include "phnls/log.hpp"
#include "phnls/samples.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <thread>

namespace phnls {

using json = nlohmann::ordered_json;

namespace {

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::ofstream open_out(const std::string &dir, const std::string &name) {
  std::filesystem::create_directories(dir);
  const auto path = (std::filesystem::path(dir) / name).string();
  std::ofstream os(path);
  if (!os)
    throw std::runtime_error("cannot write '" + path + "'");
  return os;
}

std::string join(const std::string &dir, const std::string &name) {
  return (std::filesystem::path(dir) / name).string();
}

void require_same(const Field &f, const ModelParams &params, const Grid &grid, const std::string &what) {
  if (!(f.params() == params))
    throw ValidationError(what + ": model in the file differs from the config");
  if (!f.grid().same_layout(grid))
    throw ValidationError(what + ": grid in the file differs from the config");
}

bool needs_beta(const ModelParams &p) { return p.focusing() && validate(p).theorem_window; }

json optional_number(const std::optional<double> &x) { return x ? json(*x) : json(nullptr); }

json rational_json(const Rational &r) { return r.str(); }

double relative(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

} // namespace

int exit_status_for(Outcome outcome) {
  switch (outcome) {
  case Outcome::GlobalScattering:
    return exit_status::ok;
  case Outcome::FiniteTimeBlowup:
    return exit_status::finite_time_blowup;
  case Outcome::GrowAlongSequence:
    return exit_status::grow_along_sequence;
  case Outcome::Undetermined:
    return exit_status::undetermined;
  case Outcome::OutOfScope:
    return exit_status::out_of_scope;
  }
  return exit_status::undetermined;
}

void write_json(const std::string &path, const json &j) {
  if (auto parent = std::filesystem::path(path).parent_path(); !parent.empty())
    std::filesystem::create_directories(parent);
  std::ofstream os(path);
  if (!os)
    throw std::runtime_error("cannot write '" + path + "'");
  os << j.dump(2) << '\n';
}

json report_json(const FunctionalReport &r) {
  return json{{"M", r.M},
              {"G", r.G},
              {"E", r.E},
              {"S", r.S},
              {"I", r.I},
              {"P", r.P},
              {"B1sq", r.B1sq},
              {"B1dot_sq", r.B1dot_sq},
              {"L2s2s2", r.L2s2s2},
              {"gradz_sq", r.gradz_sq},
              {"grady_sq", r.grady_sq},
              {"ymom_sq", r.ymom_sq},
              {"sigma_weight", r.sigma_weight}};
}

json verdict_json(const Verdict &v) {
  return json{{"outcome", to_string(v.outcome)},
              {"trigger_time", optional_number(v.trigger_time)},
              {"growth_factor", v.growth_factor},
              {"l2s2s2_final_frac", v.l2s2s2_final_frac},
              {"profile_residual", v.profile_residual},
              {"valid", v.valid}};
}

json classification_json(const Classification &c) {
  json j{{"S", c.S}, {"I", c.I}, {"P", c.P}, {"beta", c.beta}, {"membership", to_string(c.membership)}};
  if (c.lemma38_bound) {
    j["lemma38_bound"] = *c.lemma38_bound;
    j["lemma38_holds"] = c.lemma38_holds;
  }
  if (c.sign_disagreement)
    j["sign_disagreement"] = true;
  return j;
}

BetaValue resolve_beta(const ExperimentConfig &cfg, const GridPtr &grid) {
  if (cfg.beta)
    return {*cfg.beta, "config"};
  if (!cfg.beta_cache.empty()) {
    std::ifstream in(cfg.beta_cache);
    if (!in)
      throw ValidationError("beta cache: cannot open '" + cfg.beta_cache + "'");
    json j;
    try {
      in >> j;
    } catch (const nlohmann::json::parse_error &e) {
      throw ValidationError("beta cache: '" + cfg.beta_cache + "' is not valid JSON");
    }
    if (!j.contains("beta") || !j.contains("model") || !j.contains("grid"))
      throw ValidationError("beta cache: '" + cfg.beta_cache + "' lacks beta, model or grid");
    if (j["model"] != model_json(cfg.model))
      throw ValidationError("beta cache: '" + cfg.beta_cache + "' was computed for a different model");
    if (j["grid"] != grid_json(*grid))
      throw ValidationError("beta cache: '" + cfg.beta_cache + "' was computed on a different grid");
    return {j["beta"].get<double>(), "cache"};
  }
  auto gs = petviashvili(cfg.model, grid, cfg.ground_state);
  if (!gs.converged)
    throw NonConvergence("ground state did not converge while computing beta");
  return {gs.beta, "computed"};
}

Field initial_field(const ExperimentConfig &cfg, const GridPtr &grid) {
  const auto &i = cfg.initial;
  switch (i.kind) {
  case InitialKind::Gaussian: {
    GaussianSpec s;
    s.amplitude = i.amplitude;
    s.width_y = i.width_y;
    s.width_z = i.width_z;
    s.offset_z = i.offset_z;
    s.velocity = i.phase_velocity;
    return gaussian(cfg.model, grid, s);
  }
  case InitialKind::GroundStateScaled: {
    auto gs = petviashvili(cfg.model, grid, cfg.ground_state);
    if (!gs.converged)
      throw NonConvergence("ground state did not converge");
    return gs.Q.from_coefficients() * cplx(i.amplitude, 0.0);
  }
  case InitialKind::File: {
    Field f = read_field(i.path);
    require_same(f, cfg.model, *grid, "initial.path");
    // rebind to the config grid so fields share one layout object
    Field g(cfg.model, grid, f.representation(), f.data());
    return g.from_coefficients() * cplx(i.amplitude, 0.0);
  }
  case InitialKind::Random:
    return random_field(cfg.model, grid, cfg.seed) * cplx(i.amplitude, 0.0);
  }
  throw ValidationError("initial: unknown kind");
}

json run_ground_state(const ExperimentConfig &cfg, const std::string &out_dir) {
  const auto &p = cfg.model;
  if (!p.focusing())
    throw ValidationError("ground-state: needs lambda = -1");
  if (!validate(p).theorem_window)
    warn("ground-state: model lies outside the theorem window");
  auto grid = cfg.grid.make();
  auto gs = petviashvili(p, grid, cfg.ground_state);
  if (!gs.converged)
    throw NonConvergence("ground-state: no convergence after " + std::to_string(gs.iterations) + " iterations");
  const auto &r = gs.report;
  const double k = p.free_dims();
  const auto d10 = minimize_dab(gs.Q, 1.0, 0.0);
  const auto d1m = minimize_dab(gs.Q, 1.0, -2.0 / k);

  json j{{"beta", gs.beta},
         {"residual", gs.residual},
         {"iterations", gs.iterations},
         {"I_of_Q", r.I},
         {"P_of_Q", r.P},
         {"B1sq_of_Q", r.B1sq},
         {"d_1_0", d10.dab},
         {"d_1_0_delta", relative(d10.dab, gs.beta)},
         {"d_1_m", d1m.dab},
         {"d_1_m_b", -2.0 / k},
         {"d_1_m_delta", relative(d1m.dab, gs.beta)},
         {"report", report_json(r)},
         {"model", model_json(p)},
         {"grid", grid_json(*grid)}};
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    write_field(join(out_dir, "Q.nlsfld"), gs.Q);
    write_json(join(out_dir, "ground_state.json"), j);
  }
  return j;
}

json run_classify(const ExperimentConfig &cfg, const std::string &state_path) {
  auto grid = cfg.grid.make();
  Field f;
  if (state_path.empty()) {
    f = initial_field(cfg, grid);
  } else {
    Field file = read_field(state_path);
    require_same(file, cfg.model, *grid, "classify");
    f = file;
  }
  const double beta = needs_beta(cfg.model) ? resolve_beta(cfg, grid).value : 0.0;
  const auto rep = evaluate(f);
  const auto c = classify(rep, cfg.model, beta);
  json j = classification_json(c);
  j["M"] = rep.M;
  j["G"] = rep.G;
  const auto boost = galilean_boost(f);
  const auto brep = evaluate(boost.boosted);
  const auto bc = classify(brep, cfg.model, beta);
  json b = classification_json(bc);
  b["z0"] = boost.z0;
  b["G"] = brep.G;
  j["boost"] = b;
  return j;
}

EvolveRun run_evolve(const ExperimentConfig &cfg, const std::string &out_dir) {
  auto grid = cfg.grid.make();
  const auto &p = cfg.model;
  const Field u0 = initial_field(cfg, grid);
  std::optional<double> beta;
  if (needs_beta(p))
    beta = resolve_beta(cfg, grid).value;

  struct Row {
    double t, S, I, P;
    Membership m;
  };
  std::vector<Row> rows;
  EvolveOptions o;
  o.dt = cfg.time.dt;
  o.sample_stride = cfg.time.sample_stride;
  o.blowup_factor = cfg.detectors.blowup_factor;
  o.tail_valid = cfg.detectors.tail_valid;
  o.monitor = [&](const TraceSample &s, const Field &u) {
    const auto rep = evaluate(u);
    const auto c = classify(rep, p, beta.value_or(0.0));
    rows.push_back({s.t, rep.S, rep.I, rep.P, c.membership});
  };

  EvolveRun run;
  run.trace = evolve(u0, cfg.time.t_max, o);
  run.verdict = detect(run.trace, cfg.detectors);
  run.exit_code = exit_status_for(run.verdict.outcome);
  const auto &s = run.trace.samples;
  const double r = 2.0 * p.sigma_value() + 2.0;

  bool constant = true;
  for (const auto &row : rows)
    constant = constant && row.m == rows.front().m;

  json summary = verdict_json(run.verdict);
  summary["termination"] = to_string(run.trace.reason);
  summary["t_end"] = s.back().t;
  summary["samples"] = s.size();
  summary["dt"] = run.trace.dt;
  summary["beta"] = optional_number(beta);
  summary["membership_initial"] = rows.empty() ? "out_of_scope" : to_string(rows.front().m);
  summary["membership_constant"] = constant;
  {
    double dG = 0.0;
    for (std::size_t a = 0; a < s.front().G.size(); ++a)
      dG = std::max(dG, std::abs(s.back().G[a] - s.front().G[a]));
    summary["conservation"] = {{"mass_rel", relative(s.back().M, s.front().M)},
                               {"energy_rel", relative(s.back().E, s.front().E)},
                               {"momentum_abs", dG}};
  }
  if (validate(p).strichartz_window) {
    const auto e = exponent_set(p.d, p.n, p.sigma);
    std::vector<double> times, norms;
    for (const auto &x : s) {
      times.push_back(x.t);
      norms.push_back(std::pow(x.L2s2s2, 1.0 / r));
    }
    const auto w = windowed_strichartz(times, norms, e.p.to_double(), e.q.to_double());
    summary["strichartz"] = {{"p", e.p.str()},
                             {"q", e.q.str()},
                             {"r", e.r.str()},
                             {"total", w.total},
                             {"windows", w.windows.size()},
                             {"tail_share", w.tail_share(5)}};
  }
  run.summary = summary;

  if (!out_dir.empty()) {
    {
      auto os = open_out(out_dir, "trace.csv");
      os << "t,M,E";
      for (std::size_t a = 0; a < s.front().G.size(); ++a)
        os << ",G" << a + 1;
      os << ",gradx_sq,lr_norm,L2s2s2,ymom_sq,y_virial_rate,profile_B1,tail\n";
      for (const auto &x : s) {
        os << num(x.t) << ',' << num(x.M) << ',' << num(x.E);
        for (double g : x.G)
          os << ',' << num(g);
        os << ',' << num(x.gradx_sq) << ',' << num(std::pow(x.L2s2s2, 1.0 / r)) << ',' << num(x.L2s2s2) << ','
           << num(x.ymom_sq) << ',' << num(x.y_virial_rate) << ',' << num(x.profile_B1) << ',' << num(x.tail)
           << '\n';
      }
    }
    {
      auto os = open_out(out_dir, "plot.csv");
      os << "t,gradx_ratio,l2s2s2_frac,S,I,P,membership\n";
      double lmax = 0.0;
      for (std::size_t i = 0; i < s.size(); ++i) {
        lmax = std::max(lmax, s[i].L2s2s2);
        const double g0 = s.front().gradx_sq;
        os << num(s[i].t) << ',' << num(g0 > 0.0 ? s[i].gradx_sq / g0 : 0.0) << ','
           << num(lmax > 0.0 ? s[i].L2s2s2 / lmax : 0.0);
        if (i < rows.size())
          os << ',' << num(rows[i].S) << ',' << num(rows[i].I) << ',' << num(rows[i].P) << ','
             << to_string(rows[i].m);
        else
          os << ",,,,";
        os << '\n';
      }
    }
    write_json(join(out_dir, "verdict.json"), summary);
  }
  return run;
}

namespace {

bool decisive(const Verdict &v) { return v.valid && v.outcome != Outcome::Undetermined; }

SweepPoint sweep_point(const Field &base, double value, double beta, const ExperimentConfig &cfg) {
  SweepPoint pt;
  pt.value = value;
  const Field u0 = base * cplx(value, 0.0);
  const auto rep = evaluate(u0);
  pt.S = rep.S;
  pt.P = rep.P;
  pt.membership = classify(rep, cfg.model, beta).membership;
  EvolveOptions o;
  o.dt = cfg.time.dt;
  o.sample_stride = cfg.time.sample_stride;
  o.blowup_factor = cfg.detectors.blowup_factor;
  o.tail_valid = cfg.detectors.tail_valid;
  pt.verdict = detect(evolve(u0, cfg.time.t_max, o), cfg.detectors);
  return pt;
}

} // namespace

SweepResult run_sweep(const ExperimentConfig &cfg, const SweepOptions &opt, const std::string &out_dir) {
  if (opt.steps < 1)
    throw ValidationError("sweep: steps must be positive");
  if (opt.bisect && !(opt.width > 0.0))
    throw ValidationError("sweep: bisection width must be positive");
  auto grid = cfg.grid.make();
  ExperimentConfig unit = cfg;
  unit.initial.amplitude = 1.0;
  const Field base = initial_field(unit, grid);
  const double beta = needs_beta(cfg.model) ? resolve_beta(cfg, grid).value : 0.0;

  std::vector<double> values(opt.steps);
  for (int i = 0; i < opt.steps; ++i)
    values[i] = opt.steps == 1 ? opt.from : opt.from + (opt.to - opt.from) * i / (opt.steps - 1);

  SweepResult res;
  res.points.resize(values.size());
  std::vector<std::exception_ptr> errors(values.size());
  std::atomic<std::size_t> next{0};
  const int hw = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  const int workers = std::clamp(opt.workers > 0 ? opt.workers : hw, 1, static_cast<int>(values.size()));
  auto work = [&] {
    for (std::size_t i; (i = next++) < values.size();) {
      try {
        res.points[i] = sweep_point(base, values[i], beta, cfg);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w)
    pool.emplace_back(work);
  work();
  for (auto &t : pool)
    t.join();
  for (auto &e : errors)
    if (e)
      std::rethrow_exception(e);

  if (opt.bisect) {
    for (std::size_t i = 0; i + 1 < res.points.size(); ++i) {
      const auto &a = res.points[i];
      const auto &b = res.points[i + 1];
      if (!decisive(a.verdict) || !decisive(b.verdict) || a.verdict.outcome == b.verdict.outcome)
        continue;
      double lo = a.value, hi = b.value;
      const Outcome low = a.verdict.outcome;
      while (std::abs(hi - lo) > opt.width) {
        const double mid = 0.5 * (lo + hi);
        auto pt = sweep_point(base, mid, beta, cfg);
        const bool ok = decisive(pt.verdict);
        const bool same = pt.verdict.outcome == low;
        res.points.push_back(pt);
        if (!ok)
          break;
        (same ? lo : hi) = mid;
      }
      break;
    }
    std::sort(res.points.begin(), res.points.end(),
              [](const SweepPoint &x, const SweepPoint &y) { return x.value < y.value; });
  }

  const auto &pts = res.points;
  res.inconclusive = std::all_of(pts.begin(), pts.end(), [](const SweepPoint &x) { return !decisive(x.verdict); });
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    if (!res.p_crossing && (pts[i].P >= 0.0) != (pts[i + 1].P >= 0.0))
      res.p_crossing = {pts[i].value, pts[i + 1].value};
    if (!res.dynamic_transition && decisive(pts[i].verdict) && decisive(pts[i + 1].verdict) &&
        pts[i].verdict.outcome != pts[i + 1].verdict.outcome)
      res.dynamic_transition = {pts[i].value, pts[i + 1].value};
  }
  for (std::size_t i = 0; i < pts.size() && !res.membership_flip; ++i) {
    if (pts[i].membership != Membership::KPlus)
      continue;
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      if (pts[j].membership == Membership::KPlus)
        break;
      if (pts[j].membership == Membership::KMinus) {
        res.membership_flip = {pts[i].value, pts[j].value};
        break;
      }
    }
  }
  if (res.inconclusive)
    warn("sweep: every verdict was undetermined; the sweep is inconclusive");

  if (!out_dir.empty()) {
    auto os = open_out(out_dir, "sweep.csv");
    os << "value,S,P,membership,outcome,growth_factor,trigger_time,valid\n";
    for (const auto &x : pts)
      os << num(x.value) << ',' << num(x.S) << ',' << num(x.P) << ',' << to_string(x.membership) << ','
         << to_string(x.verdict.outcome) << ',' << num(x.verdict.growth_factor) << ','
         << (x.verdict.trigger_time ? num(*x.verdict.trigger_time) : "") << ',' << (x.verdict.valid ? 1 : 0)
         << '\n';
    write_json(join(out_dir, "sweep.json"), sweep_json(res));
  }
  return res;
}

json sweep_json(const SweepResult &r) {
  auto bracket = [](const std::optional<std::pair<double, double>> &b) {
    return b ? json::array({b->first, b->second}) : json(nullptr);
  };
  json pts = json::array();
  for (const auto &x : r.points)
    pts.push_back({{"value", x.value},
                   {"S", x.S},
                   {"P", x.P},
                   {"membership", to_string(x.membership)},
                   {"verdict", verdict_json(x.verdict)}});
  return json{{"points", pts},
              {"p_crossing", bracket(r.p_crossing)},
              {"membership_flip", bracket(r.membership_flip)},
              {"dynamic_transition", bracket(r.dynamic_transition)},
              {"inconclusive", r.inconclusive}};
}

json exponents_json(const ModelParams &params) {
  check(params);
  const auto e = exponent_set(params.d, params.n, params.sigma);
  const int d = params.d, n = params.n;
  const Rational s2p1 = Rational(2) * e.sigma + Rational(1);
  const auto acc = check_acceptable(e.p, e.p_tilde, e.r, d, n);
  const auto &c = e.sigma_critical;
  json sc{{"d", c.d},
          {"a", c.a},
          {"b", c.b},
          {"c", c.c},
          {"value", c.value},
          {"exact", c.exact ? json(c.exact->str()) : json(nullptr)},
          {"description", c.description()}};
  json checks{
      {"admissible_q_r", check_admissible(e.q, e.r, d)},
      {"admissible_q_tilde_r", check_admissible(e.q_tilde, e.r, d)},
      {"admissible_q0_r", check_admissible(e.q0, e.r, d)},
      {"triplet_p_q_r", check_triplet(e.p, e.q, e.r, d, n)},
      {"triplet_p0_q0_r", check_triplet(e.p0, e.q0, e.r, d, n)},
      {"holder_q", e.q == s2p1 * conjugate(e.q_tilde)},
      {"holder_p", e.p == s2p1 * conjugate(e.p_tilde)},
      {"holder_r", e.r == s2p1 * conjugate(e.r)},
      {"dual_p0", conjugate(e.p0).reciprocal() == e.p0.reciprocal() + Rational(2) * e.sigma / e.p},
      {"dual_q0", conjugate(e.q0).reciprocal() == e.q0.reciprocal() + Rational(2) * e.sigma / e.q},
      {"acceptable",
       {{"scaling_identity", acc.scaling_identity},
        {"p_acceptable", acc.p_acceptable},
        {"p_tilde_acceptable", acc.p_tilde_acceptable},
        {"sum_below_one", acc.sum_below_one},
        {"all", acc.all()}}}};
  return json{{"d", d},
              {"n", n},
              {"sigma", rational_json(e.sigma)},
              {"q_tilde", rational_json(e.q_tilde)},
              {"p_tilde", rational_json(e.p_tilde)},
              {"p", rational_json(e.p)},
              {"q", rational_json(e.q)},
              {"r", rational_json(e.r)},
              {"p0", rational_json(e.p0)},
              {"q0", rational_json(e.q0)},
              {"s", rational_json(e.s)},
              {"delta", rational_json(e.delta)},
              {"sigma_c", sc},
              {"checks", checks}};
}

DecayFit linear_decay(const Field &u0, double t0, double t1, int samples) {
  if (!(t0 > 0.0) || !(t1 > t0) || samples < 2)
    throw ValidationError("linear_decay: need 0 < t0 < t1 and at least two samples");
  const auto &p = u0.params();
  DecayFit fit;
  fit.r = 2.0 * p.sigma_value() + 2.0;
  fit.delta = p.free_dims() * (0.5 - 1.0 / fit.r);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < samples; ++i) {
    const double t = t0 * std::pow(t1 / t0, static_cast<double>(i) / (samples - 1));
    const double lr = std::pow(evaluate(linear_evolve(u0, t)).L2s2s2, 1.0 / fit.r);
    fit.times.push_back(t);
    fit.lr_norms.push_back(lr);
    const double x = std::log(t), y = std::log(lr);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double m = samples;
  fit.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  fit.relative_error = std::abs(fit.slope + fit.delta) / fit.delta;
  return fit;
}

json run_linear_decay(const ExperimentConfig &cfg, const std::string &out_dir) {
  auto grid = cfg.grid.make();
  const Field u0 = initial_field(cfg, grid);
  const auto fit = linear_decay(u0);
  const auto &p = cfg.model;
  json delta_exact = nullptr;
  if (validate(p).strichartz_window)
    delta_exact = exponent_set(p.d, p.n, p.sigma).delta.str();
  json j{{"r", fit.r},
         {"delta", fit.delta},
         {"delta_exact", delta_exact},
         {"slope", fit.slope},
         {"relative_error", fit.relative_error},
         {"within_10_percent", fit.relative_error <= 0.1},
         {"times", fit.times},
         {"lr_norms", fit.lr_norms},
         {"model", model_json(p)},
         {"grid", grid_json(*grid)}};
  if (!out_dir.empty())
    write_json(join(out_dir, "linear_decay.json"), j);
  return j;
}

} // namespace phnls
