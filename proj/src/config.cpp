#include "phnls/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace phnls {

using json = nlohmann::ordered_json;

namespace {

const json &require(const json &j, const char *key, const std::string &where) {
  if (!j.is_object() || !j.contains(key))
    throw ConfigError("config: missing key '" + where + key + "'");
  return j.at(key);
}

double number(const json &j, const std::string &name) {
  if (!j.is_number())
    throw ConfigError("config: '" + name + "' must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v))
    throw ConfigError("config: '" + name + "' must be finite");
  return v;
}

double positive(const json &j, const std::string &name) {
  const double v = number(j, name);
  if (!(v > 0.0))
    throw ConfigError("config: '" + name + "' must be positive");
  return v;
}

int integer(const json &j, const std::string &name) {
  if (!j.is_number_integer())
    throw ConfigError("config: '" + name + "' must be an integer");
  return j.get<int>();
}

std::vector<double> numbers(const json &j, const std::string &name) {
  if (!j.is_array())
    throw ConfigError("config: '" + name + "' must be an array");
  std::vector<double> out;
  for (const auto &x : j)
    out.push_back(number(x, name));
  return out;
}

template <typename Fill> void optional_key(const json &j, const char *key, Fill fill) {
  if (j.is_object() && j.contains(key))
    fill(j.at(key));
}

InitialKind kind_from(const std::string &s) {
  if (s == "gaussian")
    return InitialKind::Gaussian;
  if (s == "ground_state_scaled")
    return InitialKind::GroundStateScaled;
  if (s == "file")
    return InitialKind::File;
  if (s == "random")
    return InitialKind::Random;
  throw ConfigError("config: 'initial.kind' must be gaussian, ground_state_scaled, file or random, got '" + s + "'");
}

const char *kind_name(InitialKind k) {
  switch (k) {
  case InitialKind::Gaussian:
    return "gaussian";
  case InitialKind::GroundStateScaled:
    return "ground_state_scaled";
  case InitialKind::File:
    return "file";
  case InitialKind::Random:
    return "random";
  }
  return "?";
}

} // namespace

GridPtr GridConfig::make() const {
  std::vector<ZAxis> axes;
  for (std::size_t a = 0; a < z_points.size(); ++a)
    axes.push_back({z_points[a], z_length[a]});
  return Grid::make(hermite_modes, std::move(axes), quadrature_nodes);
}

ExperimentConfig parse_config(const json &j) {
  if (!j.is_object())
    throw ConfigError("config: top level must be an object");
  ExperimentConfig c;

  const auto &m = require(j, "model", "");
  c.model.d = integer(require(m, "d", "model."), "model.d");
  c.model.n = integer(require(m, "n", "model."), "model.n");
  {
    const auto &s = require(m, "sigma", "model.");
    try {
      c.model.sigma = s.is_string() ? Rational::parse(s.get<std::string>()) : Rational(integer(s, "model.sigma"));
    } catch (const ConfigError &) {
      throw;
    } catch (const std::exception &e) {
      throw ConfigError(std::string("config: 'model.sigma': ") + e.what());
    }
  }
  c.model.lambda = integer(require(m, "lambda", "model."), "model.lambda");
  try {
    check(c.model);
  } catch (const ValidationError &e) {
    throw ConfigError(std::string("config: 'model': ") + e.what());
  }

  const auto &g = require(j, "grid", "");
  c.grid.hermite_modes = integer(require(g, "hermite_modes", "grid."), "grid.hermite_modes");
  for (double x : numbers(require(g, "z_points", "grid."), "grid.z_points")) {
    if (x != std::floor(x) || x < 2)
      throw ConfigError("config: 'grid.z_points' entries must be integers >= 2");
    c.grid.z_points.push_back(static_cast<int>(x));
  }
  c.grid.z_length = numbers(require(g, "z_length", "grid."), "grid.z_length");
  for (double L : c.grid.z_length)
    if (!(L > 0.0))
      throw ConfigError("config: 'grid.z_length' entries must be positive");
  if (c.grid.z_points.size() != c.grid.z_length.size())
    throw ConfigError("config: 'grid.z_points' and 'grid.z_length' differ in length");
  if (static_cast<int>(c.grid.z_points.size()) != c.model.free_dims())
    throw ConfigError("config: 'grid.z_points' needs d - n = " + std::to_string(c.model.free_dims()) + " entries");
  if (c.grid.hermite_modes < 8)
    throw ConfigError("config: 'grid.hermite_modes' must be at least 8");
  optional_key(g, "quadrature_nodes", [&](const json &x) {
    c.grid.quadrature_nodes = integer(x, "grid.quadrature_nodes");
    if (c.grid.quadrature_nodes != 0 && c.grid.quadrature_nodes < c.grid.hermite_modes)
      throw ConfigError("config: 'grid.quadrature_nodes' must be 0 or at least hermite_modes");
  });

  optional_key(j, "time", [&](const json &t) {
    optional_key(t, "dt", [&](const json &x) { c.time.dt = positive(x, "time.dt"); });
    optional_key(t, "t_max", [&](const json &x) { c.time.t_max = positive(x, "time.t_max"); });
    optional_key(t, "sample_stride", [&](const json &x) {
      c.time.sample_stride = integer(x, "time.sample_stride");
      if (c.time.sample_stride < 1)
        throw ConfigError("config: 'time.sample_stride' must be positive");
    });
  });

  optional_key(j, "detectors", [&](const json &d) {
    auto &o = c.detectors;
    optional_key(d, "blowup_factor", [&](const json &x) { o.blowup_factor = positive(x, "detectors.blowup_factor"); });
    optional_key(d, "scatter_frac", [&](const json &x) { o.scatter_frac = positive(x, "detectors.scatter_frac"); });
    optional_key(d, "scatter_tol", [&](const json &x) { o.scatter_tol = positive(x, "detectors.scatter_tol"); });
    optional_key(d, "window_frac", [&](const json &x) {
      o.window_frac = positive(x, "detectors.window_frac");
      if (o.window_frac > 1.0)
        throw ConfigError("config: 'detectors.window_frac' must not exceed 1");
    });
    optional_key(d, "tail_valid", [&](const json &x) { o.tail_valid = positive(x, "detectors.tail_valid"); });
    optional_key(d, "growth_seq_factor",
                 [&](const json &x) { o.growth_seq_factor = positive(x, "detectors.growth_seq_factor"); });
  });

  optional_key(j, "initial", [&](const json &i) {
    auto &o = c.initial;
    const auto &k = require(i, "kind", "initial.");
    if (!k.is_string())
      throw ConfigError("config: 'initial.kind' must be a string");
    o.kind = kind_from(k.get<std::string>());
    optional_key(i, "amplitude", [&](const json &x) { o.amplitude = number(x, "initial.amplitude"); });
    optional_key(i, "width_y", [&](const json &x) { o.width_y = positive(x, "initial.width_y"); });
    optional_key(i, "width_z", [&](const json &x) { o.width_z = positive(x, "initial.width_z"); });
    optional_key(i, "offset_z", [&](const json &x) { o.offset_z = numbers(x, "initial.offset_z"); });
    optional_key(i, "phase_velocity", [&](const json &x) { o.phase_velocity = numbers(x, "initial.phase_velocity"); });
    optional_key(i, "path", [&](const json &x) {
      if (!x.is_string())
        throw ConfigError("config: 'initial.path' must be a string");
      o.path = x.get<std::string>();
    });
    if (o.kind == InitialKind::File && o.path.empty())
      throw ConfigError("config: missing key 'initial.path' for kind file");
    const auto k_dims = static_cast<std::size_t>(c.model.free_dims());
    if (!o.offset_z.empty() && o.offset_z.size() != k_dims)
      throw ConfigError("config: 'initial.offset_z' needs d - n entries");
    if (!o.phase_velocity.empty() && o.phase_velocity.size() != k_dims)
      throw ConfigError("config: 'initial.phase_velocity' needs d - n entries");
  });

  optional_key(j, "ground_state", [&](const json &gs) {
    optional_key(gs, "tol", [&](const json &x) { c.ground_state.tol = positive(x, "ground_state.tol"); });
    optional_key(gs, "max_iter", [&](const json &x) {
      c.ground_state.max_iter = integer(x, "ground_state.max_iter");
      if (c.ground_state.max_iter < 1)
        throw ConfigError("config: 'ground_state.max_iter' must be positive");
    });
  });
  optional_key(j, "beta", [&](const json &x) { c.beta = positive(x, "beta"); });
  optional_key(j, "beta_cache", [&](const json &x) {
    if (!x.is_string())
      throw ConfigError("config: 'beta_cache' must be a string");
    c.beta_cache = x.get<std::string>();
  });
  optional_key(j, "seed", [&](const json &x) {
    if (!x.is_number_unsigned() && !(x.is_number_integer() && x.get<long long>() >= 0))
      throw ConfigError("config: 'seed' must be a nonnegative integer");
    c.seed = x.get<std::uint64_t>();
  });
  optional_key(j, "output_dir", [&](const json &x) {
    if (!x.is_string())
      throw ConfigError("config: 'output_dir' must be a string");
    c.output_dir = x.get<std::string>();
  });
  return c;
}

ExperimentConfig load_config(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw ConfigError("config: cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error &e) {
    throw ConfigError("config: '" + path + "' is not valid JSON: " + e.what());
  }
  return parse_config(j);
}

json model_json(const ModelParams &p) {
  return json{{"d", p.d}, {"n", p.n}, {"sigma", p.sigma.str()}, {"lambda", p.lambda}};
}

json grid_json(const Grid &g) {
  json pts = json::array();
  json len = json::array();
  for (const auto &ax : g.z_axes()) {
    pts.push_back(ax.points);
    len.push_back(ax.length);
  }
  json out{{"hermite_modes", g.hermite_modes()}, {"z_points", pts}, {"z_length", len}};
  if (g.quadrature_nodes() != g.hermite_modes())
    out["quadrature_nodes"] = g.quadrature_nodes();
  return out;
}

json to_json(const ExperimentConfig &c) {
  json grid{{"hermite_modes", c.grid.hermite_modes}, {"z_points", c.grid.z_points}, {"z_length", c.grid.z_length}};
  if (c.grid.quadrature_nodes != 0)
    grid["quadrature_nodes"] = c.grid.quadrature_nodes;
  const auto &d = c.detectors;
  const auto &i = c.initial;
  json out{
      {"model", model_json(c.model)},
      {"grid", grid},
      {"time",
       {{"dt", c.time.dt},
        {"t_max", c.time.t_max},
        {"sample_stride", c.time.sample_stride}}},
      {"detectors",
       {{"blowup_factor", d.blowup_factor},
        {"scatter_frac", d.scatter_frac},
        {"scatter_tol", d.scatter_tol},
        {"window_frac", d.window_frac},
        {"tail_valid", d.tail_valid},
        {"growth_seq_factor", d.growth_seq_factor}}},
      {"initial",
       {{"kind", kind_name(i.kind)},
        {"amplitude", i.amplitude},
        {"width_y", i.width_y},
        {"width_z", i.width_z},
        {"offset_z", i.offset_z},
        {"phase_velocity", i.phase_velocity},
        {"path", i.path}}},
      {"ground_state", {{"tol", c.ground_state.tol}, {"max_iter", c.ground_state.max_iter}}},
      {"seed", c.seed},
      {"output_dir", c.output_dir}};
  if (c.beta)
    out["beta"] = *c.beta;
  if (!c.beta_cache.empty())
    out["beta_cache"] = c.beta_cache;
  return out;
}

} // namespace phnls
