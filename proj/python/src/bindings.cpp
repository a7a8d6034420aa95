#include "phnls/error.hpp"
#include "phnls/field_io.hpp"
#include "phnls/runner.hpp"
#include "phnls/samples.hpp"

#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace phnls;
using json = nlohmann::ordered_json;

namespace {

py::object to_py(const json &j) { return py::module_::import("json").attr("loads")(j.dump()); }

json from_py(const py::object &o) {
  return json::parse(py::module_::import("json").attr("dumps")(o).cast<std::string>());
}

ExperimentConfig config_from(const py::object &o) {
  if (py::isinstance<py::str>(o))
    return load_config(o.cast<std::string>());
  return parse_config(from_py(o));
}

std::vector<py::ssize_t> shape_of(const Grid &g) {
  std::vector<py::ssize_t> s{g.hermite_modes()};
  for (const auto &a : g.z_axes())
    s.push_back(a.points);
  return s;
}

py::array_t<cplx> as_array(const Field &f) {
  py::array_t<cplx> a(shape_of(f.grid()));
  std::copy(f.data().begin(), f.data().end(), a.mutable_data());
  return a;
}

Field field_from(const ModelParams &p, const GridPtr &g, py::array_t<cplx, py::array::c_style | py::array::forcecast> a,
                 Representation rep) {
  if (static_cast<std::size_t>(a.size()) != g->size())
    throw ValidationError("array size " + std::to_string(a.size()) + " does not match the grid (" +
                          std::to_string(g->size()) + ")");
  return Field(p, g, rep, std::vector<cplx>(a.data(), a.data() + a.size()));
}

py::dict trace_dict(const EvolutionTrace &tr) {
  const auto n = tr.samples.size();
  auto column = [&](auto get) {
    py::array_t<double> a(static_cast<py::ssize_t>(n));
    auto *p = a.mutable_data();
    for (std::size_t i = 0; i < n; ++i)
      p[i] = get(tr.samples[i]);
    return a;
  };
  py::dict d;
  d["t"] = column([](const TraceSample &s) { return s.t; });
  d["M"] = column([](const TraceSample &s) { return s.M; });
  d["E"] = column([](const TraceSample &s) { return s.E; });
  d["gradx_sq"] = column([](const TraceSample &s) { return s.gradx_sq; });
  d["L2s2s2"] = column([](const TraceSample &s) { return s.L2s2s2; });
  d["ymom_sq"] = column([](const TraceSample &s) { return s.ymom_sq; });
  d["y_virial_rate"] = column([](const TraceSample &s) { return s.y_virial_rate; });
  d["profile_B1"] = column([](const TraceSample &s) { return s.profile_B1; });
  d["tail"] = column([](const TraceSample &s) { return s.tail; });
  std::vector<std::vector<double>> G;
  for (const auto &s : tr.samples)
    G.push_back(s.G);
  d["G"] = G;
  d["dt"] = tr.dt;
  d["reason"] = std::string(to_string(tr.reason));
  return d;
}

DetectorOptions detector_options(const py::dict &o) {
  DetectorOptions d;
  for (auto [k, v] : o) {
    const auto key = k.cast<std::string>();
    const double x = v.cast<double>();
    if (key == "blowup_factor")
      d.blowup_factor = x;
    else if (key == "scatter_frac")
      d.scatter_frac = x;
    else if (key == "scatter_tol")
      d.scatter_tol = x;
    else if (key == "window_frac")
      d.window_frac = x;
    else if (key == "tail_valid")
      d.tail_valid = x;
    else if (key == "growth_seq_factor")
      d.growth_seq_factor = x;
    else
      throw ValidationError("unknown detector option '" + key + "'");
  }
  return d;
}

} // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "NLS with partial harmonic confinement";

  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<NonConvergence>(m, "NonConvergence", PyExc_RuntimeError);
  py::register_exception<CollapseToZero>(m, "CollapseToZero", PyExc_RuntimeError);

  py::class_<ModelParams>(m, "ModelParams")
      .def(py::init([](int d, int n, const std::string &sigma, int lambda) {
             ModelParams p{d, n, Rational::parse(sigma), lambda};
             check(p);
             return p;
           }),
           py::arg("d") = 2, py::arg("n") = 1, py::arg("sigma") = "3", py::arg("lam") = -1)
      .def_readonly("d", &ModelParams::d)
      .def_readonly("n", &ModelParams::n)
      .def_readonly("lam", &ModelParams::lambda)
      .def_property_readonly("sigma", [](const ModelParams &p) { return p.sigma.str(); })
      .def_property_readonly("sigma_value", &ModelParams::sigma_value)
      .def("validate",
           [](const ModelParams &p) {
             const auto v = validate(p);
             py::dict d;
             d["theorem_window"] = v.theorem_window;
             d["strichartz_window"] = v.strichartz_window;
             d["profile_window"] = v.profile_window;
             return d;
           })
      .def("__repr__", [](const ModelParams &p) {
        return "ModelParams(d=" + std::to_string(p.d) + ", n=" + std::to_string(p.n) + ", sigma='" + p.sigma.str() +
               "', lam=" + std::to_string(p.lambda) + ")";
      });

  py::class_<Grid, std::shared_ptr<Grid>>(m, "Grid")
      .def(py::init([](int modes, std::vector<int> points, std::vector<double> lengths, int quad) {
             if (points.size() != lengths.size())
               throw ValidationError("z_points and z_length differ in length");
             std::vector<ZAxis> axes;
             for (std::size_t a = 0; a < points.size(); ++a)
               axes.push_back({points[a], lengths[a]});
             return std::make_shared<Grid>(modes, std::move(axes), quad);
           }),
           py::arg("hermite_modes"), py::arg("z_points"), py::arg("z_length"), py::arg("quadrature_nodes") = 0)
      .def_property_readonly("hermite_modes", &Grid::hermite_modes)
      .def_property_readonly("shape", [](const Grid &g) { return shape_of(g); })
      .def_property_readonly("y_nodes", &Grid::y_nodes)
      .def("z_coordinates", &Grid::z_coordinates, py::arg("axis") = 0)
      .def("wavenumbers", &Grid::wavenumbers, py::arg("axis") = 0);

  py::class_<Field>(m, "Field")
      .def_static(
          "from_values",
          [](const ModelParams &p, std::shared_ptr<Grid> g, py::array_t<cplx, py::array::c_style | py::array::forcecast> a) {
            return field_from(p, g, a, Representation::Physical);
          },
          py::arg("params"), py::arg("grid"), py::arg("values"))
      .def_static(
          "from_coefficients",
          [](const ModelParams &p, std::shared_ptr<Grid> g, py::array_t<cplx, py::array::c_style | py::array::forcecast> a) {
            return field_from(p, g, a, Representation::Coefficient);
          },
          py::arg("params"), py::arg("grid"), py::arg("coefficients"))
      .def("values", [](const Field &f) { return as_array(f.from_coefficients()); })
      .def("coefficients", [](const Field &f) { return as_array(f.to_coefficients()); })
      .def_property_readonly("params", &Field::params)
      .def("l2_norm", &Field::l2_norm)
      .def("__mul__", [](const Field &f, cplx s) { return f * s; })
      .def("__rmul__", [](const Field &f, cplx s) { return f * s; })
      .def("__add__", [](const Field &a, const Field &b) { return a + b; })
      .def("__sub__", [](const Field &a, const Field &b) { return a - b; });

  m.def(
      "gaussian",
      [](const ModelParams &p, std::shared_ptr<Grid> g, double amplitude, double wy, double wz,
         std::vector<double> offset, std::vector<double> velocity) {
        return gaussian(p, g, GaussianSpec{amplitude, wy, wz, offset, velocity});
      },
      py::arg("params"), py::arg("grid"), py::arg("amplitude") = 1.0, py::arg("width_y") = 1.0,
      py::arg("width_z") = 1.0, py::arg("offset_z") = std::vector<double>{},
      py::arg("velocity") = std::vector<double>{});
  m.def(
      "random_field",
      [](const ModelParams &p, std::shared_ptr<Grid> g, std::uint64_t seed) { return random_field(p, g, seed); },
      py::arg("params"), py::arg("grid"), py::arg("seed"));

  m.def("evaluate", [](const Field &f) { return to_py(report_json(evaluate(f))); });
  m.def(
      "petviashvili",
      [](const ModelParams &p, std::shared_ptr<Grid> g, double tol, int max_iter) {
        const auto r = petviashvili(p, g, PetviashviliOptions{tol, max_iter});
        py::dict d;
        d["Q"] = r.Q;
        d["beta"] = r.beta;
        d["residual"] = r.residual;
        d["iterations"] = r.iterations;
        d["converged"] = r.converged;
        d["report"] = to_py(report_json(r.report));
        return d;
      },
      py::arg("params"), py::arg("grid"), py::arg("tol") = 1e-12, py::arg("max_iter") = 2000);
  m.def("J_ab", py::overload_cast<const Field &, double, double>(&J_ab), py::arg("field"), py::arg("a"),
        py::arg("b"));
  m.def("B_ab", py::overload_cast<const Field &, double, double>(&B_ab), py::arg("field"), py::arg("a"),
        py::arg("b"));
  m.def(
      "classify", [](const Field &f, double beta) { return to_py(classification_json(classify(f, beta))); },
      py::arg("field"), py::arg("beta"));
  m.def(
      "galilean_boost",
      [](const Field &f) {
        auto b = galilean_boost(f);
        return py::make_tuple(b.boosted, b.z0);
      },
      py::arg("field"));

  m.def("linear_evolve", &linear_evolve, py::arg("field"), py::arg("t"));
  m.def("profile_B1_norm", &profile_B1_norm, py::arg("field"), py::arg("t"));
  m.def(
      "evolve",
      [](const Field &f, double T, double dt, int stride, bool nonlinear, double blowup_factor, double tail_valid) {
        EvolveOptions o;
        o.dt = dt;
        o.sample_stride = stride;
        o.nonlinear = nonlinear;
        o.blowup_factor = blowup_factor;
        o.tail_valid = tail_valid;
        EvolutionTrace tr;
        {
          py::gil_scoped_release release;
          tr = evolve(f, T, o);
        }
        auto d = trace_dict(tr);
        d["final_state"] = tr.final_state;
        return d;
      },
      py::arg("field"), py::arg("T"), py::arg("dt") = 1e-3, py::arg("sample_stride") = 10,
      py::arg("nonlinear") = true, py::arg("blowup_factor") = 2500.0, py::arg("tail_valid") = 1e-2);
  m.def(
      "detect",
      [](const py::dict &trace, const py::dict &options) {
        EvolutionTrace tr;
        auto col = [&](const char *k) { return trace[k].cast<std::vector<double>>(); };
        const auto t = col("t"), M = col("M"), E = col("E"), gx = col("gradx_sq"), l = col("L2s2s2"),
                   ym = col("ymom_sq"), vr = col("y_virial_rate"), pb = col("profile_B1"), tail = col("tail");
        for (std::size_t i = 0; i < t.size(); ++i)
          tr.samples.push_back({t[i], M[i], E[i], {}, gx[i], l[i], ym[i], vr[i], pb[i], tail[i]});
        const auto reason = trace["reason"].cast<std::string>();
        tr.reason = reason == "blowup_trigger"    ? Termination::BlowupTrigger
                    : reason == "invalidity_stop" ? Termination::InvalidityStop
                                                  : Termination::Completed;
        return to_py(verdict_json(detect(tr, detector_options(options))));
      },
      py::arg("trace"), py::arg("options") = py::dict());

  m.def(
      "exponents",
      [](int d, int n, const std::string &sigma) {
        return to_py(exponents_json(ModelParams{d, n, Rational::parse(sigma), -1}));
      },
      py::arg("d"), py::arg("n"), py::arg("sigma"));
  m.def(
      "linear_decay",
      [](const Field &f, double t0, double t1, int samples) {
        const auto fit = linear_decay(f, t0, t1, samples);
        py::dict d;
        d["slope"] = fit.slope;
        d["delta"] = fit.delta;
        d["r"] = fit.r;
        d["relative_error"] = fit.relative_error;
        d["times"] = fit.times;
        d["lr_norms"] = fit.lr_norms;
        return d;
      },
      py::arg("field"), py::arg("t0") = 5.0, py::arg("t1") = 50.0, py::arg("samples") = 12);

  m.def("write_field", py::overload_cast<const std::string &, const Field &>(&write_field), py::arg("path"),
        py::arg("field"));
  m.def("read_field", py::overload_cast<const std::string &>(&read_field), py::arg("path"));

  m.def(
      "parse_config", [](const py::object &cfg) { return to_py(to_json(config_from(cfg))); }, py::arg("config"));
  m.def(
      "run_ground_state",
      [](const py::object &cfg, const std::string &out) { return to_py(run_ground_state(config_from(cfg), out)); },
      py::arg("config"), py::arg("out_dir") = "");
  m.def(
      "run_classify",
      [](const py::object &cfg, const std::string &state) { return to_py(run_classify(config_from(cfg), state)); },
      py::arg("config"), py::arg("state_path") = "");
  m.def(
      "run_evolve",
      [](const py::object &cfg, const std::string &out) {
        auto c = config_from(cfg);
        EvolveRun r;
        {
          py::gil_scoped_release release;
          r = run_evolve(c, out);
        }
        auto d = to_py(r.summary);
        d["exit_code"] = r.exit_code;
        return d;
      },
      py::arg("config"), py::arg("out_dir") = "");
  m.def(
      "run_sweep",
      [](const py::object &cfg, double from, double to, int steps, bool bisect, double width, int workers,
         const std::string &out) {
        auto c = config_from(cfg);
        SweepResult r;
        {
          py::gil_scoped_release release;
          r = run_sweep(c, SweepOptions{from, to, steps, bisect, width, workers}, out);
        }
        return to_py(sweep_json(r));
      },
      py::arg("config"), py::arg("start"), py::arg("stop"), py::arg("steps") = 5, py::arg("bisect") = false,
      py::arg("width") = 1e-2, py::arg("workers") = 0, py::arg("out_dir") = "");
  m.def(
      "run_linear_decay",
      [](const py::object &cfg, const std::string &out) { return to_py(run_linear_decay(config_from(cfg), out)); },
      py::arg("config"), py::arg("out_dir") = "");
}
