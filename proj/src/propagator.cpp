#include "phnls/propagator.hpp"

#include "phnls/error.hpp"

#include <algorithm>
#include <cmath>

namespace phnls {

namespace {

std::vector<cplx> linear_phase_table(const Grid &g, double t) {
  const int M = g.hermite_modes();
  const std::size_t Z = g.z_size();
  const auto &ksq = g.k_squared();
  std::vector<cplx> ph(g.size());
  for (int m = 0; m < M; ++m)
    for (std::size_t q = 0; q < Z; ++q)
      ph[m * Z + q] = std::polar(1.0, -t * ((2.0 * m + 1.0) + ksq[q]));
  return ph;
}

} // namespace

Field linear_evolve(const Field &f, double t) {
  if (t == 0.0)
    return f;
  Field c = f.to_coefficients();
  const auto ph = linear_phase_table(f.grid(), t);
  auto &d = c.mutable_data();
  for (std::size_t i = 0; i < d.size(); ++i)
    d[i] *= ph[i];
  return c.in(f.representation());
}

Field vector_field_A(const Field &f, double t, VectorField which) {
  const Field yu = multiply_y(f);
  const Field dyu = gradient_y(f);
  const double s = std::sin(2.0 * t);
  const double c = std::cos(2.0 * t);
  const cplx i(0.0, 1.0);
  if (which == VectorField::A1)
    return yu * cplx(s) + dyu * (-i * c);
  return yu * cplx(-c) + dyu * (-i * s);
}

double profile_B1_norm(const Field &f, double t) {
  const Grid &g = f.grid();
  const Field c = f.to_coefficients();
  const int M = g.hermite_modes();
  const std::size_t Z = g.z_size();
  const auto yc = ladder::y(c.data().data(), M, Z);
  const auto dc = ladder::dy(c.data().data(), M, Z);
  const double s = std::sin(2.0 * t);
  const double co = std::cos(2.0 * t);
  const cplx i(0.0, 1.0);
  double a1 = 0.0;
  double a2 = 0.0;
  for (std::size_t k = 0; k < yc.size(); ++k) {
    a1 += std::norm(s * yc[k] - i * co * dc[k]);
    a2 += std::norm(-co * yc[k] - i * s * dc[k]);
  }
  double mass = 0.0;
  double gz = 0.0;
  const auto &ksq = g.k_squared();
  for (int m = 0; m < M; ++m)
    for (std::size_t q = 0; q < Z; ++q) {
      const double w = std::norm(c.data()[m * Z + q]);
      mass += w;
      gz += ksq[q] * w;
    }
  return g.z_volume() * (mass + a1 + a2 + gz);
}

Propagator::Propagator(const ModelParams &params, GridPtr grid, double dt, bool nonlinear)
    : params_(params), grid_(std::move(grid)), dt_(dt), nonlinear_(nonlinear), power_(params.sigma) {
  if (!std::isfinite(dt) || dt == 0.0)
    throw ValidationError("propagator: dt must be finite and nonzero");
  linear_phase_ = linear_phase_table(*grid_, dt);
}

void Propagator::phase(std::vector<cplx> &u, double tau) const {
  if (!nonlinear_)
    return;
  const double lam = params_.lambda;
  for (auto &v : u)
    v *= std::polar(1.0, -lam * power_(std::norm(v)) * tau);
}

void Propagator::linear(std::vector<cplx> &u) const {
  grid_->forward(u.data(), u.data());
  for (std::size_t i = 0; i < u.size(); ++i)
    u[i] *= linear_phase_[i];
  grid_->inverse(u.data(), u.data());
}

void Propagator::advance(std::vector<cplx> &u, int steps) const {
  if (steps <= 0)
    return;
  phase(u, 0.5 * dt_);
  for (int s = 0; s < steps; ++s) {
    linear(u);
    phase(u, s + 1 < steps ? dt_ : 0.5 * dt_);
  }
}

Field Propagator::step(const Field &f) const {
  Field u = f.from_coefficients();
  advance(u.mutable_data(), 1);
  return u.in(f.representation());
}

Field step_strang(const Field &f, double /*t*/, double dt, bool nonlinear) {
  return Propagator(f.params(), f.grid_ptr(), dt, nonlinear).step(f);
}

const char *to_string(Termination t) {
  switch (t) {
  case Termination::Completed:
    return "completed";
  case Termination::BlowupTrigger:
    return "blowup_trigger";
  case Termination::InvalidityStop:
    return "invalidity_stop";
  }
  return "?";
}

TraceSample sample_state(const Field &f, double t) {
  const auto r = evaluate(f);
  TraceSample s;
  s.t = t;
  s.M = r.M;
  s.E = r.E;
  s.G = r.G;
  s.gradx_sq = r.gradx_sq();
  s.L2s2s2 = r.L2s2s2;
  s.ymom_sq = r.ymom_sq;
  s.y_virial_rate = y_virial_rate(f);
  s.profile_B1 = profile_B1_norm(f, t);
  s.tail = tail_fraction(f);
  return s;
}

EvolutionTrace evolve(const Field &f0, double T, const EvolveOptions &opt) {
  if (!(T >= 0.0) || !std::isfinite(T))
    throw ValidationError("evolve: T must be finite and nonnegative");
  if (!(opt.dt > 0.0))
    throw ValidationError("evolve: dt must be positive");
  if (opt.sample_stride < 1)
    throw ValidationError("evolve: sample_stride must be at least 1");

  const Propagator prop(f0.params(), f0.grid_ptr(), opt.dt, opt.nonlinear);
  const long steps = std::lround(T / opt.dt);
  EvolutionTrace trace;
  trace.dt = opt.dt;

  Field u = f0.from_coefficients();
  auto record = [&](double t) {
    auto s = sample_state(u, t);
    if (opt.monitor)
      opt.monitor(s, u);
    trace.samples.push_back(std::move(s));
    return trace.samples.back();
  };

  const TraceSample first = record(0.0);
  const double g0 = first.gradx_sq;
  if (first.tail > opt.tail_valid)
    trace.reason = Termination::InvalidityStop;

  long done = 0;
  while (trace.reason == Termination::Completed && done < steps) {
    const int block = static_cast<int>(std::min<long>(opt.sample_stride, steps - done));
    prop.advance(u.mutable_data(), block);
    done += block;
    const auto &s = record(done * opt.dt);
    if (s.tail > opt.tail_valid)
      trace.reason = Termination::InvalidityStop;
    else if (opt.blowup_factor > 0.0 && g0 > 0.0 && s.gradx_sq > opt.blowup_factor * g0)
      trace.reason = Termination::BlowupTrigger;
  }
  trace.final_state = std::move(u);
  return trace;
}

FinalState solve_final_state(const Field &psi, double T_trunc, double t_target, double dt, double tol) {
  if (!(T_trunc > t_target))
    throw ValidationError("solve_final_state: T_trunc must exceed t_target");
  if (!(dt > 0.0))
    throw ValidationError("solve_final_state: dt must be positive");

  auto backward = [&](double T) {
    Field u = linear_evolve(psi, T).from_coefficients();
    const long steps = std::max(1L, std::lround((T - t_target) / dt));
    const double h = (T - t_target) / static_cast<double>(steps);
    Propagator(psi.params(), psi.grid_ptr(), -h).advance(u.mutable_data(), static_cast<int>(steps));
    return u;
  };
  const Field near = backward(T_trunc);
  Field far = backward(2.0 * T_trunc);
  const double delta = (far - near).l2_norm();
  if (delta > tol)
    throw NonConvergence("solve_final_state: truncation T and 2T differ by " + std::to_string(delta));
  return {far.in(psi.representation()), delta};
}

} // namespace phnls
