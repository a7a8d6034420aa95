#include "phnls/diagnostics.hpp"

#include "phnls/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace phnls {

namespace {

// ∫F dx over collocation points: Gauss weights in y, z_cell in z.
template <typename Density> double integrate(const Grid &g, Density density) {
  const std::size_t Z = g.z_size();
  double total = 0.0;
  for (int j = 0; j < g.hermite_modes(); ++j) {
    double row = 0.0;
    for (std::size_t q = 0; q < Z; ++q)
      row += density(j * Z + q, q);
    total += g.y_weights()[j] * row;
  }
  return g.z_cell() * total;
}

struct Physical {
  Field u;
  std::vector<Field> du;
  std::vector<cplx> lap;
};

Physical physical_with_gradient(const Field &f, bool with_laplacian = false) {
  Physical p{f.from_coefficients(), {}, {}};
  const auto grads = gradient_z(f.to_coefficients());
  for (std::size_t a = 0; a < grads.size(); ++a) {
    p.du.push_back(grads[a].from_coefficients());
    if (!with_laplacian)
      continue;
    const auto second = gradient_z(grads[a])[a].from_coefficients().data();
    if (p.lap.empty())
      p.lap.assign(second.size(), 0.0);
    for (std::size_t i = 0; i < second.size(); ++i)
      p.lap[i] += second[i];
  }
  return p;
}

bool is_radial(const CutoffProfile &c) { return c.kind != CutoffKind::CenterOfMass; }

} // namespace

const char *to_string(Membership m) {
  switch (m) {
  case Membership::KPlus:
    return "K+";
  case Membership::KMinus:
    return "K-";
  case Membership::OutOfScope:
    return "out_of_scope";
  }
  return "?";
}

const char *to_string(Outcome o) {
  switch (o) {
  case Outcome::GlobalScattering:
    return "global_scattering";
  case Outcome::FiniteTimeBlowup:
    return "finite_time_blowup";
  case Outcome::GrowAlongSequence:
    return "grow_along_sequence";
  case Outcome::Undetermined:
    return "undetermined";
  case Outcome::OutOfScope:
    return "out_of_scope";
  }
  return "?";
}

Classification classify(const FunctionalReport &rep, const ModelParams &params, double beta) {
  Classification c;
  c.S = rep.S;
  c.I = rep.I;
  c.P = rep.P;
  c.beta = beta;
  if (!params.focusing() || !validate(params).theorem_window || !(rep.S < beta))
    return c;
  const bool p_nonneg = rep.P >= 0.0;
  c.sign_disagreement = p_nonneg != (rep.I >= 0.0);
  if (p_nonneg) {
    c.membership = Membership::KPlus;
  } else {
    c.membership = Membership::KMinus;
    const double bound = -(4.0 / params.free_dims()) * (beta - rep.S);
    c.lemma38_bound = bound;
    c.lemma38_holds = rep.P <= bound + 1e-6;
  }
  return c;
}

Classification classify(const Field &f, double beta) { return classify(evaluate(f), f.params(), beta); }

VirialSeries virial_series(const Field &f, const CutoffProfile &c) {
  if (!is_radial(c))
    throw ValidationError("virial_series: needs a radial cutoff");
  if (!f.params().focusing())
    throw ValidationError("virial_series: the split form is defined for lambda = -1");
  const Grid &g = f.grid();
  const int k = g.free_dims();
  const double s = f.params().sigma_value();
  const PowerLaw power(f.params().sigma);
  const auto p = physical_with_gradient(f, true);
  const auto &u = p.u.data();

  VirialSeries v;
  v.V = integrate(g, [&](std::size_t i, std::size_t q) { return c.phi[q] * std::norm(u[i]); });
  v.V1 = 2.0 * integrate(g, [&](std::size_t i, std::size_t q) {
           cplx acc = 0.0;
           for (int a = 0; a < k; ++a)
             acc += c.gradient[a][q] * p.du[a].data()[i];
           return (std::conj(u[i]) * acc).imag();
         });
  const double hess = integrate(g, [&](std::size_t i, std::size_t q) {
    double acc = 0.0;
    for (int a = 0; a < k; ++a)
      for (int b = 0; b < k; ++b)
        acc += c.hessian[a * k + b][q] * (std::conj(p.du[a].data()[i]) * p.du[b].data()[i]).real();
    return acc;
  });
  const double gz = integrate(g, [&](std::size_t i, std::size_t) {
    double acc = 0.0;
    for (int a = 0; a < k; ++a)
      acc += std::norm(p.du[a].data()[i]);
    return acc;
  });
  double L = 0.0;
  double lap_L = 0.0;
  {
    const std::size_t Z = g.z_size();
    for (int j = 0; j < g.hermite_modes(); ++j) {
      double row = 0.0;
      double row_lap = 0.0;
      for (std::size_t q = 0; q < Z; ++q) {
        const double a2 = std::norm(u[j * Z + q]);
        const double d = a2 * power(a2);
        row += d;
        row_lap += c.laplacian[q] * d;
      }
      L += g.y_weights()[j] * row;
      lap_L += g.y_weights()[j] * row_lap;
    }
    L *= g.z_cell();
    lap_L *= g.z_cell();
  }
  // ∫Δ²φ|u|² taken as ∫Δφ Δ|u|², since Δ²φ is only piecewise smooth.
  const double bilap = integrate(g, [&](std::size_t i, std::size_t q) {
    double grad2 = 0.0;
    for (const auto &d : p.du)
      grad2 += std::norm(d.data()[i]);
    return c.laplacian[q] * 2.0 * ((std::conj(u[i]) * p.lap[i]).real() + grad2);
  });

  const double nl = 2.0 * s / (s + 1.0);
  v.V2 = 4.0 * hess - nl * lap_L - bilap;
  v.P = (2.0 / k) * gz - (s / (s + 1.0)) * L;
  v.R1 = 4.0 * (hess - 2.0 * gz);
  v.R2 = -nl * (lap_L - 2.0 * k * L);
  v.R3 = -bilap;
  v.V2_split = 4.0 * k * v.P + v.R1 + v.R2 + v.R3;
  return v;
}

double cutoff_mass(const Field &f, const CutoffProfile &c) {
  if (!is_radial(c))
    throw ValidationError("cutoff_mass: needs a radial cutoff");
  const Field u = f.from_coefficients();
  return integrate(f.grid(), [&](std::size_t i, std::size_t q) { return c.phi[q] * std::norm(u.data()[i]); });
}

double mass_outside(const Field &f, double R) {
  const Grid &g = f.grid();
  const int k = g.free_dims();
  const Field u = f.from_coefficients();
  return integrate(g, [&](std::size_t i, std::size_t q) {
    double r2 = 0.0;
    for (int a = 0; a < k; ++a)
      r2 += g.z_component(a)[q] * g.z_component(a)[q];
    return r2 >= R * R ? std::norm(u.data()[i]) : 0.0;
  });
}

LeakageReport leakage_check(const std::vector<double> &times, const std::vector<double> &V, double mass0, double k0,
                            const CutoffProfile &c) {
  if (c.kind != CutoffKind::MassCutoff)
    throw ValidationError("leakage_check: needs a MassCutoff profile");
  if (times.size() != V.size() || times.empty())
    throw ValidationError("leakage_check: times and V must be nonempty and of equal length");
  LeakageReport r;
  const double norm0 = std::sqrt(mass0);
  const double slope = 4.0 * norm0 * k0 / c.R;
  const double rigorous = 2.0 * (c.slope_constant / c.R) * norm0 * k0;
  r.min_margin = INFINITY;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double dt = times[i] - times.front();
    const double b = V.front() + slope * dt;
    r.bound.push_back(b);
    r.min_margin = std::min(r.min_margin, b - V[i]);
    // Round-off allowance relative to the mass scale.
    const double tol = 1e-12 * std::max(1.0, mass0);
    if (V[i] > b + tol)
      r.holds = false;
    if (V[i] > V.front() + rigorous * dt + tol)
      r.rigorous_holds = false;
  }
  return r;
}

double gradient_sup(const EvolutionTrace &trace) {
  double k0 = 0.0;
  for (const auto &s : trace.samples)
    k0 = std::max(k0, std::sqrt(s.gradx_sq));
  return k0;
}

CenterOfMass center_of_mass(const Field &f, const CutoffProfile &c) {
  if (c.kind != CutoffKind::CenterOfMass)
    throw ValidationError("center_of_mass: needs a CenterOfMass profile");
  const Grid &g = f.grid();
  const int k = g.free_dims();
  const auto p = physical_with_gradient(f);
  const Field dy = gradient_y(f).from_coefficients();
  const auto &u = p.u.data();
  CenterOfMass out;
  for (int a = 0; a < k; ++a) {
    const auto &th = c.component[a];
    const auto &th1 = c.component_d1[a];
    const auto &za = g.z_component(a);
    out.gamma.push_back(integrate(g, [&](std::size_t i, std::size_t q) { return th[q] * std::norm(u[i]); }));
    out.rate.push_back(2.0 * integrate(g, [&](std::size_t i, std::size_t q) {
                         return th1[q] * (std::conj(u[i]) * p.du[a].data()[i]).imag();
                       }));
    auto grad2 = [&](std::size_t i) {
      double acc = std::norm(dy.data()[i]);
      for (int b = 0; b < k; ++b)
        acc += std::norm(p.du[b].data()[i]);
      return acc;
    };
    out.bound.push_back(10.0 * integrate(g, [&](std::size_t i, std::size_t q) {
                          return std::abs(za[q]) >= c.R ? std::sqrt(grad2(i)) * std::abs(u[i]) : 0.0;
                        }));
    out.energy_bound.push_back(5.0 * integrate(g, [&](std::size_t i, std::size_t q) {
                                 return std::abs(za[q]) >= c.R ? grad2(i) + std::norm(u[i]) : 0.0;
                               }));
  }
  return out;
}

Verdict detect(const EvolutionTrace &trace, const DetectorOptions &opt) {
  Verdict v;
  const auto &s = trace.samples;
  if (s.empty()) {
    v.valid = false;
    return v;
  }
  const double g0 = s.front().gradx_sq;
  double gmax = 0.0;
  double lmax = 0.0;
  for (const auto &x : s) {
    gmax = std::max(gmax, x.gradx_sq);
    lmax = std::max(lmax, x.L2s2s2);
  }
  v.growth_factor = g0 > 0.0 ? gmax / g0 : (gmax > 0.0 ? INFINITY : 1.0);
  v.l2s2s2_final_frac = lmax > 0.0 ? s.back().L2s2s2 / lmax : 0.0;
  v.valid = trace.reason != Termination::InvalidityStop && s.back().tail <= opt.tail_valid;

  const double t_end = s.back().t;
  const double window = opt.window_frac * t_end;
  {
    double lo = INFINITY;
    double hi = -INFINITY;
    double sum = 0.0;
    int count = 0;
    for (const auto &x : s)
      if (x.t >= t_end - window) {
        lo = std::min(lo, x.profile_B1);
        hi = std::max(hi, x.profile_B1);
        sum += x.profile_B1;
        ++count;
      }
    const double mean = count > 0 ? sum / count : 0.0;
    v.profile_residual = mean > 0.0 ? (hi - lo) / mean : 0.0;
  }

  if (!v.valid) {
    v.outcome = Outcome::Undetermined;
    return v;
  }
  for (const auto &x : s)
    if (g0 > 0.0 && x.gradx_sq > opt.blowup_factor * g0) {
      v.trigger_time = x.t;
      break;
    }
  if (trace.reason == Termination::BlowupTrigger || v.trigger_time) {
    v.outcome = Outcome::FiniteTimeBlowup;
    return v;
  }
  if (trace.reason == Termination::Completed && v.l2s2s2_final_frac <= opt.scatter_frac &&
      v.profile_residual < opt.scatter_tol) {
    v.outcome = Outcome::GlobalScattering;
    return v;
  }

  // Trailing windows of width window, newest first.
  if (window > 0.0) {
    std::vector<double> maxima;
    double hi = t_end;
    while (hi > s.front().t) {
      double m = -INFINITY;
      for (const auto &x : s)
        if (x.t > hi - window && x.t <= hi)
          m = std::max(m, x.gradx_sq);
      if (std::isfinite(m))
        maxima.push_back(m);
      hi -= window;
    }
    int run = 1;
    for (std::size_t i = 0; i + 1 < maxima.size(); ++i) {
      if (maxima[i] >= opt.growth_seq_factor * maxima[i + 1])
        ++run;
      else
        break;
    }
    if (run >= 3) {
      v.outcome = Outcome::GrowAlongSequence;
      return v;
    }
  }
  v.outcome = Outcome::Undetermined;
  return v;
}

double StrichartzSum::tail_share(std::size_t count) const {
  if (total <= 0.0)
    return 0.0;
  double tail = 0.0;
  for (std::size_t i = windows.size() > count ? windows.size() - count : 0; i < windows.size(); ++i)
    tail += windows[i].second;
  return tail / total;
}

StrichartzSum windowed_strichartz(const std::vector<double> &times, const std::vector<double> &norms, double p,
                                  double q) {
  if (times.size() != norms.size())
    throw ValidationError("windowed_strichartz: times and norms differ in length");
  if (!(p > 0.0) || !(q > 0.0))
    throw ValidationError("windowed_strichartz: p and q must be positive");
  StrichartzSum out;
  if (times.size() < 2)
    return out;
  for (std::size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1]))
      throw ValidationError("windowed_strichartz: times must increase");

  const double pi = std::numbers::pi;
  auto value_at = [&](double t) {
    const auto it = std::upper_bound(times.begin(), times.end(), t);
    if (it == times.begin())
      return norms.front();
    if (it == times.end())
      return norms.back();
    const std::size_t i = static_cast<std::size_t>(it - times.begin());
    const double w = (t - times[i - 1]) / (times[i] - times[i - 1]);
    return (1.0 - w) * norms[i - 1] + w * norms[i];
  };
  const double t0 = times.front();
  const double t1 = times.back();
  const int first = static_cast<int>(std::floor(t0 / pi)) - 1;
  const int last = static_cast<int>(std::floor(t1 / pi)) + 1;
  for (int gam = first; gam <= last; ++gam) {
    const double lo = std::max(t0, pi * (gam - 1));
    const double hi = std::min(t1, pi * (gam + 1));
    if (!(hi > lo))
      continue;
    // Trapezoid over the samples inside [lo, hi] plus interpolated edges.
    std::vector<std::pair<double, double>> pts{{lo, value_at(lo)}};
    for (std::size_t i = 0; i < times.size(); ++i)
      if (times[i] > lo && times[i] < hi)
        pts.emplace_back(times[i], norms[i]);
    pts.emplace_back(hi, value_at(hi));
    double integral = 0.0;
    for (std::size_t i = 1; i < pts.size(); ++i)
      integral += 0.5 * (pts[i].first - pts[i - 1].first) *
                  (std::pow(std::abs(pts[i].second), q) + std::pow(std::abs(pts[i - 1].second), q));
    const double contrib = std::pow(integral, p / q);
    out.windows.emplace_back(gam, contrib);
    out.total += contrib;
  }
  return out;
}

} // namespace phnls
