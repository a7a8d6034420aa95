#include "phnls/samples.hpp"

#include "phnls/error.hpp"
#include "phnls/hermite.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace phnls {

Field gaussian(const ModelParams &params, GridPtr grid, const GaussianSpec &spec) {
  const int k = params.free_dims();
  auto offset = spec.offset_z;
  auto velocity = spec.velocity;
  offset.resize(k, 0.0);
  velocity.resize(k, 0.0);
  const double norm = spec.amplitude * std::pow(std::numbers::pi, -0.25 * params.d) /
                      std::sqrt(spec.width_y * std::pow(spec.width_z, k));
  const double ay = 0.5 / (spec.width_y * spec.width_y);
  const double az = 0.5 / (spec.width_z * spec.width_z);
  return Field::sample(params, std::move(grid), [&](double y, std::span<const double> z) {
    double r2 = 0.0;
    double phase = 0.0;
    for (int a = 0; a < k; ++a) {
      r2 += (z[a] - offset[a]) * (z[a] - offset[a]);
      phase += velocity[a] * z[a];
    }
    return norm * std::exp(-ay * y * y - az * r2) * cplx(std::cos(phase), std::sin(phase));
  });
}

Field factorized_h0(const ModelParams &params, GridPtr grid, const std::function<cplx(std::span<const double>)> &v) {
  return Field::sample(params, std::move(grid),
                       [&](double y, std::span<const double> z) { return hermite_functions(1, y)[0] * v(z); });
}

Field random_field(const ModelParams &params, GridPtr grid, std::uint64_t seed, const RandomFieldSpec &spec) {
  const Grid &g = *grid;
  const int k = g.free_dims();
  const int M = g.hermite_modes();
  const std::size_t Z = g.z_size();
  const int ym = std::min(spec.y_modes, M);
  const int zm = spec.z_modes;

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::size_t terms = static_cast<std::size_t>(ym);
  for (int a = 0; a < k; ++a)
    terms *= static_cast<std::size_t>(zm);
  std::vector<cplx> coef(terms);
  std::vector<int> idx(k + 1, 0);
  for (std::size_t t = 0; t < terms; ++t) {
    std::size_t rest = t;
    int order = 0;
    for (int a = k; a >= 0; --a) {
      const int base = a == 0 ? ym : zm;
      idx[a] = static_cast<int>(rest % base);
      rest /= base;
      order += idx[a];
    }
    const double damp = std::exp(-order / spec.decay);
    const double re = normal(rng);
    const double im = normal(rng);
    coef[t] = damp * cplx(re, im);
  }

  // Hermite function tables on the y nodes and on each z-axis.
  std::vector<std::vector<double>> hy(M);
  for (int j = 0; j < M; ++j)
    hy[j] = hermite_functions(ym, g.y_nodes()[j]);
  std::vector<std::vector<std::vector<double>>> hz(k);
  const double inv_sqrt = 1.0 / std::sqrt(spec.z_scale);
  for (int a = 0; a < k; ++a) {
    const auto z = g.z_coordinates(a);
    hz[a].resize(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) {
      hz[a][i] = hermite_functions(zm, z[i] / spec.z_scale);
      for (auto &v : hz[a][i])
        v *= inv_sqrt;
    }
  }

  // Contract the z-factors first: zc(m, q) = Σ_j c(m, j) Π h_{j_a}(z_a).
  std::vector<cplx> zc(static_cast<std::size_t>(ym) * Z);
  std::vector<int> zi(k);
  for (std::size_t q = 0; q < Z; ++q) {
    std::size_t rest = q;
    for (int a = k - 1; a >= 0; --a) {
      const auto N = static_cast<std::size_t>(g.z_axes()[a].points);
      zi[a] = static_cast<int>(rest % N);
      rest /= N;
    }
    for (std::size_t t = 0; t < terms; ++t) {
      std::size_t r = t;
      double prod = 1.0;
      for (int a = k - 1; a >= 0; --a) {
        prod *= hz[a][zi[a]][r % zm];
        r /= zm;
      }
      zc[r * Z + q] += coef[t] * prod;
    }
  }
  std::vector<cplx> data(g.size());
  for (int j = 0; j < M; ++j)
    for (int m = 0; m < ym; ++m)
      for (std::size_t q = 0; q < Z; ++q)
        data[j * Z + q] += hy[j][m] * zc[m * Z + q];

  Field f(params, std::move(grid), Representation::Physical, std::move(data));
  const double norm = f.l2_norm();
  if (!(norm > 0.0))
    throw std::runtime_error("random_field: degenerate sample");
  return f * cplx(1.0 / norm, 0.0);
}

double action_on_ray(const FunctionalReport &rep, const ModelParams &params, double t) {
  const double s = params.sigma_value();
  return 0.5 * t * t * rep.B1sq - std::pow(t, 2.0 * s + 2.0) * rep.L2s2s2 / (2.0 * s + 2.0);
}

double amplitude_for_action(const FunctionalReport &rep, const ModelParams &params, double target,
                            bool beyond_nehari) {
  if (!(rep.L2s2s2 > 0.0))
    throw ValidationError("amplitude_for_action: zero field");
  const double s = params.sigma_value();
  const double t_n = std::pow(rep.B1sq / rep.L2s2s2, 1.0 / (2.0 * s));
  if (!(target < action_on_ray(rep, params, t_n)))
    throw ValidationError("amplitude_for_action: target above the ray maximum");
  double lo = 0.0;
  double hi = t_n;
  if (beyond_nehari) {
    lo = t_n;
    hi = 2.0 * t_n;
    while (action_on_ray(rep, params, hi) > target)
      hi *= 2.0;
  } else if (target <= 0.0) {
    throw ValidationError("amplitude_for_action: target must be positive below the Nehari amplitude");
  }
  // S increases on (0, t_n) and decreases on (t_n, ∞).
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const bool above = action_on_ray(rep, params, mid) > target;
    if (above != beyond_nehari)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

Field k_minus_sample(const Field &f, double beta, double margin) {
  const auto rep = evaluate(f);
  const double t = amplitude_for_action(rep, f.params(), (1.0 - margin) * beta, true);
  Field out = f * cplx(t, 0.0);
  const auto r = evaluate(out);
  if (!(r.S < beta) || !(r.P < 0.0))
    throw std::runtime_error("k_minus_sample: generated state is not in K-");
  return out;
}

Field k_plus_sample(const Field &f, double beta, double fraction) {
  const auto rep = evaluate(f);
  const double t = amplitude_for_action(rep, f.params(), fraction * beta, false);
  return f * cplx(t, 0.0);
}

} // namespace phnls
