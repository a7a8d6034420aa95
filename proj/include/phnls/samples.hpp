#pragma once

#include "phnls/functionals.hpp"

#include <cstdint>
#include <vector>

namespace phnls {

/// A·e^{−y²/(2w_y²)}·e^{−|z−z₀|²/(2w_z²)}·e^{iv·z}, normalized so that
/// M = A² when the packet sits well inside the box.
struct GaussianSpec {
  double amplitude = 1.0;
  double width_y = 1.0;
  double width_z = 1.0;
  std::vector<double> offset_z;
  std::vector<double> velocity;
};

Field gaussian(const ModelParams &params, GridPtr grid, const GaussianSpec &spec = {});

/// h₀(y)·v(z) for a given z-profile.
Field factorized_h0(const ModelParams &params, GridPtr grid, const std::function<cplx(std::span<const double>)> &v);

/// Band-limited, z-localized random field: Σ c_{m,j} h_m(y) Π_a h_{j_a}(z_a/ℓ)
/// with complex normal c damped by e^{−(m+|j|)/decay}. Normalized to M = 1.
struct RandomFieldSpec {
  int y_modes = 6;
  int z_modes = 6;
  double z_scale = 1.5;
  double decay = 3.0;
};

Field random_field(const ModelParams &params, GridPtr grid, std::uint64_t seed, const RandomFieldSpec &spec = {});

/// S(t·f) along the amplitude ray, from the norms of f.
double action_on_ray(const FunctionalReport &rep, const ModelParams &params, double t);

/// Amplitude t with S(t·f) = target, on the branch below the Nehari
/// amplitude (beyond_nehari = false) or above it. Requires target to lie
/// below the maximum of S on the ray.
double amplitude_for_action(const FunctionalReport &rep, const ModelParams &params, double target,
                            bool beyond_nehari);

/// Rescales f beyond its Nehari amplitude so that S = (1 − margin)·β;
/// the result has P < 0 and S < β. Throws if the check fails.
Field k_minus_sample(const Field &f, double beta, double margin = 0.05);

/// Rescales f below its Nehari amplitude so that S = fraction·β.
Field k_plus_sample(const Field &f, double beta, double fraction = 0.5);

} // namespace phnls
