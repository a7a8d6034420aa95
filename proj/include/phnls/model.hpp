#pragma once

#include "phnls/rational.hpp"

#include <optional>

namespace phnls {

/// Constants of i∂_t u = Hu + λ|u|^{2σ}u on ℝ^d with harmonic confinement
/// in n of the d directions.
struct ModelParams {
  int d = 2;
  int n = 1;
  Rational sigma{3};
  int lambda = -1;

  int free_dims() const { return d - n; }
  double sigma_value() const { return sigma.to_double(); }
  bool focusing() const { return lambda == -1; }

  friend bool operator==(const ModelParams &, const ModelParams &) = default;
};

struct ValidityReport {
  /// λ = −1, n = 1, σ ≥ 1/2 and 2/(d−1) < σ < 2/(d−2).
  bool theorem_window = false;
  /// 2/(d−n) ≤ σ < 2/(d−2).
  bool strichartz_window = false;
  /// 2/(d−n) < σ < 2/(d−2).
  bool profile_window = false;

  friend bool operator==(const ValidityReport &, const ValidityReport &) = default;
};

/// Upper energy-subcritical bound 2/(d−2); empty for d = 2 (no bound).
std::optional<Rational> energy_critical_sigma(int d);

/// Throws ValidationError on d < 2, n outside [1, d−1], σ ≤ 0 or λ ∉ {−1, 1}.
void check(const ModelParams &params);

/// Exact-rational window flags. Calls check() first.
ValidityReport validate(const ModelParams &params);

} // namespace phnls
