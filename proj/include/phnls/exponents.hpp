#pragma once

#include "phnls/model.hpp"
#include "phnls/rational.hpp"

#include <optional>
#include <string>

namespace phnls {

/// Positive root of 2dσ² + (d−2)σ − 2 = 0, the threshold above which
/// q ≥ 2σ+1 holds for the fixed Strichartz indices.
struct SigmaCritical {
  int d = 0;
  /// Polynomial coefficients (a, b, c) of aσ² + bσ + c.
  std::int64_t a = 0, b = 0, c = 0;
  double value = 0.0;
  /// Set when the discriminant b² − 4ac is a perfect square.
  std::optional<Rational> exact;
  std::string description() const;
};

SigmaCritical sigma_c(int d);

/// The fixed Lebesgue indices used in the scattering analysis. All values
/// are exact; the constructor asserts the pairing and Hölder identities.
struct ExponentSet {
  int d = 0;
  int n = 0;
  Rational sigma;
  Rational q_tilde, p_tilde, p, q, r, p0, q0;
  /// Sobolev index s = ½(d/2 − 1/σ).
  Rational s;
  /// Dispersive decay rate δ = (d−n)(½ − 1/r).
  Rational delta;
  SigmaCritical sigma_critical;
};

/// Requires the Strichartz window 2/(d−n) ≤ σ < 2/(d−2); throws
/// ValidationError outside it.
ExponentSet exponent_set(int d, int n, const Rational &sigma);

/// 2/q = d(½ − 1/r) with 2 ≤ r < 2d/(d−2) (r < ∞ when d = 2).
bool check_admissible(const Exponent &q, const Exponent &r, int d);

/// Both relations of the triplet condition: admissible (q, r) and
/// 2/p = (d−n)(½ − 1/r).
bool check_triplet(const Exponent &p, const Exponent &q, const Exponent &r, int d, int n);

struct AcceptabilityReport {
  /// 2/p + 2/p̃ = (d−n)(1 − 2/r).
  bool scaling_identity = false;
  /// 1/p + (d−n)/r < (d−n)/2.
  bool p_acceptable = false;
  /// 1/p̃ + (d−n)/r < (d−n)/2.
  bool p_tilde_acceptable = false;
  /// 1/p + 1/p̃ < 1.
  bool sum_below_one = false;

  bool conditions_hold() const { return p_acceptable && p_tilde_acceptable && sum_below_one; }
  bool all() const { return scaling_identity && conditions_hold(); }
};

AcceptabilityReport check_acceptable(const Exponent &p, const Exponent &p_tilde, const Exponent &r, int d, int n);

/// Hölder conjugate x/(x−1) of a finite exponent x > 1.
Rational conjugate(const Rational &x);

} // namespace phnls
