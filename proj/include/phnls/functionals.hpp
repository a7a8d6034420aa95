#pragma once

#include "phnls/field.hpp"

#include <vector>

namespace phnls {

/// x ↦ x^σ for x = |u|², with fast paths for integer and half-integer σ.
class PowerLaw {
public:
  explicit PowerLaw(const Rational &sigma);
  double operator()(double abs2) const;

private:
  enum class Kind { Integer, HalfInteger, General } kind_;
  int whole_ = 0;
  double exponent_ = 0.0;
};

/// Scalar functionals of one state. I, P and the J/B family use the
/// focusing nonlinearity; E carries the sign λ.
struct FunctionalReport {
  double M = 0.0;
  std::vector<double> G;
  double E = 0.0;
  double S = 0.0;
  double I = 0.0;
  double P = 0.0;
  double B1sq = 0.0;
  double B1dot_sq = 0.0;
  double L2s2s2 = 0.0;
  double gradz_sq = 0.0;
  double grady_sq = 0.0;
  double ymom_sq = 0.0;
  double sigma_weight = 0.0;

  double gradx_sq() const { return grady_sq + gradz_sq; }
};

FunctionalReport evaluate(const Field &f);

/// Amplitude and z-dilation exponents of φ ↦ e^{a·lam}φ(y, e^{−b·lam}z).
struct ScaleParams {
  double a = 1.0;
  double b = 0.0;
  double lam = 0.0;

  /// a > 0, b ≤ 0, 2a + b(d−n) ≥ 0, σa + b > 0.
  bool admissible(const ModelParams &params) const;
};

/// Resamples the trigonometric interpolant at e^{−b·lam}z on the same grid,
/// taking zero where that point leaves the box.
/// Warns when the result carries spectral tail mass above 1e−6.
Field scale_ab(const Field &f, const ScaleParams &sp);

/// r^{(d−n)/2} φ(y, rz).
Field scale_r(const Field &f, double r);

/// r₀ > 0 with P(scale_r(f, r₀)) = 0, from the closed-form power law in r.
double pohozaev_radius(const FunctionalReport &rep, const ModelParams &params);

/// ∂_lam S(scale_ab(f, a, b, lam)) at lam = 0, as a combination of norms.
double J_ab(const FunctionalReport &rep, const ModelParams &params, double a, double b);
double J_ab(const Field &f, double a, double b);

/// Coefficients of B = α₁(grady_sq + ymom_sq + M) + α₂·gradz_sq.
struct BCoefficients {
  double alpha1 = 0.0;
  double alpha2 = 0.0;
  /// a(2σ+2) + b(d−n).
  double denominator = 0.0;
};
BCoefficients b_coefficients(const ModelParams &params, double a, double b);

double B_ab(const FunctionalReport &rep, const ModelParams &params, double a, double b);
double B_ab(const Field &f, double a, double b);

struct NehariScaling {
  double t = 0.0;
  Field scaled;
};

/// t = (B1sq/L2s2s2)^{1/(2σ)}, so that I(t·f) = 0.
NehariScaling nehari_scale(const Field &f);

struct GalileanBoost {
  std::vector<double> z0;
  Field boosted;
};

/// e^{iz·z₀}f with z₀ = −G/M.
GalileanBoost galilean_boost(const Field &f);

/// 4 Im∫ ū y·∂_y u, the rate of change of ‖yu‖² under the flow.
double y_virial_rate(const Field &f);

} // namespace phnls
