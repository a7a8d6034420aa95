#pragma once

#include "phnls/grid.hpp"

#include <string>
#include <vector>

namespace phnls {

enum class CutoffKind { MassCutoff, QuadraticVirial, CenterOfMass };

const char *to_string(CutoffKind kind);

/// φ and its first four radial derivatives at one radius.
struct RadialValue {
  double phi = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
  double d3 = 0.0;
  double d4 = 0.0;
};

/// Radial profiles with R = 1; callers rescale.
namespace profile {

/// 0 on [0, 1/2], quintic smoothstep to 1 on [1/2, 1], 1 beyond.
RadialValue mass(double r);
/// r² on [0, 1], polynomial bridge on [1, 4], 0 beyond. φ″ ≤ 2 everywhere.
RadialValue quadratic(double r);
/// Odd θ with θ(s) = s on [−1, 1] and θ = 0 for |s| ≥ 2^{1/3}; d1 = θ′.
RadialValue theta(double s);

/// Outer edge of the quadratic bridge.
inline constexpr double quadratic_support = 4.0;

} // namespace profile

/// A cutoff sampled on the z-grid (z_size entries per table).
///
/// MassCutoff and QuadraticVirial are radial in z: phi, gradient,
/// Hessian, Laplacian and bilaplacian are filled. CenterOfMass is the
/// vector R·θ(z_a/R): component[a] and component_d1[a] = θ′(z_a/R).
struct CutoffProfile {
  CutoffKind kind = CutoffKind::MassCutoff;
  double R = 0.0;
  std::vector<double> phi;
  std::vector<std::vector<double>> gradient;
  /// hessian[a * k + b]
  std::vector<std::vector<double>> hessian;
  std::vector<double> laplacian;
  std::vector<double> bilaplacian;
  std::vector<std::vector<double>> component;
  std::vector<std::vector<double>> component_d1;

  /// Measured constants of the profile on a fine radial grid: max φ′·R
  /// (mass), max φ″ and R²·max|φ⁗| (quadratic), ‖θ‖∞ and ‖θ′‖∞ (centre of mass).
  double slope_constant = 0.0;
  double max_second = 0.0;
  double fourth_constant = 0.0;
};

/// Throws ValidationError if R does not fit the box or is under-resolved.
CutoffProfile make_cutoff(const Grid &grid, CutoffKind kind, double R);

} // namespace phnls
