#pragma once

#include <Eigen/Dense>

#include <vector>

namespace phnls {

/// Normalized Hermite functions h_0..h_{count−1} at y,
/// h_0 = π^{−1/4} e^{−y²/2}, orthonormal in L²(ℝ).
std::vector<double> hermite_functions(int count, double y);

/// Collocation data for the Hermite-function transform on M nodes.
///
/// nodes are the roots of h_M; weights are the Gauss–Hermite weights
/// with the e^{y²} factor absorbed, so that Σ_j w_j f(y_j) g(y_j) is exact
/// for f g = h_a h_b with a + b ≤ 2M − 1.
struct HermiteBasis {
  int modes = 0;
  std::vector<double> nodes;
  std::vector<double> weights;
  /// analysis(m, j) = w_j h_m(y_j): coefficients = analysis · values.
  Eigen::MatrixXd analysis;
  /// synthesis(j, m) = h_m(y_j): values = synthesis · coefficients.
  Eigen::MatrixXd synthesis;
};

HermiteBasis make_hermite_basis(int modes);

} // namespace phnls
