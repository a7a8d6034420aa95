#include "phnls/hermite.hpp"

#include "phnls/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace phnls {

namespace {

// Runs the normalized recurrence from a unit seed and carries the
// e^{−y²/2} factor as a separate log scale, so that h_m stays accurate
// where h_0 itself underflows.
template <typename Visit> void recurrence(int count, double y, Visit visit) {
  double log_scale = -0.5 * y * y - 0.25 * std::log(std::numbers::pi);
  double prev = 0.0;
  double cur = 1.0;
  for (int m = 0; m < count; ++m) {
    visit(m, cur, log_scale);
    const double next = std::sqrt(2.0 / (m + 1)) * y * cur - std::sqrt(static_cast<double>(m) / (m + 1)) * prev;
    prev = cur;
    cur = next;
    const double mag = std::max(std::abs(cur), std::abs(prev));
    if (mag > 1e150 || (mag < 1e-150 && mag > 0.0)) {
      const double shift = std::log(mag);
      cur /= mag;
      prev /= mag;
      log_scale += shift;
    }
  }
  visit(count, cur, log_scale);
}

// h_count(y) and h_{count-1}(y).
std::pair<double, double> top_pair(int count, double y) {
  double top = 0.0;
  double below = 0.0;
  recurrence(count, y, [&](int m, double v, double ls) {
    if (m == count - 1)
      below = v * std::exp(ls);
    else if (m == count)
      top = v * std::exp(ls);
  });
  return {top, below};
}

} // namespace

std::vector<double> hermite_functions(int count, double y) {
  std::vector<double> h(static_cast<std::size_t>(std::max(count, 0)));
  if (count <= 0)
    return h;
  recurrence(count - 1, y, [&](int m, double v, double ls) { h[m] = v * std::exp(ls); });
  return h;
}

HermiteBasis make_hermite_basis(int modes) {
  if (modes < 1)
    throw ValidationError("hermite: need at least one mode");
  const int M = modes;

  // Golub–Welsch: the Jacobi matrix of the physicists' Hermite weight.
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(M, M);
  for (int k = 1; k < M; ++k) {
    jacobi(k, k - 1) = std::sqrt(0.5 * k);
    jacobi(k - 1, k) = jacobi(k, k - 1);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(jacobi, Eigen::EigenvaluesOnly);

  HermiteBasis basis;
  basis.modes = M;
  basis.nodes.resize(M);
  basis.weights.resize(M);
  for (int j = 0; j < M; ++j) {
    double y = eig.eigenvalues()(j);
    // Newton polish on h_M, with h_M' = √(2M) h_{M−1} − y h_M.
    for (int it = 0; it < 3; ++it) {
      const auto [hm, hm1] = top_pair(M, y);
      const double deriv = std::sqrt(2.0 * M) * hm1 - y * hm;
      if (deriv == 0.0)
        break;
      y -= hm / deriv;
    }
    basis.nodes[j] = y;
  }
  // Exact antisymmetry of the node set keeps parity projections clean.
  for (int j = 0; j < M / 2; ++j) {
    const double y = 0.5 * (basis.nodes[M - 1 - j] - basis.nodes[j]);
    basis.nodes[j] = -y;
    basis.nodes[M - 1 - j] = y;
  }
  if (M % 2 == 1)
    basis.nodes[M / 2] = 0.0;

  basis.analysis.resize(M, M);
  basis.synthesis.resize(M, M);
  for (int j = 0; j < M; ++j) {
    const auto h = hermite_functions(M, basis.nodes[j]);
    basis.weights[j] = 1.0 / (M * h[M - 1] * h[M - 1]);
    for (int m = 0; m < M; ++m) {
      basis.synthesis(j, m) = h[m];
      basis.analysis(m, j) = basis.weights[j] * h[m];
    }
  }
  return basis;
}

} // namespace phnls
