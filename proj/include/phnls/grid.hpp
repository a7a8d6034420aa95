#pragma once

#include "phnls/hermite.hpp"

#include <complex>
#include <cstddef>
#include <memory>
#include <vector>

namespace phnls {

using cplx = std::complex<double>;

struct ZAxis {
  int points = 0;
  double length = 0.0;

  friend bool operator==(const ZAxis &, const ZAxis &) = default;
};

/// Hermite functions on the confined y-axis times a periodic Fourier grid
/// on each free z-axis.
///
/// Data layout: y is the slowest index, the flattened z-block is fastest
/// (last z-axis fastest within it). Entry (j, q) lives at j·z_size() + q.
///
/// Coefficients c(m, κ) expand u(y, z) = Σ c(m, κ) h_m(y) e^{ik_κ·z} with
/// z_j = −L/2 + j·L/N, so ‖u‖²_{L²} = z_volume()·Σ|c|².
///
/// An optional finer Gauss–Hermite rule (quadrature_nodes ≥ hermite_modes)
/// serves nonlinear integrals and the stationary solvers; with the default
/// it coincides with the collocation nodes.
class Grid {
public:
  Grid(int hermite_modes, std::vector<ZAxis> z_axes, int quadrature_nodes = 0);
  ~Grid();
  Grid(const Grid &) = delete;
  Grid &operator=(const Grid &) = delete;

  static std::shared_ptr<const Grid> make(int hermite_modes, std::vector<ZAxis> z_axes, int quadrature_nodes = 0);

  int hermite_modes() const { return basis_.modes; }
  int free_dims() const { return static_cast<int>(axes_.size()); }
  const std::vector<ZAxis> &z_axes() const { return axes_; }
  std::size_t z_size() const { return z_size_; }
  std::size_t size() const { return z_size_ * static_cast<std::size_t>(basis_.modes); }

  const HermiteBasis &hermite() const { return basis_; }
  const std::vector<double> &y_nodes() const { return basis_.nodes; }
  const std::vector<double> &y_weights() const { return basis_.weights; }

  double dz(int axis) const;
  /// Product of the z spacings: the z part of the quadrature measure.
  double z_cell() const { return z_cell_; }
  /// Product of the box lengths.
  double z_volume() const { return z_volume_; }

  std::vector<double> z_coordinates(int axis) const;
  /// Signed mode numbers κ in FFT order; the Nyquist mode is −N/2.
  std::vector<int> mode_numbers(int axis) const;
  /// 2πκ/L in FFT order.
  std::vector<double> wavenumbers(int axis) const;

  /// Per flattened z-index tables.
  const std::vector<double> &k_squared() const { return ksq_; }
  /// Wavenumber along one axis with the Nyquist mode zeroed, for odd
  /// derivatives.
  const std::vector<double> &k_component(int axis) const { return kcomp_[axis]; }
  const std::vector<double> &z_component(int axis) const { return zcomp_[axis]; }
  /// |κ| within 10% of Nyquist along some axis.
  const std::vector<unsigned char> &z_tail_mask() const { return ztail_; }
  /// First Hermite mode counted as spectral tail.
  int hermite_tail_start() const;

  /// Physical values → coefficients. in and out may alias.
  void forward(const cplx *in, cplx *out) const;
  /// Coefficients → physical values. in and out may alias.
  void inverse(const cplx *in, cplx *out) const;

  int quadrature_nodes() const { return quad_nodes_; }
  const std::vector<double> &quadrature_y() const;
  const std::vector<double> &quadrature_weights() const;
  /// Coefficients → values at the quadrature nodes (quadrature_nodes() rows).
  std::vector<cplx> to_quadrature(const cplx *coeff) const;
  /// Projection of quadrature-node values onto the coefficients.
  std::vector<cplx> from_quadrature(const cplx *values) const;

  /// Same mode counts, quadrature, point counts and box lengths.
  bool same_layout(const Grid &other) const;

private:
  void fft(cplx *data, int sign) const;

  HermiteBasis basis_;
  int quad_nodes_ = 0;
  HermiteBasis fine_;
  Eigen::MatrixXd fine_synthesis_; // (quadrature node, mode)
  Eigen::MatrixXd fine_analysis_;  // (mode, quadrature node)
  std::vector<ZAxis> axes_;
  std::size_t z_size_ = 1;
  double z_cell_ = 1.0;
  double z_volume_ = 1.0;
  std::vector<double> ksq_;
  std::vector<std::vector<double>> kcomp_;
  std::vector<std::vector<double>> zcomp_;
  std::vector<double> parity_; // (−1)^{Σκ}/N_total
  std::vector<unsigned char> ztail_;
  void *plan_forward_ = nullptr;
  void *plan_backward_ = nullptr;
};

using GridPtr = std::shared_ptr<const Grid>;

} // namespace phnls
