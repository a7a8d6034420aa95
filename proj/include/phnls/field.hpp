#pragma once

#include "phnls/grid.hpp"
#include "phnls/model.hpp"

#include <functional>
#include <span>
#include <vector>

namespace phnls {

enum class Representation { Physical, Coefficient };

const char *to_string(Representation rep);
Representation representation_from_string(const std::string &name);

/// Complex wavefunction on a Grid, either as collocation values or as
/// Hermite × Fourier coefficients. Layout as documented on Grid.
class Field {
public:
  /// Empty placeholder without a grid; only assignment is meaningful.
  Field() = default;
  /// Rejects non-finite data, size mismatch and grids that do not match
  /// the model (one Hermite axis, d − 1 free axes).
  Field(ModelParams params, GridPtr grid, Representation rep, std::vector<cplx> data);

  static Field zeros(const ModelParams &params, GridPtr grid, Representation rep = Representation::Physical);
  /// Samples f(y, z) at the collocation points.
  static Field sample(const ModelParams &params, GridPtr grid,
                      const std::function<cplx(double, std::span<const double>)> &f);

  const ModelParams &params() const { return params_; }
  const Grid &grid() const { return *grid_; }
  const GridPtr &grid_ptr() const { return grid_; }
  Representation representation() const { return rep_; }
  const std::vector<cplx> &data() const { return data_; }
  /// Mutable access for in-place kernels; callers keep values finite.
  std::vector<cplx> &mutable_data() { return data_; }
  std::size_t size() const { return data_.size(); }

  Field in(Representation rep) const;
  Field to_coefficients() const { return in(Representation::Coefficient); }
  Field from_coefficients() const { return in(Representation::Physical); }

  /// L² norm with the continuum measure, exact in either representation.
  double l2_norm() const;

  Field &operator+=(const Field &rhs);
  Field &operator-=(const Field &rhs);
  Field &operator*=(cplx s);
  friend Field operator+(Field lhs, const Field &rhs) { return lhs += rhs; }
  friend Field operator-(Field lhs, const Field &rhs) { return lhs -= rhs; }
  friend Field operator*(Field lhs, cplx s) { return lhs *= s; }
  friend Field operator*(cplx s, Field rhs) { return rhs *= s; }

private:
  void require_compatible(const Field &rhs) const;

  ModelParams params_;
  GridPtr grid_;
  Representation rep_ = Representation::Physical;
  std::vector<cplx> data_;
};

Field to_coefficients(const Field &f);
Field from_coefficients(const Field &f);

/// ∂_{z_a} u for every free axis, in the representation of f.
std::vector<Field> gradient_z(const Field &f);
/// ∂_y u, in the representation of f; the mode pushed to m = M is dropped.
Field gradient_y(const Field &f);
/// y·u, in the representation of f; the mode pushed to m = M is dropped.
Field multiply_y(const Field &f);

/// Share of Σ|c|² in modes with m ≥ 0.9M or |κ| ≥ 0.9·N/2 on some axis.
double tail_fraction(const Field &f);

namespace ladder {

/// Coefficient rows of ∂_y u and y·u. Input has M rows of z_size
/// entries; output has M + 1 rows so that no mode is lost.
std::vector<cplx> dy(const cplx *c, int M, std::size_t z_size);
std::vector<cplx> y(const cplx *c, int M, std::size_t z_size);

} // namespace ladder

/// Σ|v|² over a buffer.
double sum_abs2(const std::vector<cplx> &v);

} // namespace phnls
