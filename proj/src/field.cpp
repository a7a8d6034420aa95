#include "phnls/field.hpp"

#include "phnls/error.hpp"

#include <cmath>
#include <string>

namespace phnls {

const char *to_string(Representation rep) {
  return rep == Representation::Physical ? "physical" : "coefficient";
}

Representation representation_from_string(const std::string &name) {
  if (name == "physical")
    return Representation::Physical;
  if (name == "coefficient")
    return Representation::Coefficient;
  throw ValidationError("unknown representation '" + name + "'");
}

Field::Field(ModelParams params, GridPtr grid, Representation rep, std::vector<cplx> data)
    : params_(params), grid_(std::move(grid)), rep_(rep), data_(std::move(data)) {
  check(params_);
  if (!grid_)
    throw ValidationError("field: null grid");
  if (params_.n != 1)
    throw ValidationError("field: the lattice supports n = 1 only, got n = " + std::to_string(params_.n));
  if (grid_->free_dims() != params_.free_dims())
    throw ValidationError("field: grid has " + std::to_string(grid_->free_dims()) + " z-axes but d - n = " +
                          std::to_string(params_.free_dims()));
  if (data_.size() != grid_->size())
    throw ValidationError("field: data size " + std::to_string(data_.size()) + " does not match grid size " +
                          std::to_string(grid_->size()));
  for (const auto &v : data_)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw ValidationError("field: non-finite value");
}

Field Field::zeros(const ModelParams &params, GridPtr grid, Representation rep) {
  const auto n = grid ? grid->size() : 0;
  return Field(params, std::move(grid), rep, std::vector<cplx>(n));
}

Field Field::sample(const ModelParams &params, GridPtr grid,
                    const std::function<cplx(double, std::span<const double>)> &f) {
  const Grid &g = *grid;
  const int rank = g.free_dims();
  std::vector<cplx> data(g.size());
  std::vector<double> z(rank);
  for (int j = 0; j < g.hermite_modes(); ++j) {
    const double y = g.y_nodes()[j];
    for (std::size_t q = 0; q < g.z_size(); ++q) {
      for (int a = 0; a < rank; ++a)
        z[a] = g.z_component(a)[q];
      data[j * g.z_size() + q] = f(y, z);
    }
  }
  return Field(params, std::move(grid), Representation::Physical, std::move(data));
}

Field Field::in(Representation rep) const {
  if (rep == rep_)
    return *this;
  Field out(*this);
  if (rep == Representation::Coefficient)
    grid_->forward(data_.data(), out.data_.data());
  else
    grid_->inverse(data_.data(), out.data_.data());
  out.rep_ = rep;
  return out;
}

double Field::l2_norm() const {
  if (rep_ == Representation::Coefficient)
    return std::sqrt(grid_->z_volume() * sum_abs2(data_));
  const auto &w = grid_->y_weights();
  const std::size_t Z = grid_->z_size();
  double total = 0.0;
  for (int j = 0; j < grid_->hermite_modes(); ++j) {
    double row = 0.0;
    for (std::size_t q = 0; q < Z; ++q)
      row += std::norm(data_[j * Z + q]);
    total += w[j] * row;
  }
  return std::sqrt(grid_->z_cell() * total);
}

void Field::require_compatible(const Field &rhs) const {
  if (rhs.rep_ != rep_ || !(rhs.params_ == params_) || !grid_->same_layout(*rhs.grid_))
    throw ValidationError("field: incompatible operands");
}

Field &Field::operator+=(const Field &rhs) {
  require_compatible(rhs);
  for (std::size_t i = 0; i < data_.size(); ++i)
    data_[i] += rhs.data_[i];
  return *this;
}

Field &Field::operator-=(const Field &rhs) {
  require_compatible(rhs);
  for (std::size_t i = 0; i < data_.size(); ++i)
    data_[i] -= rhs.data_[i];
  return *this;
}

Field &Field::operator*=(cplx s) {
  for (auto &v : data_)
    v *= s;
  return *this;
}

Field to_coefficients(const Field &f) { return f.to_coefficients(); }
Field from_coefficients(const Field &f) { return f.from_coefficients(); }

namespace ladder {

namespace {

std::vector<cplx> apply(const cplx *c, int M, std::size_t Z, double sign) {
  std::vector<cplx> out(static_cast<std::size_t>(M + 1) * Z);
  for (int m = 0; m <= M; ++m) {
    cplx *dst = out.data() + m * Z;
    if (m + 1 < M) {
      const double up = std::sqrt(0.5 * (m + 1));
      const cplx *src = c + (m + 1) * Z;
      for (std::size_t q = 0; q < Z; ++q)
        dst[q] += up * src[q];
    }
    if (m >= 1) {
      const double down = sign * std::sqrt(0.5 * m);
      const cplx *src = c + (m - 1) * Z;
      for (std::size_t q = 0; q < Z; ++q)
        dst[q] += down * src[q];
    }
  }
  return out;
}

} // namespace

std::vector<cplx> dy(const cplx *c, int M, std::size_t z_size) { return apply(c, M, z_size, -1.0); }
std::vector<cplx> y(const cplx *c, int M, std::size_t z_size) { return apply(c, M, z_size, +1.0); }

} // namespace ladder

double sum_abs2(const std::vector<cplx> &v) {
  double s = 0.0;
  for (const auto &x : v)
    s += std::norm(x);
  return s;
}

namespace {

Field truncated(const Field &like, std::vector<cplx> rows) {
  rows.resize(like.grid().size());
  Field out(like.params(), like.grid_ptr(), Representation::Coefficient, std::move(rows));
  return out.in(like.representation());
}

} // namespace

std::vector<Field> gradient_z(const Field &f) {
  const Field c = f.to_coefficients();
  const Grid &g = f.grid();
  const std::size_t Z = g.z_size();
  std::vector<Field> out;
  for (int a = 0; a < g.free_dims(); ++a) {
    Field d = c;
    auto &data = d.mutable_data();
    const auto &k = g.k_component(a);
    for (int m = 0; m < g.hermite_modes(); ++m)
      for (std::size_t q = 0; q < Z; ++q)
        data[m * Z + q] *= cplx(0.0, k[q]);
    out.push_back(d.in(f.representation()));
  }
  return out;
}

Field gradient_y(const Field &f) {
  const Field c = f.to_coefficients();
  return truncated(f, ladder::dy(c.data().data(), f.grid().hermite_modes(), f.grid().z_size()));
}

Field multiply_y(const Field &f) {
  const Field c = f.to_coefficients();
  return truncated(f, ladder::y(c.data().data(), f.grid().hermite_modes(), f.grid().z_size()));
}

double tail_fraction(const Field &f) {
  const Field c = f.to_coefficients();
  const Grid &g = f.grid();
  const std::size_t Z = g.z_size();
  const int m_tail = g.hermite_tail_start();
  const auto &mask = g.z_tail_mask();
  double total = 0.0;
  double tail = 0.0;
  for (int m = 0; m < g.hermite_modes(); ++m)
    for (std::size_t q = 0; q < Z; ++q) {
      const double w = std::norm(c.data()[m * Z + q]);
      total += w;
      if (m >= m_tail || mask[q])
        tail += w;
    }
  return total > 0.0 ? tail / total : 0.0;
}

} // namespace phnls
