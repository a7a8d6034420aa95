#include "phnls/grid.hpp"

#include "phnls/error.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <mutex>
#include <numbers>
#include <string>

namespace phnls {

namespace {

// The FFTW planner is not reentrant.
std::mutex &planner_mutex() {
  static std::mutex m;
  return m;
}

bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

} // namespace

Grid::Grid(int hermite_modes, std::vector<ZAxis> z_axes, int quadrature_nodes) : axes_(std::move(z_axes)) {
  if (hermite_modes < 8)
    throw ValidationError("grid: hermite_modes must be at least 8, got " + std::to_string(hermite_modes));
  if (axes_.empty())
    throw ValidationError("grid: need at least one free z-axis");
  for (const auto &ax : axes_) {
    if (!power_of_two(ax.points) || ax.points < 2)
      throw ValidationError("grid: z_points must be a power of two >= 2, got " + std::to_string(ax.points));
    if (!(ax.length > 0.0) || !std::isfinite(ax.length))
      throw ValidationError("grid: z_length must be positive");
  }
  basis_ = make_hermite_basis(hermite_modes);
  quad_nodes_ = quadrature_nodes == 0 ? hermite_modes : quadrature_nodes;
  if (quad_nodes_ < hermite_modes)
    throw ValidationError("grid: quadrature_nodes must be at least hermite_modes");
  if (quad_nodes_ > hermite_modes) {
    fine_ = make_hermite_basis(quad_nodes_);
    fine_synthesis_ = fine_.synthesis.leftCols(hermite_modes);
    fine_analysis_ = fine_.analysis.topRows(hermite_modes);
  }

  for (const auto &ax : axes_) {
    z_size_ *= static_cast<std::size_t>(ax.points);
    z_cell_ *= ax.length / ax.points;
    z_volume_ *= ax.length;
  }

  const int rank = free_dims();
  ksq_.assign(z_size_, 0.0);
  kcomp_.assign(rank, std::vector<double>(z_size_, 0.0));
  zcomp_.assign(rank, std::vector<double>(z_size_, 0.0));
  parity_.assign(z_size_, 1.0 / static_cast<double>(z_size_));
  ztail_.assign(z_size_, 0);

  std::size_t stride = z_size_;
  for (int a = 0; a < rank; ++a) {
    const int N = axes_[a].points;
    stride /= static_cast<std::size_t>(N);
    const auto kappa = mode_numbers(a);
    const auto k = wavenumbers(a);
    const auto z = z_coordinates(a);
    for (std::size_t q = 0; q < z_size_; ++q) {
      const auto i = static_cast<int>((q / stride) % static_cast<std::size_t>(N));
      ksq_[q] += k[i] * k[i];
      kcomp_[a][q] = (kappa[i] == -N / 2) ? 0.0 : k[i];
      zcomp_[a][q] = z[i];
      if (kappa[i] % 2 != 0)
        parity_[q] = -parity_[q];
      if (std::abs(kappa[i]) >= 0.9 * (N / 2))
        ztail_[q] = 1;
    }
  }

  std::vector<int> dims(rank);
  for (int a = 0; a < rank; ++a)
    dims[a] = axes_[a].points;
  std::vector<cplx> scratch(size());
  auto *buf = reinterpret_cast<fftw_complex *>(scratch.data());
  const int howmany = basis_.modes;
  const int dist = static_cast<int>(z_size_);
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  std::lock_guard<std::mutex> lock(planner_mutex());
  plan_forward_ = fftw_plan_many_dft(rank, dims.data(), howmany, buf, nullptr, 1, dist, buf, nullptr, 1, dist,
                                     FFTW_FORWARD, flags);
  plan_backward_ = fftw_plan_many_dft(rank, dims.data(), howmany, buf, nullptr, 1, dist, buf, nullptr, 1, dist,
                                      FFTW_BACKWARD, flags);
  if (plan_forward_ == nullptr || plan_backward_ == nullptr)
    throw std::runtime_error("grid: FFTW planning failed");
}

Grid::~Grid() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  if (plan_forward_ != nullptr)
    fftw_destroy_plan(static_cast<fftw_plan>(plan_forward_));
  if (plan_backward_ != nullptr)
    fftw_destroy_plan(static_cast<fftw_plan>(plan_backward_));
}

std::shared_ptr<const Grid> Grid::make(int hermite_modes, std::vector<ZAxis> z_axes, int quadrature_nodes) {
  return std::make_shared<const Grid>(hermite_modes, std::move(z_axes), quadrature_nodes);
}

const std::vector<double> &Grid::quadrature_y() const {
  return quad_nodes_ > basis_.modes ? fine_.nodes : basis_.nodes;
}

const std::vector<double> &Grid::quadrature_weights() const {
  return quad_nodes_ > basis_.modes ? fine_.weights : basis_.weights;
}

std::vector<cplx> Grid::to_quadrature(const cplx *coeff) const {
  if (quad_nodes_ == basis_.modes) {
    std::vector<cplx> out(size());
    inverse(coeff, out.data());
    return out;
  }
  const auto M = static_cast<Eigen::Index>(basis_.modes);
  const auto cols = static_cast<Eigen::Index>(2 * z_size_);
  std::vector<cplx> tmp(size());
  const double n_total = static_cast<double>(z_size_);
  for (Eigen::Index m = 0; m < M; ++m)
    for (std::size_t q = 0; q < z_size_; ++q)
      tmp[m * z_size_ + q] = coeff[m * z_size_ + q] * (parity_[q] * n_total);
  fft(tmp.data(), +1);
  std::vector<cplx> out(static_cast<std::size_t>(quad_nodes_) * z_size_);
  Eigen::Map<const RowMajor> x(reinterpret_cast<const double *>(tmp.data()), M, cols);
  Eigen::Map<RowMajor> y(reinterpret_cast<double *>(out.data()), quad_nodes_, cols);
  y.noalias() = fine_synthesis_ * x;
  return out;
}

std::vector<cplx> Grid::from_quadrature(const cplx *values) const {
  std::vector<cplx> out(size());
  if (quad_nodes_ == basis_.modes) {
    forward(values, out.data());
    return out;
  }
  const auto M = static_cast<Eigen::Index>(basis_.modes);
  const auto cols = static_cast<Eigen::Index>(2 * z_size_);
  Eigen::Map<const RowMajor> x(reinterpret_cast<const double *>(values), quad_nodes_, cols);
  Eigen::Map<RowMajor> y(reinterpret_cast<double *>(out.data()), M, cols);
  y.noalias() = fine_analysis_ * x;
  fft(out.data(), -1);
  for (Eigen::Index m = 0; m < M; ++m)
    for (std::size_t q = 0; q < z_size_; ++q)
      out[m * z_size_ + q] *= parity_[q];
  return out;
}

double Grid::dz(int axis) const { return axes_.at(axis).length / axes_.at(axis).points; }

std::vector<double> Grid::z_coordinates(int axis) const {
  const auto &ax = axes_.at(axis);
  std::vector<double> z(ax.points);
  for (int i = 0; i < ax.points; ++i)
    z[i] = -0.5 * ax.length + i * (ax.length / ax.points);
  return z;
}

std::vector<int> Grid::mode_numbers(int axis) const {
  const int N = axes_.at(axis).points;
  std::vector<int> kappa(N);
  for (int i = 0; i < N; ++i)
    kappa[i] = i < N / 2 ? i : i - N;
  return kappa;
}

std::vector<double> Grid::wavenumbers(int axis) const {
  const auto kappa = mode_numbers(axis);
  const double scale = 2.0 * std::numbers::pi / axes_.at(axis).length;
  std::vector<double> k(kappa.size());
  for (std::size_t i = 0; i < kappa.size(); ++i)
    k[i] = scale * kappa[i];
  return k;
}

int Grid::hermite_tail_start() const {
  return static_cast<int>(std::ceil(0.9 * basis_.modes));
}

void Grid::fft(cplx *data, int sign) const {
  auto *p = reinterpret_cast<fftw_complex *>(data);
  fftw_execute_dft(static_cast<fftw_plan>(sign < 0 ? plan_forward_ : plan_backward_), p, p);
}

void Grid::forward(const cplx *in, cplx *out) const {
  const auto M = static_cast<Eigen::Index>(basis_.modes);
  const auto cols = static_cast<Eigen::Index>(2 * z_size_);
  std::vector<cplx> tmp;
  const cplx *src = in;
  if (in == out) {
    tmp.assign(in, in + size());
    src = tmp.data();
  }
  Eigen::Map<const RowMajor> x(reinterpret_cast<const double *>(src), M, cols);
  Eigen::Map<RowMajor> y(reinterpret_cast<double *>(out), M, cols);
  y.noalias() = basis_.analysis * x;
  fft(out, -1);
  for (Eigen::Index m = 0; m < M; ++m) {
    cplx *row = out + m * z_size_;
    for (std::size_t q = 0; q < z_size_; ++q)
      row[q] *= parity_[q];
  }
}

void Grid::inverse(const cplx *in, cplx *out) const {
  const auto M = static_cast<Eigen::Index>(basis_.modes);
  const auto cols = static_cast<Eigen::Index>(2 * z_size_);
  std::vector<cplx> tmp(size());
  const double n_total = static_cast<double>(z_size_);
  for (Eigen::Index m = 0; m < M; ++m) {
    const cplx *row = in + m * z_size_;
    cplx *dst = tmp.data() + m * z_size_;
    for (std::size_t q = 0; q < z_size_; ++q)
      dst[q] = row[q] * (parity_[q] * n_total);
  }
  fft(tmp.data(), +1);
  Eigen::Map<const RowMajor> x(reinterpret_cast<const double *>(tmp.data()), M, cols);
  Eigen::Map<RowMajor> y(reinterpret_cast<double *>(out), M, cols);
  y.noalias() = basis_.synthesis * x;
}

bool Grid::same_layout(const Grid &other) const {
  return hermite_modes() == other.hermite_modes() && quad_nodes_ == other.quad_nodes_ && axes_ == other.axes_;
}

} // namespace phnls
