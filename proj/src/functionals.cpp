#include "phnls/functionals.hpp"

#include "phnls/error.hpp"
#include "phnls/log.hpp"

#include <cmath>
#include <sstream>

namespace phnls {

PowerLaw::PowerLaw(const Rational &sigma) : exponent_(sigma.to_double()) {
  if (sigma.is_integer()) {
    kind_ = Kind::Integer;
    whole_ = static_cast<int>(sigma.num());
  } else if (sigma.den() == 2) {
    kind_ = Kind::HalfInteger;
    whole_ = static_cast<int>((sigma.num() - 1) / 2);
  } else {
    kind_ = Kind::General;
  }
}

double PowerLaw::operator()(double x) const {
  switch (kind_) {
  case Kind::Integer: {
    double r = 1.0;
    for (int i = 0; i < whole_; ++i)
      r *= x;
    return r;
  }
  case Kind::HalfInteger: {
    double r = std::sqrt(x);
    for (int i = 0; i < whole_; ++i)
      r *= x;
    return r;
  }
  case Kind::General:
    break;
  }
  return x > 0.0 ? std::pow(x, exponent_) : 0.0;
}

FunctionalReport evaluate(const Field &f) {
  const Grid &g = f.grid();
  const ModelParams &p = f.params();
  const int M = g.hermite_modes();
  const std::size_t Z = g.z_size();
  const int rank = g.free_dims();
  const double vz = g.z_volume();
  const Field c = f.to_coefficients();
  const Field u = f.from_coefficients();
  const auto &cd = c.data();

  FunctionalReport r;
  r.G.assign(rank, 0.0);
  double mass = 0.0;
  double gz = 0.0;
  for (int m = 0; m < M; ++m) {
    const cplx *row = cd.data() + m * Z;
    for (std::size_t q = 0; q < Z; ++q) {
      const double w = std::norm(row[q]);
      mass += w;
      gz += g.k_squared()[q] * w;
      for (int a = 0; a < rank; ++a)
        r.G[a] += g.k_component(a)[q] * w;
    }
  }
  r.M = vz * mass;
  r.gradz_sq = vz * gz;
  for (auto &x : r.G)
    x *= vz;
  r.grady_sq = vz * sum_abs2(ladder::dy(cd.data(), M, Z));
  r.ymom_sq = vz * sum_abs2(ladder::y(cd.data(), M, Z));

  const PowerLaw power(p.sigma);
  const auto &w = g.y_weights();
  double nonlinear = 0.0;
  {
    const auto uq = g.quadrature_nodes() == M ? u.data() : g.to_quadrature(cd.data());
    const auto &wq = g.quadrature_weights();
    for (int j = 0; j < g.quadrature_nodes(); ++j) {
      double row_nl = 0.0;
      for (std::size_t q = 0; q < Z; ++q) {
        const double a2 = std::norm(uq[j * Z + q]);
        row_nl += a2 * power(a2);
      }
      nonlinear += wq[j] * row_nl;
    }
  }
  double moment = 0.0;
  for (int j = 0; j < M; ++j) {
    double row_mom = 0.0;
    for (std::size_t q = 0; q < Z; ++q) {
      const double a2 = std::norm(u.data()[j * Z + q]);
      double zz = 0.0;
      for (int a = 0; a < rank; ++a)
        zz += g.z_component(a)[q] * g.z_component(a)[q];
      row_mom += zz * a2;
    }
    moment += w[j] * row_mom;
  }
  r.L2s2s2 = g.z_cell() * nonlinear;
  r.sigma_weight = g.z_cell() * moment;

  const double s = p.sigma_value();
  const double k = p.free_dims();
  r.B1dot_sq = r.grady_sq + r.gradz_sq + r.ymom_sq;
  r.B1sq = r.B1dot_sq + r.M;
  r.E = 0.5 * r.B1dot_sq + p.lambda * r.L2s2s2 / (2.0 * s + 2.0);
  r.S = r.E + 0.5 * r.M;
  r.I = r.B1sq - r.L2s2s2;
  r.P = (2.0 / k) * r.gradz_sq - (s / (s + 1.0)) * r.L2s2s2;
  return r;
}

bool ScaleParams::admissible(const ModelParams &params) const {
  const double k = params.free_dims();
  const double s = params.sigma_value();
  return a > 0.0 && b <= 0.0 && 2.0 * a + b * k >= 0.0 && s * a + b > 0.0;
}

namespace {

// Applies an N×N matrix along one z-axis of a (M × z-block) array.
void apply_along_axis(std::vector<cplx> &data, const Grid &g, int axis, const std::vector<cplx> &mat) {
  const int N = g.z_axes()[axis].points;
  std::size_t inner = 1;
  for (int a = axis + 1; a < g.free_dims(); ++a)
    inner *= static_cast<std::size_t>(g.z_axes()[a].points);
  const std::size_t outer = data.size() / (inner * N);
  std::vector<cplx> line(N);
  std::vector<cplx> out(N);
  for (std::size_t o = 0; o < outer; ++o)
    for (std::size_t in = 0; in < inner; ++in) {
      cplx *base = data.data() + o * N * inner + in;
      for (int i = 0; i < N; ++i)
        line[i] = base[i * inner];
      for (int j = 0; j < N; ++j) {
        cplx acc = 0.0;
        const cplx *mrow = mat.data() + static_cast<std::size_t>(j) * N;
        for (int i = 0; i < N; ++i)
          acc += mrow[i] * line[i];
        out[j] = acc;
      }
      for (int j = 0; j < N; ++j)
        base[j * inner] = out[j];
    }
}

// Physical values of f at (y_j, s·z) from its coefficients.
Field dilate(const Field &f, double s, double amplitude) {
  const Grid &g = f.grid();
  std::vector<cplx> data = f.to_coefficients().data();
  for (int a = 0; a < g.free_dims(); ++a) {
    const int N = g.z_axes()[a].points;
    const auto kappa = g.mode_numbers(a);
    const auto k = g.wavenumbers(a);
    const auto z = g.z_coordinates(a);
    const double half = 0.5 * g.z_axes()[a].length;
    std::vector<cplx> mat(static_cast<std::size_t>(N) * N, 0.0);
    for (int j = 0; j < N; ++j) {
      // outside the box the field is zero, not a periodic image
      if (s * z[j] < -half || s * z[j] >= half)
        continue;
      for (int i = 0; i < N; ++i) {
        const double phase = k[i] * s * z[j];
        mat[static_cast<std::size_t>(j) * N + i] =
            kappa[i] == -N / 2 ? cplx(std::cos(phase), 0.0) : cplx(std::cos(phase), std::sin(phase));
      }
    }
    apply_along_axis(data, g, a, mat);
  }
  using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  const auto M = static_cast<Eigen::Index>(g.hermite_modes());
  const auto cols = static_cast<Eigen::Index>(2 * g.z_size());
  std::vector<cplx> values(g.size());
  Eigen::Map<const RowMajor> x(reinterpret_cast<const double *>(data.data()), M, cols);
  Eigen::Map<RowMajor> y(reinterpret_cast<double *>(values.data()), M, cols);
  y.noalias() = g.hermite().synthesis * x;
  for (auto &v : values)
    v *= amplitude;
  Field out(f.params(), f.grid_ptr(), Representation::Physical, std::move(values));

  const double tail = tail_fraction(out);
  if (tail > 1e-6) {
    std::ostringstream msg;
    msg << "z-dilation by " << s << " leaves spectral tail fraction " << tail;
    warn(msg.str());
  }
  return out.in(f.representation());
}

} // namespace

Field scale_ab(const Field &f, const ScaleParams &sp) {
  const double s = std::exp(-sp.b * sp.lam);
  const double amplitude = std::exp(sp.a * sp.lam);
  if (s == 1.0)
    return f * cplx(amplitude, 0.0);
  return dilate(f, s, amplitude);
}

Field scale_r(const Field &f, double r) {
  if (!(r > 0.0))
    throw ValidationError("scale_r: r must be positive");
  if (r == 1.0)
    return f;
  return dilate(f, r, std::pow(r, 0.5 * f.params().free_dims()));
}

double pohozaev_radius(const FunctionalReport &rep, const ModelParams &params) {
  const double k = params.free_dims();
  const double s = params.sigma_value();
  const double expo = s * k - 2.0;
  if (std::abs(expo) < 1e-14)
    throw ValidationError("pohozaev_radius: σ(d−n) = 2 leaves P homogeneous in r");
  if (!(rep.gradz_sq > 0.0) || !(rep.L2s2s2 > 0.0))
    throw ValidationError("pohozaev_radius: need positive gradz_sq and L2s2s2");
  const double ratio = (2.0 / k) * rep.gradz_sq / ((s / (s + 1.0)) * rep.L2s2s2);
  return std::pow(ratio, 1.0 / expo);
}

double J_ab(const FunctionalReport &rep, const ModelParams &params, double a, double b) {
  const double k = params.free_dims();
  const double s = params.sigma_value();
  const double base = rep.grady_sq + rep.ymom_sq + rep.M;
  return 0.5 * (2.0 * a + b * k) * base + 0.5 * (2.0 * a + b * (k - 2.0)) * rep.gradz_sq -
         (a * (2.0 * s + 2.0) + b * k) / (2.0 * s + 2.0) * rep.L2s2s2;
}

double J_ab(const Field &f, double a, double b) { return J_ab(evaluate(f), f.params(), a, b); }

BCoefficients b_coefficients(const ModelParams &params, double a, double b) {
  const double k = params.free_dims();
  const double s = params.sigma_value();
  BCoefficients c;
  c.denominator = a * (2.0 * s + 2.0) + b * k;
  if (std::abs(c.denominator) < 1e-14)
    throw InvalidScalePair("B_ab: a(2σ+2) + b(d−n) vanishes");
  c.alpha1 = 0.5 * (1.0 - (2.0 * a + b * k) / c.denominator);
  c.alpha2 = 0.5 * (1.0 - (2.0 * a + b * (k - 2.0)) / c.denominator);
  return c;
}

double B_ab(const FunctionalReport &rep, const ModelParams &params, double a, double b) {
  const auto c = b_coefficients(params, a, b);
  return c.alpha1 * (rep.grady_sq + rep.ymom_sq + rep.M) + c.alpha2 * rep.gradz_sq;
}

double B_ab(const Field &f, double a, double b) { return B_ab(evaluate(f), f.params(), a, b); }

NehariScaling nehari_scale(const Field &f) {
  const auto rep = evaluate(f);
  if (!(rep.M > 0.0) || !(rep.L2s2s2 > 0.0))
    throw ValidationError("nehari_scale: zero field");
  const double t = std::pow(rep.B1sq / rep.L2s2s2, 1.0 / (2.0 * f.params().sigma_value()));
  return {t, f * cplx(t, 0.0)};
}

GalileanBoost galilean_boost(const Field &f) {
  const auto rep = evaluate(f);
  if (!(rep.M > 0.0))
    throw ValidationError("galilean_boost: zero field");
  const Grid &g = f.grid();
  GalileanBoost out{std::vector<double>(rep.G.size()), f.from_coefficients()};
  for (std::size_t a = 0; a < rep.G.size(); ++a)
    out.z0[a] = -rep.G[a] / rep.M;
  auto &data = out.boosted.mutable_data();
  const std::size_t Z = g.z_size();
  std::vector<cplx> phase(Z);
  for (std::size_t q = 0; q < Z; ++q) {
    double arg = 0.0;
    for (int a = 0; a < g.free_dims(); ++a)
      arg += g.z_component(a)[q] * out.z0[a];
    phase[q] = {std::cos(arg), std::sin(arg)};
  }
  for (int j = 0; j < g.hermite_modes(); ++j)
    for (std::size_t q = 0; q < Z; ++q)
      data[j * Z + q] *= phase[q];
  out.boosted = out.boosted.in(f.representation());
  return out;
}

double y_virial_rate(const Field &f) {
  const Field c = f.to_coefficients();
  const int M = f.grid().hermite_modes();
  const std::size_t Z = f.grid().z_size();
  const auto yc = ladder::y(c.data().data(), M, Z);
  const auto dc = ladder::dy(c.data().data(), M, Z);
  double im = 0.0;
  for (std::size_t i = 0; i < yc.size(); ++i)
    im += (std::conj(yc[i]) * dc[i]).imag();
  return 4.0 * f.grid().z_volume() * im;
}

} // namespace phnls
