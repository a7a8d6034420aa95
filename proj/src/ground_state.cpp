#include "phnls/ground_state.hpp"

#include "phnls/error.hpp"
#include "phnls/samples.hpp"

#include <cmath>
#include <sstream>

namespace phnls {

namespace {

// Flattened z-index of the mirror point κ_a → −κ_a.
std::vector<std::size_t> mirror_index(const Grid &g, int axis) {
  const std::size_t Z = g.z_size();
  std::size_t inner = 1;
  for (int a = axis + 1; a < g.free_dims(); ++a)
    inner *= static_cast<std::size_t>(g.z_axes()[a].points);
  const auto N = static_cast<std::size_t>(g.z_axes()[axis].points);
  std::vector<std::size_t> out(Z);
  for (std::size_t q = 0; q < Z; ++q) {
    const std::size_t i = (q / inner) % N;
    const std::size_t mirrored = (N - i) % N;
    out[q] = q + (mirrored - i) * inner;
  }
  return out;
}

void project_coefficients(std::vector<cplx> &c, const Grid &g) {
  const std::size_t Z = g.z_size();
  const int M = g.hermite_modes();
  for (int m = 1; m < M; m += 2)
    std::fill(c.begin() + m * Z, c.begin() + (m + 1) * Z, cplx(0.0));
  std::vector<cplx> tmp(Z);
  for (int a = 0; a < g.free_dims(); ++a) {
    const auto mirror = mirror_index(g, a);
    for (int m = 0; m < M; m += 2) {
      cplx *row = c.data() + m * Z;
      for (std::size_t q = 0; q < Z; ++q)
        tmp[q] = 0.5 * (row[q] + row[mirror[q]]);
      std::copy(tmp.begin(), tmp.end(), row);
    }
  }
  for (auto &v : c)
    v = {v.real(), 0.0};
}

// (H + 1) in coefficient space: 2m + 2 + |k|².
std::vector<double> shifted_symbol(const Grid &g) {
  const std::size_t Z = g.z_size();
  std::vector<double> h(g.size());
  for (int m = 0; m < g.hermite_modes(); ++m)
    for (std::size_t q = 0; q < Z; ++q)
      h[m * Z + q] = 2.0 * m + 2.0 + g.k_squared()[q];
  return h;
}

// Coefficients of |u|^{2σ}u, and ∫|u|^{2σ+2} as a by-product.
std::vector<cplx> nonlinear_term(const std::vector<cplx> &c, const Grid &g, const PowerLaw &power,
                                 double *l2s2s2 = nullptr) {
  auto u = g.to_quadrature(c.data());
  const std::size_t Z = g.z_size();
  double acc = 0.0;
  for (int j = 0; j < g.quadrature_nodes(); ++j) {
    double row = 0.0;
    for (std::size_t q = 0; q < Z; ++q) {
      cplx &v = u[j * Z + q];
      const double a2 = std::norm(v);
      const double pw = power(a2);
      row += a2 * pw;
      v *= pw;
    }
    acc += g.quadrature_weights()[j] * row;
  }
  if (l2s2s2 != nullptr)
    *l2s2s2 = g.z_cell() * acc;
  return g.from_quadrature(u.data());
}

double norm_coeff(const std::vector<cplx> &c, const Grid &g) { return std::sqrt(g.z_volume() * sum_abs2(c)); }

} // namespace

Field project_symmetric(const Field &f) {
  Field c = f.to_coefficients();
  project_coefficients(c.mutable_data(), f.grid());
  return c.in(f.representation());
}

double stationary_residual(const Field &u) {
  const Grid &g = u.grid();
  const Field c = u.to_coefficients();
  const auto h = shifted_symbol(g);
  const auto nl = nonlinear_term(c.data(), g, PowerLaw(u.params().sigma));
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    const cplx lhs = h[i] * c.data()[i];
    num += std::norm(lhs - nl[i]);
    den += std::norm(lhs);
  }
  return den > 0.0 ? std::sqrt(num / den) : 0.0;
}

GroundStateResult petviashvili(const Field &guess, const PetviashviliOptions &opt) {
  const ModelParams &params = guess.params();
  if (params.lambda != -1)
    throw ValidationError("petviashvili: ground states require the focusing sign lambda = -1");
  const Grid &g = guess.grid();
  const auto h = shifted_symbol(g);
  const PowerLaw power(params.sigma);
  const double s = params.sigma_value();
  const double expo = (2.0 * s + 1.0) / (2.0 * s);

  std::vector<cplx> c = guess.to_coefficients().data();
  project_coefficients(c, g);
  if (norm_coeff(c, g) < 1e-12)
    throw CollapseToZero("petviashvili: guess is zero after symmetry projection");

  GroundStateResult res;
  for (int it = 1; it <= opt.max_iter; ++it) {
    const auto nl = nonlinear_term(c, g, power);
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) {
      num += h[i] * std::norm(c[i]);
      den += (std::conj(nl[i]) * c[i]).real();
    }
    if (!(den > 0.0))
      throw CollapseToZero("petviashvili: nonlinear pairing vanished");
    const double gamma = std::pow(num / den, expo);
    std::vector<cplx> next(c.size());
    for (std::size_t i = 0; i < c.size(); ++i)
      next[i] = gamma * nl[i] / h[i];
    project_coefficients(next, g);

    const double nn = norm_coeff(next, g);
    if (!(nn >= 1e-12))
      throw CollapseToZero("petviashvili: iterate norm fell below 1e-12");
    double diff = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i)
      diff += std::norm(next[i] - c[i]);
    const double change = std::sqrt(g.z_volume() * diff) / nn;
    c = std::move(next);
    res.iterations = it;
    if (change < opt.tol) {
      res.converged = true;
      break;
    }
  }
  if (!res.converged) {
    std::ostringstream msg;
    msg << "petviashvili: no convergence after " << opt.max_iter << " iterations";
    throw NonConvergence(msg.str());
  }
  Field Qc(params, guess.grid_ptr(), Representation::Coefficient, std::move(c));
  res.Q = Qc.in(Representation::Physical);
  for (auto &v : res.Q.mutable_data())
    v = {v.real(), 0.0};
  res.report = evaluate(res.Q);
  res.beta = res.report.S;
  res.residual = stationary_residual(res.Q);
  return res;
}

GroundStateResult petviashvili(const ModelParams &params, GridPtr grid, const PetviashviliOptions &opt) {
  return petviashvili(gaussian(params, std::move(grid)), opt);
}

namespace {

struct Quotient {
  double log_f = 0.0;
  double B = 0.0;
  double K = 0.0;
  double L = 0.0;
};

class DabObjective {
public:
  DabObjective(const ModelParams &params, const Grid &g, double a, double b)
      : g_(g), power_(params.sigma), sigma_(params.sigma_value()) {
    const double k = params.free_dims();
    const auto bc = b_coefficients(params, a, b);
    den_ = bc.denominator;
    const double kb = 0.5 * (2.0 * a + b * k);
    const double kz = 0.5 * (2.0 * a + b * (k - 2.0));
    const std::size_t Z = g.z_size();
    bdiag_.resize(g.size());
    kdiag_.resize(g.size());
    for (int m = 0; m < g.hermite_modes(); ++m)
      for (std::size_t q = 0; q < Z; ++q) {
        const double base = 2.0 * m + 2.0;
        bdiag_[m * Z + q] = bc.alpha1 * base + bc.alpha2 * g.k_squared()[q];
        kdiag_[m * Z + q] = kb * base + kz * g.k_squared()[q];
      }
    h_ = shifted_symbol(g);
  }

  double denominator() const { return den_; }

  Quotient value(const std::vector<cplx> &c, std::vector<cplx> *grad = nullptr) const {
    Quotient qv;
    double bsum = 0.0;
    double ksum = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) {
      const double w = std::norm(c[i]);
      bsum += bdiag_[i] * w;
      ksum += kdiag_[i] * w;
    }
    const double vz = g_.z_volume();
    qv.B = vz * bsum;
    qv.K = vz * ksum;
    const auto nl = nonlinear_term(c, g_, power_, &qv.L);
    qv.log_f = std::log(qv.B) + (std::log(qv.K) - std::log(qv.L)) / sigma_;
    if (grad != nullptr) {
      grad->resize(c.size());
      const double two_s_two = 2.0 * sigma_ + 2.0;
      for (std::size_t i = 0; i < c.size(); ++i)
        (*grad)[i] = 2.0 * bdiag_[i] / qv.B * c[i] +
                     (2.0 * kdiag_[i] / qv.K * c[i] - two_s_two / qv.L * nl[i]) / sigma_;
    }
    return qv;
  }

  /// Amplitude t with J(t·c) = 0.
  double constraint_scale(const Quotient &qv) const {
    return std::pow((2.0 * sigma_ + 2.0) * qv.K / (den_ * qv.L), 1.0 / (2.0 * sigma_));
  }

  const std::vector<double> &preconditioner() const { return h_; }

private:
  const Grid &g_;
  PowerLaw power_;
  double sigma_;
  double den_ = 0.0;
  std::vector<double> bdiag_;
  std::vector<double> kdiag_;
  std::vector<double> h_;
};

void normalize(std::vector<cplx> &c, const Grid &g) {
  const double n = norm_coeff(c, g);
  for (auto &v : c)
    v /= n;
}

} // namespace

ConstrainedMinimum minimize_dab(const Field &guess, double a, double b, const MinimizeOptions &opt) {
  const ModelParams &params = guess.params();
  if (params.lambda != -1)
    throw ValidationError("minimize_dab: requires lambda = -1");
  const double k = params.free_dims();
  const double s = params.sigma_value();
  const ScaleParams sp{a, b, 0.0};
  if (!sp.admissible(params))
    throw InvalidScalePair("minimize_dab: (a, b) violates a > 0, b <= 0, 2a + b(d-n) >= 0, sigma*a + b > 0");
  const double kb = 2.0 * a + b * k;
  const double kz = 2.0 * a + b * (k - 2.0);
  if (!(a * (2.0 * s + 2.0) + b * k > 0.0) || !(kz > 0.0) || kb < 0.0)
    throw InvalidScalePair("minimize_dab: J quadratic part or denominator not positive");

  const Grid &g = guess.grid();
  const DabObjective obj(params, g, a, b);
  const auto &h = obj.preconditioner();

  std::vector<cplx> c = guess.to_coefficients().data();
  project_coefficients(c, g);
  if (norm_coeff(c, g) < 1e-12)
    throw CollapseToZero("minimize_dab: guess is zero after symmetry projection");
  normalize(c, g);

  std::vector<cplx> grad;
  Quotient cur = obj.value(c, &grad);
  double step = opt.initial_step;
  ConstrainedMinimum out;
  bool done = false;
  for (int it = 1; it <= opt.max_iter && !done; ++it) {
    std::vector<cplx> dir(c.size());
    double slope = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) {
      dir[i] = -grad[i] / h[i];
      slope += (std::conj(grad[i]) * dir[i]).real();
    }
    slope *= g.z_volume();
    if (!(slope < 0.0))
      break;

    std::vector<cplx> trial(c.size());
    Quotient next;
    bool accepted = false;
    for (int bt = 0; bt < 60; ++bt) {
      for (std::size_t i = 0; i < c.size(); ++i)
        trial[i] = c[i] + step * dir[i];
      project_coefficients(trial, g);
      normalize(trial, g);
      next = obj.value(trial);
      if (next.log_f <= cur.log_f + opt.armijo * step * slope) {
        accepted = true;
        break;
      }
      step *= opt.backtrack;
    }
    out.iterations = it;
    if (!accepted)
      break;
    const double decrease = cur.log_f - next.log_f;
    c = std::move(trial);
    cur = obj.value(c, &grad);
    step = std::min(2.0 * step, 1e3);
    if (decrease < opt.tol)
      done = true;
  }
  if (!done && out.iterations >= opt.max_iter) {
    std::ostringstream msg;
    msg << "minimize_dab: no convergence after " << opt.max_iter << " iterations";
    throw NonConvergence(msg.str());
  }

  const double t = obj.constraint_scale(cur);
  for (auto &v : c)
    v *= t;
  Field mc(params, guess.grid_ptr(), Representation::Coefficient, std::move(c));
  out.minimizer = mc.in(Representation::Physical);
  for (auto &v : out.minimizer.mutable_data())
    v = {v.real(), 0.0};
  const auto rep = evaluate(out.minimizer);
  out.dab = B_ab(rep, params, a, b);
  out.S = rep.S;
  out.J = J_ab(rep, params, a, b);
  return out;
}

ConstrainedMinimum minimize_dab(const ModelParams &params, GridPtr grid, double a, double b,
                                const MinimizeOptions &opt) {
  return minimize_dab(gaussian(params, std::move(grid)), a, b, opt);
}

} // namespace phnls
