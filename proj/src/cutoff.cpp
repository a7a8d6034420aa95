#include "phnls/cutoff.hpp"

#include "phnls/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

namespace phnls {

namespace {

// Polynomials in s, lowest degree first.
using Poly = std::vector<double>;

double eval(const Poly &p, double s) {
  double v = 0.0;
  for (auto it = p.rbegin(); it != p.rend(); ++it)
    v = v * s + *it;
  return v;
}

Poly add(Poly a, const Poly &b, double scale = 1.0) {
  if (a.size() < b.size())
    a.resize(b.size(), 0.0);
  for (std::size_t i = 0; i < b.size(); ++i)
    a[i] += scale * b[i];
  return a;
}

Poly mul(const Poly &a, const Poly &b) {
  Poly c(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      c[i + j] += a[i] * b[j];
  return c;
}

// p(α s + β)
Poly affine(const Poly &p, double alpha, double beta) {
  Poly out{0.0};
  Poly power{1.0};
  const Poly lin{beta, alpha};
  for (double c : p) {
    out = add(out, power, c);
    power = mul(power, lin);
  }
  return out;
}

Poly deriv(const Poly &p) {
  if (p.size() <= 1)
    return {0.0};
  Poly d(p.size() - 1);
  for (std::size_t i = 1; i < p.size(); ++i)
    d[i - 1] = static_cast<double>(i) * p[i];
  return d;
}

Poly antideriv(const Poly &p) {
  Poly a(p.size() + 1, 0.0);
  for (std::size_t i = 0; i < p.size(); ++i)
    a[i + 1] = p[i] / static_cast<double>(i + 1);
  return a;
}

double integral(const Poly &p, double lo, double hi) {
  const Poly a = antideriv(p);
  return eval(a, hi) - eval(a, lo);
}

const Poly septic{0, 0, 0, 0, 35, -84, 70, -20};
const Poly quintic{0, 0, 0, 10, -15, 6};
const Poly bump_poly = mul(mul(Poly{0, 4, -4}, Poly{0, 4, -4}), Poly{0, 4, -4});

// φ = R²g((r − R)/R) on the bridge; g″ = ψ is built from a septic ramp
// 2 → 0 on [0, a], a dip on [0, c1] and a rise on [s2, W]. A and B make
// g and g′ vanish at W.
struct Bridge {
  static constexpr double W = profile::quadratic_support - 1.0;
  static constexpr double a = 0.6;
  static constexpr double c1 = 1.2;
  static constexpr double s2 = 1.1;

  std::vector<double> breaks;
  std::vector<Poly> psi, g1, g0;

  Bridge() {
    const Poly ramp = add(Poly{2.0}, affine(septic, 1.0 / a, 0.0), -2.0);
    const Poly dip = affine(bump_poly, 1.0 / c1, 0.0);
    const Poly rise = affine(bump_poly, 1.0 / (W - s2), -s2 / (W - s2));
    const Poly s{0.0, 1.0};

    // ∫ψ = −2 and ∫sψ = 1 on [0, W].
    const double m00 = integral(dip, 0.0, c1), m01 = integral(rise, s2, W);
    const double m10 = integral(mul(s, dip), 0.0, c1), m11 = integral(mul(s, rise), s2, W);
    const double r0 = integral(ramp, 0.0, a) + 2.0;
    const double r1 = integral(mul(s, ramp), 0.0, a) - 1.0;
    const double det = m00 * m11 - m01 * m10;
    const double A = (r0 * m11 - m01 * r1) / det;
    const double B = (m00 * r1 - r0 * m10) / det;

    breaks = {0.0, a, s2, c1, W};
    std::sort(breaks.begin(), breaks.end());
    double slope = 2.0;
    double value = 1.0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
      const double mid = 0.5 * (breaks[i] + breaks[i + 1]);
      Poly p{0.0};
      if (mid < a)
        p = add(p, ramp);
      if (mid < c1)
        p = add(p, dip, -A);
      if (mid > s2)
        p = add(p, rise, -B);
      Poly q = antideriv(p);
      q = add(q, Poly{slope - eval(q, breaks[i])});
      Poly h = antideriv(q);
      h = add(h, Poly{value - eval(h, breaks[i])});
      slope = eval(q, breaks[i + 1]);
      value = eval(h, breaks[i + 1]);
      psi.push_back(p);
      g1.push_back(q);
      g0.push_back(h);
    }
  }

  RadialValue at(double s) const {
    std::size_t i = 0;
    while (i + 2 < breaks.size() && s > breaks[i + 1])
      ++i;
    const Poly d1 = deriv(psi[i]);
    return {eval(g0[i], s), eval(g1[i], s), eval(psi[i], s), eval(d1, s), eval(deriv(d1), s)};
  }
};

const Bridge &bridge() {
  static const Bridge b;
  return b;
}

// θ′ = 1 − 5·S((s−1)/w) + 4·S((s−c+w)/w) on [1, c] with c = 2^{1/3};
// w makes ∫₁^c θ′ = −1 so that θ(c) = 0.
constexpr double theta_edge() { return 1.2599210498948732; }
double theta_width() { return (4.0 * (theta_edge() - 1.0) - 1.0) / 4.5; }

double smooth(double x) { return x <= 0.0 ? 0.0 : x >= 1.0 ? 1.0 : eval(quintic, x); }
double smooth_d(double x) { return x <= 0.0 || x >= 1.0 ? 0.0 : eval(deriv(quintic), x); }
// ∫₀^x S
double smooth_int(double x) {
  static const Poly a = antideriv(quintic);
  return x <= 0.0 ? 0.0 : x >= 1.0 ? eval(a, 1.0) + (x - 1.0) : eval(a, x);
}

} // namespace

namespace profile {

RadialValue mass(double r) {
  if (r <= 0.5)
    return {};
  if (r >= 1.0)
    return {1.0, 0.0, 0.0, 0.0, 0.0};
  const double x = 2.0 * (r - 0.5);
  const Poly d1 = deriv(quintic), d2 = deriv(d1), d3 = deriv(d2), d4 = deriv(d3);
  return {eval(quintic, x), 2.0 * eval(d1, x), 4.0 * eval(d2, x), 8.0 * eval(d3, x), 16.0 * eval(d4, x)};
}

RadialValue quadratic(double r) {
  if (r <= 1.0)
    return {r * r, 2.0 * r, 2.0, 0.0, 0.0};
  if (r >= quadratic_support)
    return {};
  return bridge().at(r - 1.0);
}

RadialValue theta(double s) {
  const double sign = s < 0.0 ? -1.0 : 1.0;
  const double x = std::abs(s);
  const double c = theta_edge();
  const double w = theta_width();
  RadialValue v;
  if (x <= 1.0) {
    v = {x, 1.0, 0.0, 0.0, 0.0};
  } else if (x < c) {
    const double u1 = (x - 1.0) / w;
    const double u2 = (x - c + w) / w;
    v.phi = 1.0 + (x - 1.0) - 5.0 * w * smooth_int(u1) + 4.0 * w * smooth_int(u2);
    v.d1 = 1.0 - 5.0 * smooth(u1) + 4.0 * smooth(u2);
    v.d2 = (-5.0 * smooth_d(u1) + 4.0 * smooth_d(u2)) / w;
  }
  // θ odd: θ′ even, θ″ odd.
  return {sign * v.phi, v.d1, sign * v.d2, 0.0, 0.0};
}

} // namespace profile

const char *to_string(CutoffKind kind) {
  switch (kind) {
  case CutoffKind::MassCutoff:
    return "mass";
  case CutoffKind::QuadraticVirial:
    return "quadratic_virial";
  case CutoffKind::CenterOfMass:
    return "center_of_mass";
  }
  return "?";
}

CutoffProfile make_cutoff(const Grid &grid, CutoffKind kind, double R) {
  if (!(R > 0.0) || !std::isfinite(R))
    throw ValidationError("cutoff: R must be positive");
  const int k = grid.free_dims();
  const std::size_t Z = grid.z_size();
  double half_box = INFINITY;
  double dz = 0.0;
  for (int a = 0; a < k; ++a) {
    half_box = std::min(half_box, 0.5 * grid.z_axes()[a].length);
    dz = std::max(dz, grid.dz(a));
  }

  CutoffProfile c;
  c.kind = kind;
  c.R = R;

  // Measured constants on a fine radial grid.
  const int fine = 20000;
  if (kind == CutoffKind::MassCutoff) {
    if (R >= half_box)
      throw ValidationError("cutoff: mass cutoff needs R < L/2");
    if (R < 8.0 * dz)
      throw ValidationError("cutoff: R = " + std::to_string(R) + " under-resolved on this z-grid");
    for (int i = 0; i <= fine; ++i)
      c.slope_constant = std::max(c.slope_constant, profile::mass(0.5 + 0.5 * i / fine).d1);
  } else if (kind == CutoffKind::QuadraticVirial) {
    if (profile::quadratic_support * R > half_box)
      throw ValidationError("cutoff: quadratic virial cutoff needs 4R <= L/2");
    if (R < 8.0 * dz)
      throw ValidationError("cutoff: R = " + std::to_string(R) + " under-resolved on this z-grid");
    c.max_second = -INFINITY;
    for (int i = 0; i <= fine; ++i) {
      const double r = profile::quadratic_support * i / fine;
      const auto v = profile::quadratic(r);
      if (v.phi < -1e-12 || v.phi > r * r + 1e-12)
        throw std::logic_error("cutoff: quadratic profile leaves [0, r^2]");
      c.max_second = std::max(c.max_second, v.d2);
      c.fourth_constant = std::max(c.fourth_constant, std::abs(v.d4));
    }
    if (c.max_second > 2.0 + 1e-12)
      throw std::logic_error("cutoff: quadratic profile has phi'' > 2");
  } else {
    if (theta_edge() * R > half_box)
      throw ValidationError("cutoff: center-of-mass cutoff needs 2^{1/3} R <= L/2");
    for (int i = 0; i <= fine; ++i) {
      const auto v = profile::theta(1.5 * i / fine);
      c.max_second = std::max(c.max_second, std::abs(v.phi));
      c.slope_constant = std::max(c.slope_constant, std::abs(v.d1));
    }
  }

  if (kind == CutoffKind::CenterOfMass) {
    c.component.assign(k, std::vector<double>(Z));
    c.component_d1.assign(k, std::vector<double>(Z));
    for (int a = 0; a < k; ++a)
      for (std::size_t q = 0; q < Z; ++q) {
        const auto v = profile::theta(grid.z_component(a)[q] / R);
        c.component[a][q] = R * v.phi;
        c.component_d1[a][q] = v.d1;
      }
    return c;
  }

  c.phi.assign(Z, 0.0);
  c.laplacian.assign(Z, 0.0);
  c.bilaplacian.assign(Z, 0.0);
  c.gradient.assign(k, std::vector<double>(Z, 0.0));
  c.hessian.assign(static_cast<std::size_t>(k * k), std::vector<double>(Z, 0.0));
  const double km1 = k - 1.0;
  for (std::size_t q = 0; q < Z; ++q) {
    double r2 = 0.0;
    for (int a = 0; a < k; ++a)
      r2 += grid.z_component(a)[q] * grid.z_component(a)[q];
    const double r = std::sqrt(r2);
    const double x = r / R;
    const bool quad = kind == CutoffKind::QuadraticVirial;
    const auto v = quad ? profile::quadratic(x) : profile::mass(x);
    // Physical radial derivatives.
    const double s = quad ? R * R : 1.0;
    const double f0 = s * v.phi, f1 = s * v.d1 / R, f2 = s * v.d2 / (R * R);
    const double f3 = s * v.d3 / (R * R * R), f4 = s * v.d4 / (R * R * R * R);
    c.phi[q] = f0;
    // The interior of the quadratic cutoff is exactly r², which also
    // covers r = 0; the mass cutoff is flat near the origin.
    if (quad && x <= 1.0) {
      for (int a = 0; a < k; ++a) {
        c.gradient[a][q] = 2.0 * grid.z_component(a)[q];
        c.hessian[a * k + a][q] = 2.0;
      }
      c.laplacian[q] = 2.0 * k;
      continue;
    }
    if (r == 0.0)
      continue;
    const double f1r = f1 / r;
    for (int a = 0; a < k; ++a) {
      const double ea = grid.z_component(a)[q] / r;
      c.gradient[a][q] = f1 * ea;
      for (int b = 0; b < k; ++b) {
        const double eb = grid.z_component(b)[q] / r;
        c.hessian[a * k + b][q] = (f2 - f1r) * ea * eb + (a == b ? f1r : 0.0);
      }
    }
    c.laplacian[q] = f2 + km1 * f1r;
    c.bilaplacian[q] = f4 + 2.0 * km1 * f3 / r + km1 * (km1 - 2.0) * (f2 - f1r) / r2;
  }
  return c;
}

} // namespace phnls
