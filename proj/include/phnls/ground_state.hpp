#pragma once

#include "phnls/functionals.hpp"

namespace phnls {

struct GroundStateResult {
  Field Q;
  double beta = 0.0;
  /// ‖(H+1)Q − |Q|^{2σ}Q‖ / ‖(H+1)Q‖.
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
  FunctionalReport report;
};

struct PetviashviliOptions {
  /// Stop when the relative L² change between iterates drops below tol.
  double tol = 1e-12;
  int max_iter = 2000;
};

/// Iterates u ← γ(H+1)^{−1}[|u|^{2σ}u] with the stabilizing factor
/// γ = (⟨(H+1)u,u⟩/⟨|u|^{2σ}u,u⟩)^{(2σ+1)/(2σ)}, projecting onto real
/// fields even in y and in each z_a. Requires λ = −1.
GroundStateResult petviashvili(const Field &guess, const PetviashviliOptions &opt = {});

/// Default guess: unit-mass Gaussian.
GroundStateResult petviashvili(const ModelParams &params, GridPtr grid, const PetviashviliOptions &opt = {});

/// Relative residual of (H+1)u = |u|^{2σ}u.
double stationary_residual(const Field &u);

/// Real part, zero odd Hermite modes, κ ↔ −κ average per axis.
Field project_symmetric(const Field &f);

struct MinimizeOptions {
  /// Stop when the relative decrease of the scale-free objective over
  /// one step drops below tol.
  double tol = 1e-13;
  int max_iter = 5000;
  double initial_step = 0.1;
  double armijo = 1e-4;
  double backtrack = 0.5;
};

struct ConstrainedMinimum {
  Field minimizer;
  double dab = 0.0;
  double S = 0.0;
  double J = 0.0;
  int iterations = 0;
};

/// Minimizes B^{a,b} over {J^{a,b} = 0} by preconditioned descent on the
/// scale-free quotient, rescaling the amplitude onto the constraint after
/// each step. Throws InvalidScalePair unless (a, b) satisfies a > 0,
/// b ≤ 0, 2a + b(d−n) ≥ 0, σa + b > 0 and the quadratic part of J is
/// positive.
ConstrainedMinimum minimize_dab(const Field &guess, double a, double b, const MinimizeOptions &opt = {});
ConstrainedMinimum minimize_dab(const ModelParams &params, GridPtr grid, double a, double b,
                                const MinimizeOptions &opt = {});

} // namespace phnls
