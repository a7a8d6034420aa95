#pragma once

#include "phnls/functionals.hpp"

#include <functional>
#include <string>
#include <vector>

namespace phnls {

/// Exact flow e^{−itH} on coefficients: multiply by e^{−it((2m+1)+|k|²)}.
/// Returns the result in the representation of f.
Field linear_evolve(const Field &f, double t);

enum class VectorField { A1, A2 };

/// A₁(t) = y sin 2t − i cos 2t ∂_y, A₂(t) = −y cos 2t − i sin 2t ∂_y.
/// The mode pushed to m = M is dropped; use profile_B1_norm for exact norms.
Field vector_field_A(const Field &f, double t, VectorField which);

/// ‖u‖² + ‖A₁(t)u‖² + ‖A₂(t)u‖² + ‖∇_z u‖², computed without truncation.
double profile_B1_norm(const Field &f, double t);

/// Symmetric split step: half nonlinear phase, exact linear step, half
/// nonlinear phase. Negative dt runs backward.
class Propagator {
public:
  Propagator(const ModelParams &params, GridPtr grid, double dt, bool nonlinear = true);

  double dt() const { return dt_; }
  bool nonlinear() const { return nonlinear_; }

  /// One Strang step.
  Field step(const Field &f) const;
  /// Many steps with adjacent half phases merged; the physical buffer is
  /// updated in place.
  void advance(std::vector<cplx> &physical, int steps) const;

private:
  void phase(std::vector<cplx> &u, double tau) const;
  void linear(std::vector<cplx> &u) const;

  ModelParams params_;
  GridPtr grid_;
  double dt_;
  bool nonlinear_;
  PowerLaw power_;
  std::vector<cplx> linear_phase_;
};

Field step_strang(const Field &f, double t, double dt, bool nonlinear = true);

/// One trace row.
struct TraceSample {
  double t = 0.0;
  double M = 0.0;
  double E = 0.0;
  std::vector<double> G;
  double gradx_sq = 0.0;
  double L2s2s2 = 0.0;
  double ymom_sq = 0.0;
  /// 4 Im∫ū y∂_y u.
  double y_virial_rate = 0.0;
  double profile_B1 = 0.0;
  double tail = 0.0;
};

enum class Termination { Completed, BlowupTrigger, InvalidityStop };

const char *to_string(Termination t);

struct EvolveOptions {
  double dt = 1e-3;
  /// Steps between trace samples.
  int sample_stride = 10;
  bool nonlinear = true;
  /// Stop once gradx_sq exceeds this multiple of its initial value;
  /// 0 disables the trigger.
  double blowup_factor = 2500.0;
  /// Stop once the spectral tail fraction exceeds this.
  double tail_valid = 1e-2;
  /// Called at every sample with the current state.
  std::function<void(const TraceSample &, const Field &)> monitor;
};

struct EvolutionTrace {
  std::vector<TraceSample> samples;
  double dt = 0.0;
  Termination reason = Termination::Completed;
  Field final_state;
};

/// Integrates from t = 0 to T, sampling every sample_stride steps (and at
/// t = 0 and the last step).
EvolutionTrace evolve(const Field &f0, double T, const EvolveOptions &opt = {});

TraceSample sample_state(const Field &f, double t);

struct FinalState {
  Field u;
  /// L² distance between the solves from T_trunc and 2·T_trunc.
  double truncation_delta = 0.0;
};

/// Starts from e^{−iTH}ψ at T = T_trunc and 2·T_trunc, integrates backward
/// to t_target, and returns the 2T solution. Throws NonConvergence when the
/// two differ by more than tol in L².
FinalState solve_final_state(const Field &psi, double T_trunc, double t_target, double dt, double tol = 1e-4);

} // namespace phnls
