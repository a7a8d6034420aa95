#pragma once

#include "phnls/cutoff.hpp"
#include "phnls/propagator.hpp"

#include <optional>
#include <vector>

namespace phnls {

enum class Membership { KPlus, KMinus, OutOfScope };

const char *to_string(Membership m);

struct Classification {
  Membership membership = Membership::OutOfScope;
  double S = 0.0;
  double I = 0.0;
  double P = 0.0;
  double beta = 0.0;
  /// sign(I) ≠ sign(P) with 0 counted as nonnegative, while S < β.
  bool sign_disagreement = false;
  /// −(4/(d−n))(β − S), for K⁻ only.
  std::optional<double> lemma38_bound;
  bool lemma38_holds = true;
};

/// OutOfScope unless λ = −1, the theorem window holds and S < β.
Classification classify(const Field &f, double beta);
Classification classify(const FunctionalReport &rep, const ModelParams &params, double beta);

/// ∫φ|u|² and its derivatives under the flow for a radial cutoff, plus
/// the split V″ = 4(d−n)P + R₁ + R₂ + R₃. Focusing only.
struct VirialSeries {
  double V = 0.0;
  double V1 = 0.0;
  /// 4∫Re⟨∇_zū, ∇²φ∇_zu⟩ − (2σ/(σ+1))∫Δφ|u|^{2σ+2} − ∫Δ²φ|u|².
  double V2 = 0.0;
  /// 4(d−n)P + R₁ + R₂ + R₃.
  double V2_split = 0.0;
  double P = 0.0;
  double R1 = 0.0;
  double R2 = 0.0;
  double R3 = 0.0;
};

VirialSeries virial_series(const Field &f, const CutoffProfile &cutoff);

/// ∫φ|u|² for a radial cutoff.
double cutoff_mass(const Field &f, const CutoffProfile &cutoff);

/// ∫_{|z| ≥ R}|u|² over the collocation points.
double mass_outside(const Field &f, double R);

struct LeakageReport {
  /// V(t) ≤ V(0) + 4‖u₀‖k₀t/R at every sample.
  bool holds = true;
  /// Same with the slope 2‖φ′‖∞‖u₀‖k₀.
  bool rigorous_holds = true;
  /// min over samples of bound − V(t).
  double min_margin = 0.0;
  std::vector<double> bound;
};

/// V must be sampled at times with the MassCutoff of radius R. mass0 is
/// M(u₀); k0 the running sup of ‖∇_x u‖.
LeakageReport leakage_check(const std::vector<double> &times, const std::vector<double> &V, double mass0,
                            double k0, const CutoffProfile &mass_cutoff);

/// sup_t ‖∇_x u(t)‖ from a trace.
double gradient_sup(const EvolutionTrace &trace);

struct CenterOfMass {
  /// Γ_R per free axis.
  std::vector<double> gamma;
  /// Γ′_R = 2 Im∫ū θ′(z_a/R) ∂_a u.
  std::vector<double> rate;
  /// 10∫_{|z_a| ≥ R}|∇u||u|.
  std::vector<double> bound;
  /// 5∫_{|z_a| ≥ R}(|∇u|² + |u|²).
  std::vector<double> energy_bound;
};

CenterOfMass center_of_mass(const Field &f, const CutoffProfile &cutoff);

struct DetectorOptions {
  double blowup_factor = 2500.0;
  double scatter_frac = 0.1;
  double scatter_tol = 1e-3;
  double window_frac = 0.2;
  double tail_valid = 1e-2;
  double growth_seq_factor = 1.5;
};

enum class Outcome { GlobalScattering, FiniteTimeBlowup, GrowAlongSequence, Undetermined, OutOfScope };

const char *to_string(Outcome o);

struct Verdict {
  Outcome outcome = Outcome::Undetermined;
  /// Time of the blow-up trigger, if it fired.
  std::optional<double> trigger_time;
  /// max gradx_sq / initial gradx_sq.
  double growth_factor = 0.0;
  /// Final L2s2s2 over its running maximum.
  double l2s2s2_final_frac = 0.0;
  /// (max − min)/mean of profile_B1 over the trailing window.
  double profile_residual = 0.0;
  bool valid = true;
};

Verdict detect(const EvolutionTrace &trace, const DetectorOptions &opt = {});

struct StrichartzSum {
  double total = 0.0;
  /// (γ, ‖u‖^p_{L^q(I_γ; L^r)}) for every window meeting the samples.
  std::vector<std::pair<int, double>> windows;

  /// Share of the total carried by the last `count` windows.
  double tail_share(std::size_t count) const;
};

/// Σ_γ ‖u‖^p_{L^q(I_γ; L^r)} with I_γ = π[γ−1, γ+1), trapezoid in time on
/// the samples (linear interpolation at window edges).
StrichartzSum windowed_strichartz(const std::vector<double> &times, const std::vector<double> &lr_norms, double p,
                                  double q);

} // namespace phnls
