#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "srsp/ensemble.hpp"

namespace srsp {

struct DiagnosticsRecord {
  double t = 0.0;
  double mass = 0.0;  // ||Psi||_{L^2_lambda}
  double energy_Tm = 0.0;
  double energy_half_p = 0.0;
  double potential_energy = 0.0;  // 1/2 ||grad V||^2
  double h12 = 0.0;               // homogeneous H^{1/2}_lambda norm
  double h1 = 0.0;                // homogeneous H^1_lambda norm
  double gram_defect = 0.0;       // max |G - I|
  double density_min = 0.0;

  bool operator==(const DiagnosticsRecord&) const = default;
};

enum class Coupling { On, Off };

/// With coupling off the state carries no potential: V, and hence the
/// potential energy, is zero.
DiagnosticsRecord record(const Ensemble& e, double t, Coupling coupling = Coupling::On);

struct QuantityDrift {
  std::string name;
  double initial = 0.0;
  double max_relative_drift = 0.0;
};

struct ConservationSummary {
  std::vector<QuantityDrift> drifts;  // mass, energy_Tm, energy_half_p, h12, h1
  double max_gram_defect = 0.0;
  double min_density = 0.0;
  /// "energy_Tm" or "energy_half_p", whichever drifts less.
  std::string conserved_energy;
  /// Least-squares slope of log h1 against t.
  double gronwall_slope = 0.0;
  /// Smallest c such that log h1(t) <= log h1(0) + c t at every record.
  double gronwall_envelope_slope = 0.0;

  double drift(const std::string& name) const;
};

/// Throws Error(InvalidArgument) for fewer than two records.
ConservationSummary conservation_report(const std::vector<DiagnosticsRecord>& records);

// Verification probes -----------------------------------------------------

struct NormEquivalenceReport {
  std::size_t trials = 0;
  std::size_t violations = 0;
  double worst_half_ratio = 0.0;  // max ||.||_{H^1/2} / ||.||_{dot H^1/2}
  double worst_one_ratio = 0.0;   // max ||.||_{H^1} / ||.||_{dot H^1}
  double min_half_ratio = 0.0;
  double min_one_ratio = 0.0;
  double half_bound = 0.0;  // sqrt(1 + 1/sqrt(c_p))
  double one_bound = 0.0;   // sqrt(1 + 1/c_p)
  /// Ratio attained by the single lowest-mode state.
  double lowest_mode_half_ratio = 0.0;
  std::uint64_t seed = 0;
  std::string failure;
  bool passed() const { return violations == 0; }
};

struct KineticBoundReport {
  std::size_t trials = 0;
  std::size_t violations = 0;
  double mass = 0.0;
  /// max ||T_m Psi||^2 / (||Psi||^2_{dot H^1} + 2 m^2 ||Psi||^2_{L^2})
  double tightest_ratio = 0.0;
  std::uint64_t seed = 0;
  std::string failure;
  bool passed() const { return violations == 0; }
};

struct LipschitzReport {
  std::size_t trials = 0;
  double max_quotient = 0.0;
  double mean_quotient = 0.0;
  /// max over pairs of |q(s Psi, s Phi) / (s^2 q(Psi, Phi)) - 1| for the
  /// un-normalized quotient ||F_V[Psi]-F_V[Phi]|| / ||Psi-Phi||.
  double scaling_defect = 0.0;
  std::uint64_t seed = 0;
};

/// Both two-sided bounds of the homogeneous/inhomogeneous norm equivalence,
/// evaluated with the basis eigenvalue table and c_p = sum_i (pi/L_i)^2.
NormEquivalenceReport verify_norm_equivalence(const SineBasis& basis, std::uint64_t seed, std::size_t trials);

/// ||T_m Psi||^2 <= ||Psi||^2_{dot H^1} + 2 m^2 ||Psi||^2_{L^2} over random states.
KineticBoundReport verify_kinetic_bound(const SineBasis& basis, double mass, std::uint64_t seed, std::size_t trials);

/// Samples pairs with H^1_lambda norms in [0.5, 2] and reports the normalized
/// Lipschitz quotient of the mean-field nonlinearity.
LipschitzReport probe_lipschitz(std::shared_ptr<const SineBasis> basis, std::size_t count, std::uint64_t seed,
                                std::size_t trials, double scale = 2.0);

/// ||F_V[Psi]-F_V[Phi]||_{H^1} / ((||Psi||^2 + ||Phi||^2) ||Psi-Phi||), 0 when Psi == Phi.
double lipschitz_quotient(const Ensemble& psi, const Ensemble& phi);

}  // namespace srsp
