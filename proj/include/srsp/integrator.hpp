#pragma once

#include <cstddef>
#include <functional>

#include "srsp/diagnostics.hpp"
#include "srsp/ensemble.hpp"
#include "srsp/error.hpp"

namespace srsp {

enum class Scheme { Strang, Lie, DuhamelMidpoint };

struct StepParams {
  double dt = 1e-3;
  Scheme scheme = Scheme::Strang;
  std::size_t steps = 0;
  std::size_t cadence = 1;
  /// Abort when h1 exceeds guard_factor * initial h1.
  double guard_factor = 1e3;
  Coupling coupling = Coupling::On;

  void validate() const;
};

/// c[n] <- exp(-i T_m(mu_n) t) c[n] for every wavefunction.
Ensemble free_flow(Ensemble e, double t);

/// psi_k(x) <- exp(-i V(x) t) psi_k(x) on the grid, projected back onto the
/// retained modes.
Ensemble potential_kick(Ensemble e, const PotentialField& v, double t);

/// Half free flow, kick with V frozen at the half-step density, half free flow.
Ensemble strang_step(Ensemble e, double dt, Coupling coupling = Coupling::On);
/// Full free flow followed by a full kick.
Ensemble lie_step(Ensemble e, double dt, Coupling coupling = Coupling::On);
/// Duhamel formula with midpoint quadrature; the midpoint state comes from a
/// predictor, giving two evaluations of the nonlinearity per step.
Ensemble duhamel_midpoint_step(Ensemble e, double dt, Coupling coupling = Coupling::On);

Ensemble step(Ensemble e, double dt, Scheme scheme, Coupling coupling);

/// dt times the largest kinetic symbol; values >= pi wrap the phase of the
/// top mode within one step.
double phase_wrap_number(const Ensemble& e, double dt);

class BlowUpError : public Error {
 public:
  BlowUpError(const std::string& what, DiagnosticsRecord offending)
      : Error(ErrorCode::BlowUp, what), record_(offending) {}
  const DiagnosticsRecord& record() const { return record_; }

 private:
  DiagnosticsRecord record_;
};

using DiagnosticsSink = std::function<void(const DiagnosticsRecord&)>;
using StateObserver = std::function<void(std::size_t step, const Ensemble&)>;

/// Advances p.steps steps, emitting a record at step 0 and every p.cadence
/// steps. Throws BlowUpError when the guard trips.
Ensemble run(Ensemble e0, const StepParams& p, const DiagnosticsSink& sink, const StateObserver& observer = {});

}  // namespace srsp
