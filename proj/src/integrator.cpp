#include "srsp/integrator.hpp"

#include <cmath>
#include <sstream>

namespace srsp {

namespace {

const Complex kMinusI{0.0, -1.0};

void add_scaled(std::vector<SpectralCoeffs>& acc, const std::vector<SpectralCoeffs>& x, double s) {
  for (std::size_t k = 0; k < acc.size(); ++k)
    for (std::size_t n = 0; n < acc[k].size(); ++n) acc[k][n] += s * x[k][n];
}

}  // namespace

void StepParams::validate() const {
  if (!std::isfinite(dt)) throw Error(ErrorCode::Constraint, "integration.dt: must be finite");
  if (!(dt > 0.0)) throw Error(ErrorCode::Constraint, "integration.dt: must be > 0");
  if (cadence < 1) throw Error(ErrorCode::Constraint, "integration.cadence: must be >= 1");
  if (!(guard_factor > 1.0)) throw Error(ErrorCode::Constraint, "integration.guard_factor: must be > 1");
}

Ensemble free_flow(Ensemble e, double t) {
  if (t == 0.0) return e;
  const auto mu = e.basis().eigenvalues();
  std::vector<Complex> phase(mu.size());
  for (std::size_t n = 0; n < mu.size(); ++n) phase[n] = std::polar(1.0, -kinetic_symbol(mu[n], e.mass()) * t);
  for (std::size_t k = 0; k < e.size(); ++k) {
    auto& c = e.wavefunction(k);
    for (std::size_t n = 0; n < c.size(); ++n) c[n] *= phase[n];
  }
  return e;
}

Ensemble potential_kick(Ensemble e, const PotentialField& v, double t) {
  if (t == 0.0) return e;
  const SineBasis& basis = e.basis();
  if (v.grid.values.size() != basis.grid_count()) throw Error(ErrorCode::DimensionMismatch, "potential_kick: grid mismatch");
  std::vector<Complex> phase(v.grid.values.size());
  for (std::size_t j = 0; j < phase.size(); ++j) phase[j] = std::polar(1.0, -v.grid.values[j] * t);
  for (std::size_t k = 0; k < e.size(); ++k) {
    auto grid = basis.synthesize(e.wavefunction(k));
    for (std::size_t j = 0; j < phase.size(); ++j) grid.values[j] *= phase[j];
    e.wavefunction(k) = basis.analyze(grid.values);
  }
  return e;
}

Ensemble strang_step(Ensemble e, double dt, Coupling coupling) {
  if (coupling == Coupling::Off) return free_flow(std::move(e), dt);
  e = free_flow(std::move(e), 0.5 * dt);
  // The kick leaves the density unchanged, so V frozen here is exact for it.
  const auto v = poisson_solve(density(e), e.basis());
  e = potential_kick(std::move(e), v, dt);
  return free_flow(std::move(e), 0.5 * dt);
}

Ensemble lie_step(Ensemble e, double dt, Coupling coupling) {
  e = free_flow(std::move(e), dt);
  if (coupling == Coupling::Off) return e;
  const auto v = poisson_solve(density(e), e.basis());
  return potential_kick(std::move(e), v, dt);
}

Ensemble duhamel_midpoint_step(Ensemble e, double dt, Coupling coupling) {
  if (coupling == Coupling::Off || dt == 0.0) return free_flow(std::move(e), dt);
  // Iteration 1: midpoint state from a left-endpoint rule, accurate to O(dt^2).
  auto predictor = e.wavefunctions();
  add_scaled(predictor, nonlinear_rhs(e), 0.5 * dt);
  const Ensemble midpoint = free_flow(e.with_wavefunctions(std::move(predictor)), 0.5 * dt);
  // Iteration 2: midpoint rule for the Duhamel integral,
  // Psi(dt) = U(dt) Psi(0) + dt U(dt/2) F[Psi(dt/2)].
  const Ensemble forcing = free_flow(e.with_wavefunctions(nonlinear_rhs(midpoint)), 0.5 * dt);
  Ensemble out = free_flow(std::move(e), dt);
  auto psi = out.wavefunctions();
  add_scaled(psi, forcing.wavefunctions(), dt);
  return out.with_wavefunctions(std::move(psi));
}

Ensemble step(Ensemble e, double dt, Scheme scheme, Coupling coupling) {
  switch (scheme) {
    case Scheme::Strang: return strang_step(std::move(e), dt, coupling);
    case Scheme::Lie: return lie_step(std::move(e), dt, coupling);
    case Scheme::DuhamelMidpoint: return duhamel_midpoint_step(std::move(e), dt, coupling);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown scheme");
}

double phase_wrap_number(const Ensemble& e, double dt) {
  double top = 0.0;
  for (double mu : e.basis().eigenvalues()) top = std::max(top, kinetic_symbol(mu, e.mass()));
  return std::abs(dt) * top;
}

Ensemble run(Ensemble e0, const StepParams& p, const DiagnosticsSink& sink, const StateObserver& observer) {
  p.validate();
  const double h1_0 = sobolev_norm(e0, SobolevOrder::One, NormKind::Homogeneous);
  const double guard = p.guard_factor * h1_0;
  Ensemble e = std::move(e0);
  if (sink) sink(record(e, 0.0, p.coupling));
  if (observer) observer(0, e);
  for (std::size_t s = 1; s <= p.steps; ++s) {
    e = step(std::move(e), p.dt, p.scheme, p.coupling);
    const double t = static_cast<double>(s) * p.dt;
    const double h1 = sobolev_norm(e, SobolevOrder::One, NormKind::Homogeneous);
    if (!std::isfinite(h1) || (h1_0 > 0.0 && h1 > guard)) {
      std::ostringstream os;
      os << "blow-up guard tripped at step " << s << " (t = " << t << "): h1 = " << h1 << " exceeds " << guard;
      throw BlowUpError(os.str(), record(e, t, p.coupling));
    }
    if (s % p.cadence == 0 && sink) sink(record(e, t, p.coupling));
    if (observer) observer(s, e);
  }
  return e;
}

}  // namespace srsp
