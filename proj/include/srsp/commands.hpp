#pragma once

// Run orchestration behind the CLI subcommands. Every command reports progress
// through a line callback and throws srsp::Error on failure.

#include <functional>
#include <string>
#include <vector>

#include "srsp/config.hpp"
#include "srsp/diagnostics.hpp"
#include "srsp/output.hpp"

namespace srsp {

using LineSink = std::function<void(const std::string&)>;

/// Initial ensemble described by the config (snapshot or seeded random data).
Ensemble initial_ensemble(const RunConfig& cfg);

struct RunOutcome {
  std::vector<DiagnosticsRecord> records;
  ConservationSummary summary;  // empty drifts when fewer than two records
};

/// Integrates and writes diagnostics.csv (plus snapshots and plots when
/// configured) into cfg.directory. A tripped guard still leaves the CSV on
/// disk and rethrows BlowUpError.
RunOutcome command_run(const RunConfig& cfg, const LineSink& log);

struct VerifyOutcome {
  bool passed = true;
  std::vector<std::string> failures;
  NormEquivalenceReport norm_equivalence;
  std::vector<KineticBoundReport> kinetic;
  LipschitzReport lipschitz;
  double transform_error = 0.0;
  double poisson_fd_order = 0.0;
};

VerifyOutcome command_verify(const RunConfig& cfg, const LineSink& log);

struct ConvergeOutcome {
  std::vector<ConvergenceRow> rows;
  double dt_slope = 0.0;
  double split_difference_slope = 0.0;
};

/// dt-halving ladder, Strang-vs-Duhamel per-step ladder and mode-refinement
/// ladder; writes convergence.csv into cfg.directory.
ConvergeOutcome command_converge(const RunConfig& cfg, const LineSink& log);

// Building blocks shared with the acceptance suite.

/// L^2_lambda norm of a - b (same basis and weights).
double ensemble_distance(const Ensemble& a, const Ensemble& b);

/// Zero-pads (or truncates) coefficients onto another mode cutoff.
SpectralCoeffs embed_coefficients(const SpectralCoeffs& c, const DomainSpec& from, const DomainSpec& to);

/// Least-squares slope of log2(y) against log2(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

/// Second-order finite-difference Dirichlet solve of -V'' = n on a uniform
/// 1D interior grid (Thomas algorithm).
std::vector<double> finite_difference_poisson_1d(const std::vector<double>& n, double length);

/// Observed convergence order of the finite-difference solve toward the
/// spectral solve over the given grid divisions, for a smooth random density.
std::vector<double> poisson_fd_errors(const std::vector<int>& divisions, std::uint64_t seed);

/// Max relative deviation of SineBasis::synthesize from direct summation.
double transform_error_vs_direct(const SineBasis& basis, std::uint64_t seed);

}  // namespace srsp
