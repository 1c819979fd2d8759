#include "srsp/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <locale>
#include <numbers>
#include <sstream>

#include "srsp/error.hpp"
#include "srsp/integrator.hpp"
#include "srsp/snapshot.hpp"

namespace srsp {

namespace {

void emit(const LineSink& log, const std::string& line) {
  if (log) log(line);
}

std::string snapshot_name(std::size_t step) {
  std::ostringstream os;
  os << "snapshot_" << std::setw(8) << std::setfill('0') << step << ".srsp";
  return os.str();
}

std::filesystem::path prepare_directory(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::Io, dir + ": cannot create output directory (" + ec.message() + ")");
  return std::filesystem::path(dir);
}

std::string describe(const DiagnosticsRecord& r) {
  std::ostringstream os;
  os << "t=" << format_double(r.t) << " mass=" << format_double(r.mass) << " energy_Tm=" << format_double(r.energy_Tm)
     << " energy_half_p=" << format_double(r.energy_half_p) << " h1=" << format_double(r.h1)
     << " gram_defect=" << format_double(r.gram_defect);
  return os.str();
}

std::size_t steps_for(double time, double dt) {
  const double steps = time / dt;
  const double rounded = std::round(steps);
  if (std::abs(steps - rounded) > 1e-9 * std::max(1.0, steps))
    throw Error(ErrorCode::Constraint, "converge.time: must be an integer multiple of every ladder dt");
  return static_cast<std::size_t>(rounded);
}

Ensemble integrate(Ensemble e, double dt, std::size_t steps, Scheme scheme, Coupling coupling) {
  for (std::size_t s = 0; s < steps; ++s) e = step(std::move(e), dt, scheme, coupling);
  return e;
}

double order_between(double coarse, double fine) {
  if (!(coarse > 0.0) || !(fine > 0.0)) return std::numeric_limits<double>::quiet_NaN();
  return std::log2(coarse / fine);
}

}  // namespace

Ensemble initial_ensemble(const RunConfig& cfg) {
  auto basis = std::make_shared<const SineBasis>(cfg.domain);
  if (!cfg.snapshot.empty()) return read_snapshot(cfg.snapshot, basis);
  return random_ensemble(basis, cfg.weights, cfg.mass, cfg.seed, cfg.damping);
}

RunOutcome command_run(const RunConfig& cfg, const LineSink& log) {
  const auto dir = prepare_directory(cfg.directory);
  Ensemble e0 = initial_ensemble(cfg);

  const double wrap = phase_wrap_number(e0, cfg.integration.dt);
  emit(log, "phase-wrap number dt*max(T_m) = " + format_double(wrap));
  if (wrap >= std::numbers::pi) emit(log, "advisory: dt*max(T_m) >= pi, top modes wrap their phase within one step");

  std::ofstream csv(dir / "diagnostics.csv", std::ios::trunc);
  if (!csv) throw Error(ErrorCode::Io, (dir / "diagnostics.csv").string() + ": cannot write");
  csv.imbue(std::locale::classic());
  write_diagnostics_header(csv);

  RunOutcome out;
  auto sink = [&](const DiagnosticsRecord& r) {
    write_diagnostics_row(csv, r);
    out.records.push_back(r);
  };
  StateObserver observer;
  if (cfg.snapshot_cadence > 0) {
    observer = [&](std::size_t s, const Ensemble& e) {
      if (s % cfg.snapshot_cadence == 0) write_snapshot(e, dir / snapshot_name(s));
    };
  }

  Ensemble final_state = e0;
  try {
    final_state = run(std::move(e0), cfg.integration, sink, observer);
  } catch (const BlowUpError& err) {
    csv.flush();
    emit(log, std::string("blow-up guard: ") + err.what());
    emit(log, "final record: " + describe(err.record()));
    throw;
  }
  csv.flush();
  if (!csv) throw Error(ErrorCode::Io, (dir / "diagnostics.csv").string() + ": write failed");
  if (cfg.snapshot_cadence > 0) write_snapshot(final_state, dir / "final.srsp");

  emit(log, "records: " + std::to_string(out.records.size()));
  if (out.records.size() >= 2) {
    out.summary = conservation_report(out.records);
    for (const auto& d : out.summary.drifts)
      emit(log, "drift " + d.name + " = " + format_double(d.max_relative_drift));
    emit(log, "max gram_defect = " + format_double(out.summary.max_gram_defect));
    emit(log, "conserved energy variant: " + out.summary.conserved_energy);
    emit(log, "gronwall slope (log h1 vs t) = " + format_double(out.summary.gronwall_slope) +
                  ", envelope slope = " + format_double(out.summary.gronwall_envelope_slope));
  }

  if (cfg.plot) {
    std::vector<PlotSeries> series{{"mass", {}, {}}, {"energy_Tm", {}, {}}, {"energy_half_p", {}, {}},
                                   {"gram_defect", {}, {}}};
    for (const auto& r : out.records) {
      for (auto& s : series) s.x.push_back(r.t);
      series[0].y.push_back(r.mass);
      series[1].y.push_back(r.energy_Tm);
      series[2].y.push_back(r.energy_half_p);
      series[3].y.push_back(r.gram_defect);
    }
    write_svg(dir / "diagnostics.svg", "diagnostics", series);
  }
  return out;
}

double ensemble_distance(const Ensemble& a, const Ensemble& b) {
  if (a.size() != b.size()) throw Error(ErrorCode::DimensionMismatch, "ensemble_distance: different wavefunction counts");
  std::vector<SpectralCoeffs> diff = a.wavefunctions();
  for (std::size_t k = 0; k < diff.size(); ++k) {
    if (diff[k].size() != b.wavefunction(k).size()) throw Error(ErrorCode::DimensionMismatch, "ensemble_distance: different bases");
    for (std::size_t n = 0; n < diff[k].size(); ++n) diff[k][n] -= b.wavefunction(k)[n];
  }
  return weighted_sobolev_norm(a.basis(), a.weights(), diff, SobolevOrder::Zero, NormKind::Homogeneous);
}

SpectralCoeffs embed_coefficients(const SpectralCoeffs& c, const DomainSpec& from, const DomainSpec& to) {
  if (from.dimension != to.dimension) throw Error(ErrorCode::DimensionMismatch, "embed_coefficients: dimension mismatch");
  SpectralCoeffs out(to.mode_count(), Complex{0.0, 0.0});
  for (std::size_t flat = 0; flat < c.size(); ++flat) {
    const ModeIndex idx = mode_from_flat(flat, from);
    bool inside = true;
    for (int i = 0; i < to.dimension; ++i) inside = inside && idx.n[static_cast<std::size_t>(i)] <= to.modes[static_cast<std::size_t>(i)];
    if (inside) out[flat_mode_index(idx, to)] = c[flat];
  }
  return out;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw Error(ErrorCode::InvalidArgument, "loglog_slope: need >= 2 paired samples");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log2(x[i]);
    const double ly = std::log2(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

std::vector<double> finite_difference_poisson_1d(const std::vector<double>& n, double length) {
  const std::size_t m = n.size();
  if (m == 0) return {};
  const double h = length / static_cast<double>(m + 1);
  // (-V_{j-1} + 2 V_j - V_{j+1}) / h^2 = n_j with V_0 = V_{m+1} = 0.
  std::vector<double> diag(m, 2.0);
  std::vector<double> rhs(m);
  for (std::size_t j = 0; j < m; ++j) rhs[j] = n[j] * h * h;
  for (std::size_t j = 1; j < m; ++j) {
    const double w = -1.0 / diag[j - 1];
    diag[j] += w;
    rhs[j] -= w * rhs[j - 1];
  }
  std::vector<double> v(m);
  v[m - 1] = rhs[m - 1] / diag[m - 1];
  for (std::size_t j = m - 1; j-- > 0;) v[j] = (rhs[j] + v[j + 1]) / diag[j];
  return v;
}

std::vector<double> poisson_fd_errors(const std::vector<int>& divisions, std::uint64_t seed) {
  GaussianStream rng(seed);
  constexpr int kTerms = 8;
  std::vector<double> amp(kTerms);
  for (int m = 0; m < kTerms; ++m) amp[static_cast<std::size_t>(m)] = rng.next() / ((m + 1.0) * (m + 1.0));
  std::vector<double> errors;
  for (int div : divisions) {
    if (div % 2 != 0 || div < 4) throw Error(ErrorCode::InvalidArgument, "poisson_fd_errors: divisions must be even and >= 4");
    const SineBasis basis(DomainSpec{1, {1.0}, {div / 2}, 2});
    RealGridField n{std::vector<double>(basis.grid_count())};
    for (std::size_t j = 0; j < n.values.size(); ++j) {
      const double x = basis.grid_point(j)[0];
      double v = 0.0;
      for (int m = 0; m < kTerms; ++m) v += amp[static_cast<std::size_t>(m)] * std::sin((m + 1) * std::numbers::pi * x);
      n.values[j] = v;
    }
    const auto spectral = poisson_solve(n, basis).grid.values;
    const auto fd = finite_difference_poisson_1d(n.values, 1.0);
    double num = 0.0, den = 0.0;
    for (std::size_t j = 0; j < fd.size(); ++j) {
      num += (fd[j] - spectral[j]) * (fd[j] - spectral[j]);
      den += spectral[j] * spectral[j];
    }
    errors.push_back(std::sqrt(num / den));
  }
  return errors;
}

double transform_error_vs_direct(const SineBasis& basis, std::uint64_t seed) {
  GaussianStream rng(seed);
  SpectralCoeffs c(basis.mode_count());
  for (auto& v : c) v = Complex(rng.next(), rng.next());
  const auto fast = basis.synthesize(c).values;
  const std::size_t g = basis.grid_count();
  const std::size_t samples = std::min<std::size_t>(g, 2048);
  double worst = 0.0, scale = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    const std::size_t j = samples == g ? s : (s * 7919) % g;
    const auto x = basis.grid_point(j);
    Complex direct{0.0, 0.0};
    for (std::size_t n = 0; n < c.size(); ++n) direct += basis.eigenfunction(n, x) * c[n];
    worst = std::max(worst, std::abs(direct - fast[j]));
    scale = std::max(scale, std::abs(direct));
  }
  return scale > 0.0 ? worst / scale : worst;
}

VerifyOutcome command_verify(const RunConfig& cfg, const LineSink& log) {
  if (cfg.trials < 1) throw Error(ErrorCode::InvalidArgument, "verify.trials: must be >= 1");
  VerifyOutcome out;
  auto basis = std::make_shared<SineBasis>(cfg.domain);
  if (cfg.tamper_eigenvalue != 1.0) {
    basis->tamper_eigenvalue(0, cfg.tamper_eigenvalue);
    emit(log, "test hook: lowest eigenvalue scaled by " + format_double(cfg.tamper_eigenvalue));
  }
  auto fail = [&](const std::string& what) {
    out.passed = false;
    out.failures.push_back(what);
    emit(log, "FAIL " + what);
  };

  out.norm_equivalence = verify_norm_equivalence(*basis, cfg.verify_seed, cfg.trials);
  const auto& ne = out.norm_equivalence;
  emit(log, "norm equivalence: trials=" + std::to_string(ne.trials) + " violations=" + std::to_string(ne.violations) +
                " worst H^1/2 ratio=" + format_double(ne.worst_half_ratio) + " (bound " + format_double(ne.half_bound) +
                ") worst H^1 ratio=" + format_double(ne.worst_one_ratio) + " (bound " + format_double(ne.one_bound) + ")");
  if (!ne.passed()) fail(ne.failure);

  std::vector<double> masses{cfg.mass, 0.1, 1.0, 10.0};
  std::sort(masses.begin(), masses.end());
  masses.erase(std::unique(masses.begin(), masses.end()), masses.end());
  for (double m : masses) {
    auto rep = verify_kinetic_bound(*basis, m, cfg.verify_seed, cfg.trials);
    emit(log, "kinetic bound m=" + format_double(m) + ": violations=" + std::to_string(rep.violations) +
                  " tightest ratio=" + format_double(rep.tightest_ratio));
    if (!rep.passed()) fail(rep.failure);
    out.kinetic.push_back(std::move(rep));
  }

  out.lipschitz = probe_lipschitz(basis, std::max<std::size_t>(1, cfg.wavefunctions), cfg.verify_seed, cfg.trials);
  emit(log, "lipschitz probe: max quotient=" + format_double(out.lipschitz.max_quotient) +
                " mean=" + format_double(out.lipschitz.mean_quotient) +
                " s^2 scaling defect=" + format_double(out.lipschitz.scaling_defect));
  if (!(out.lipschitz.scaling_defect <= 1e-10) || !std::isfinite(out.lipschitz.max_quotient))
    fail("lipschitz probe: quadratic scaling of the difference quotient broken");

  out.transform_error = transform_error_vs_direct(*basis, cfg.verify_seed);
  emit(log, "transform vs direct summation: relative error=" + format_double(out.transform_error));
  if (!(out.transform_error <= 1e-13)) fail("transform: synthesize deviates from direct summation");

  const std::vector<int> divisions{64, 128, 256};
  const auto errs = poisson_fd_errors(divisions, cfg.verify_seed);
  out.poisson_fd_order = std::log2(errs[errs.size() - 2] / errs.back());
  emit(log, "poisson vs finite differences: errors " + format_double(errs[0]) + ", " + format_double(errs[1]) + ", " +
                format_double(errs[2]) + "; observed order " + format_double(out.poisson_fd_order));
  if (!(std::log2(errs[0] / errs[1]) >= 1.9 && out.poisson_fd_order >= 1.9))
    fail("poisson: finite-difference solve does not converge at second order");

  emit(log, out.passed ? "verify: PASS" : "verify: FAIL");
  return out;
}

ConvergeOutcome command_converge(const RunConfig& cfg, const LineSink& log) {
  const auto dir = prepare_directory(cfg.directory);
  const Ensemble e0 = initial_ensemble(cfg);
  const Coupling coupling = cfg.coupling ? Coupling::On : Coupling::Off;
  const Scheme scheme = cfg.integration.scheme;
  ConvergeOutcome out;

  // dt ladder against a reference at the finest dt / reference_divisor.
  std::vector<double> dts;
  for (std::size_t j = 0; j < cfg.dt_levels; ++j) dts.push_back(cfg.converge_dt / std::ldexp(1.0, static_cast<int>(j)));
  const double dt_ref = dts.back() / static_cast<double>(cfg.reference_divisor);
  emit(log, "reference solution: dt=" + format_double(dt_ref) + " steps=" + std::to_string(steps_for(cfg.converge_time, dt_ref)));
  const Ensemble reference = integrate(e0, dt_ref, steps_for(cfg.converge_time, dt_ref), scheme, coupling);
  std::vector<double> dt_errors;
  for (std::size_t j = 0; j < dts.size(); ++j) {
    const Ensemble sol = integrate(e0, dts[j], steps_for(cfg.converge_time, dts[j]), scheme, coupling);
    dt_errors.push_back(ensemble_distance(sol, reference));
    const double order = j == 0 ? std::numeric_limits<double>::quiet_NaN() : order_between(dt_errors[j - 1], dt_errors[j]);
    out.rows.push_back({"dt", j, dts[j], cfg.domain.modes[0], dt_errors[j], order, 0.0});
    emit(log, "dt ladder level " + std::to_string(j) + ": dt=" + format_double(dts[j]) + " error=" +
                  format_double(dt_errors[j]) + " order=" + format_double(order));
  }
  const bool resolvable = std::all_of(dt_errors.begin(), dt_errors.end(), [](double x) { return x > 0.0; });
  out.dt_slope = resolvable ? loglog_slope(dts, dt_errors) : std::numeric_limits<double>::quiet_NaN();
  emit(log, "dt slope = " + format_double(out.dt_slope));

  // Per-step difference between the two second-order-consistent schemes.
  std::vector<double> split;
  for (std::size_t j = 0; j < dts.size(); ++j) {
    split.push_back(ensemble_distance(strang_step(e0, dts[j], coupling), duhamel_midpoint_step(e0, dts[j], coupling)));
    const double order = j == 0 ? std::numeric_limits<double>::quiet_NaN() : order_between(split[j - 1], split[j]);
    out.rows.push_back({"split_difference", j, dts[j], cfg.domain.modes[0], split[j], order, 0.0});
  }
  const bool split_resolvable = std::all_of(split.begin(), split.end(), [](double x) { return x > 0.0; });
  out.split_difference_slope = split_resolvable ? loglog_slope(dts, split) : std::numeric_limits<double>::quiet_NaN();
  emit(log, "strang vs duhamel_midpoint per-step slope = " + format_double(out.split_difference_slope));

  // Mode ladder: identical initial data embedded into finer cutoffs.
  std::vector<Ensemble> finals;
  std::vector<DomainSpec> doms;
  const double dt_modes = dts.back();
  for (std::size_t j = 0; j < cfg.n_levels; ++j) {
    DomainSpec dom = cfg.domain;
    for (auto& n : dom.modes) n <<= j;
    auto basis = std::make_shared<const SineBasis>(dom);
    std::vector<SpectralCoeffs> psi;
    for (const auto& c : e0.wavefunctions()) psi.push_back(embed_coefficients(c, cfg.domain, dom));
    Ensemble e(basis, std::vector<double>(e0.weights().begin(), e0.weights().end()), std::move(psi), e0.mass());
    finals.push_back(integrate(std::move(e), dt_modes, steps_for(cfg.converge_time, dt_modes), scheme, coupling));
    doms.push_back(dom);
  }
  const Ensemble& finest = finals.back();
  double previous = 0.0;
  for (std::size_t j = 0; j < finals.size(); ++j) {
    std::vector<SpectralCoeffs> lifted, tail;
    for (std::size_t k = 0; k < finals[j].size(); ++k) {
      lifted.push_back(embed_coefficients(finals[j].wavefunction(k), doms[j], doms.back()));
      // Part of the finest solution that level j cannot represent.
      auto restricted = embed_coefficients(embed_coefficients(finest.wavefunction(k), doms.back(), doms[j]), doms[j], doms.back());
      for (std::size_t n = 0; n < restricted.size(); ++n) restricted[n] = finest.wavefunction(k)[n] - restricted[n];
      tail.push_back(std::move(restricted));
    }
    const double err = ensemble_distance(finest.with_wavefunctions(std::move(lifted)), finest);
    const double tail_norm =
        weighted_sobolev_norm(finest.basis(), finest.weights(), tail, SobolevOrder::Zero, NormKind::Homogeneous);
    const double order = j == 0 ? std::numeric_limits<double>::quiet_NaN() : order_between(previous, err);
    previous = err;
    out.rows.push_back({"modes", j, dt_modes, doms[j].modes[0], err, order, tail_norm});
    emit(log, "mode ladder level " + std::to_string(j) + ": N=" + std::to_string(doms[j].modes[0]) + " error=" +
                  format_double(err) + " tail=" + format_double(tail_norm));
  }

  std::ofstream csv(dir / "convergence.csv", std::ios::trunc);
  if (!csv) throw Error(ErrorCode::Io, (dir / "convergence.csv").string() + ": cannot write");
  write_convergence_csv(csv, out.rows);
  if (!csv) throw Error(ErrorCode::Io, (dir / "convergence.csv").string() + ": write failed");
  return out;
}

}  // namespace srsp
