// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>
#include <vector>

#include "../oracles.hpp"
#include "srsp/commands.hpp"
#include "srsp/diagnostics.hpp"
#include "srsp/integrator.hpp"

using namespace srsp;

namespace {

int failures = 0;

void verdict(int id, const std::string& name, bool ok, const std::string& detail) {
  std::printf("[%s] %2d %s: %s\n", ok ? "PASS" : "FAIL", id, name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Baseline: d=1, L=1, K=4, N=64, q=2, m=1, geometric(1/2) weights. Damping 2
// keeps the initial spectrum smooth enough for the order-2 drift law to show.
Ensemble baseline(const DomainSpec& dom, std::size_t k) {
  return random_ensemble(std::make_shared<const SineBasis>(dom), geometric_weights(k, 0.5), 1.0, 1, 2.0);
}

struct RunResult {
  std::vector<DiagnosticsRecord> records;
  ConservationSummary summary;
  double seconds = 0.0;
  bool guard_tripped = false;
};

RunResult evolve(const Ensemble& e0, double dt, std::size_t steps, std::size_t cadence) {
  RunResult r;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    run(e0, StepParams{dt, Scheme::Strang, steps, cadence, 1e3, Coupling::On},
        [&](const DiagnosticsRecord& rec) { r.records.push_back(rec); });
  } catch (const BlowUpError& err) {
    r.guard_tripped = true;
    r.records.push_back(err.record());
  }
  r.seconds = seconds_since(t0);
  r.summary = conservation_report(r.records);
  return r;
}

double weighted_distance(const Ensemble& a, const Ensemble& b) { return ensemble_distance(a, b); }

}  // namespace

int main() {
  const DomainSpec dom1{1, {1.0}, {64}, 2};
  const Ensemble e1 = baseline(dom1, 4);

  std::printf("baseline: d=1 L=1 K=4 N=64 q=2 m=1 dt=1e-3 steps=10000 (dt/2: 20000)\n");
  const RunResult full = evolve(e1, 1e-3, 10000, 10);
  const RunResult half = evolve(e1, 5e-4, 20000, 20);

  // 1. Mass.
  {
    const double drift = full.summary.drift("mass");
    verdict(1, "mass conservation", drift <= 1e-10 && full.seconds <= 60.0 && !full.guard_tripped,
            fmt("relative L2_lambda drift %.3e (<= 1e-10), runtime %.1f s (<= 60 s)", drift, full.seconds));
  }
  // 2. Orthonormality.
  {
    const double g = full.summary.max_gram_defect;
    verdict(2, "orthonormality", g <= 1e-8, fmt("max |G - I| over %zu records %.3e (<= 1e-8)", full.records.size(), g));
  }
  // 3. Energy identity.
  {
    const std::string variant = full.summary.conserved_energy;
    const double d = full.summary.drift(variant);
    const double d_half = half.summary.drift(variant);
    const double ratio = d / d_half;
    const double other = full.summary.drift(variant == "energy_Tm" ? "energy_half_p" : "energy_Tm");
    verdict(3, "energy identity", d <= 1e-4 && ratio >= 3.0 && ratio <= 5.0,
            fmt("conserved variant %s, drift %.3e (<= 1e-4), dt/2 drift %.3e, ratio %.2f in [3, 5]; other variant "
                "drifts %.3e",
                variant.c_str(), d, d_half, ratio, other));
  }
  // 4. Free flow.
  {
    const double dt = 1e-3;
    Ensemble e = e1;
    for (int s = 0; s < 1000; ++s) e = step(std::move(e), dt, Scheme::Strang, Coupling::Off);
    // Analytic solution: per-mode phase exp(-i T_m(mu) t) evaluated in one shot.
    const double t = 1000 * dt;
    double worst = 0.0;
    const auto mu = e1.basis().eigenvalues();
    for (std::size_t k = 0; k < e1.size(); ++k)
      for (std::size_t n = 0; n < mu.size(); ++n) {
        const double symbol = mu[n] / (std::sqrt(mu[n] + 1.0) + 1.0);
        const auto exact = e1.wavefunction(k)[n] * std::polar(1.0, -symbol * t);
        worst = std::max(worst, std::abs(e.wavefunction(k)[n] - exact));
      }
    double group = 0.0;
    for (auto [a, b] : {std::pair{0.3, 0.45}, std::pair{1.7, -0.2}, std::pair{2.5, 3.5}})
      group = std::max(group, weighted_distance(free_flow(free_flow(e1, a), b), free_flow(e1, a + b)));
    verdict(4, "free-flow exactness", worst <= 1e-12 && group <= 1e-13,
            fmt("1000 steps vs analytic phases %.3e (<= 1e-12), group law %.3e (<= 1e-13)", worst, group));
  }
  // 5. Poisson vs dense finite differences.
  {
    std::vector<double> h, err;
    for (int m : {64, 128, 256}) {
      const SineBasis b(DomainSpec{1, {1.0}, {m / 2}, 2});
      std::vector<double> n(b.grid_count());
      for (std::size_t j = 0; j < n.size(); ++j) {
        const double x = b.grid_point(j)[0];
        n[j] = 2 * std::pow(std::sin(std::numbers::pi * x), 2) + 0.5 * std::pow(std::sin(3 * std::numbers::pi * x), 2);
      }
      const auto spectral = poisson_solve(RealGridField{n}, b).grid.values;
      const auto fd = oracle::dense_fd_poisson(n, 1.0);
      double num = 0, den = 0;
      for (std::size_t j = 0; j < n.size(); ++j) {
        num += std::pow(fd[j] - spectral[j], 2);
        den += std::pow(spectral[j], 2);
      }
      h.push_back(1.0 / m);
      err.push_back(std::sqrt(num / den));
    }
    const double order = oracle::loglog_slope(h, err);
    verdict(5, "poisson oracle", order >= 1.9,
            fmt("relative L2 errors %.3e, %.3e, %.3e at M = 64, 128, 256; order %.3f (>= 1.9)", err[0], err[1], err[2],
                order));
  }
  // 6. Norm equivalence.
  {
    const SineBasis b1(dom1);
    const SineBasis b3(DomainSpec{3, {1.0, 1.0, 1.0}, {8, 8, 8}, 2});
    const auto r1 = verify_norm_equivalence(b1, 1, 100);
    const auto r3 = verify_norm_equivalence(b3, 2, 100);
    const double target = std::sqrt(1.0 + 1.0 / std::numbers::pi);
    const double gap = std::abs(r1.lowest_mode_half_ratio - target);
    verdict(6, "norm equivalence", r1.passed() && r3.passed() && gap <= 1e-12,
            fmt("violations d=1: %zu, d=3: %zu over 100 trials each; lowest-mode ratio %.12f vs sqrt(1+1/pi) "
                "(|diff| %.1e <= 1e-12)",
                r1.violations, r3.violations, r1.lowest_mode_half_ratio, gap));
  }
  // 7. Kinetic bound.
  {
    const SineBasis b(dom1);
    std::size_t violations = 0;
    double tightest = 0.0;
    for (double m : {0.1, 1.0, 10.0}) {
      const auto r = verify_kinetic_bound(b, m, 7, 100);
      violations += r.violations;
      tightest = std::max(tightest, r.tightest_ratio);
    }
    verdict(7, "kinetic bound", violations == 0,
            fmt("violations %zu over 3 x 100 trials, tightest ratio %.6f", violations, tightest));
  }
  // 8. Lipschitz structure.
  {
    const auto nl = nonlinear_rhs(e1);
    double homogeneity = 0.0;
    for (double s : {2.0, 10.0}) {
      const auto scaled = nonlinear_rhs(e1.scaled(s));
      double num = 0.0, den = 0.0;
      for (std::size_t k = 0; k < nl.size(); ++k)
        for (std::size_t n = 0; n < nl[k].size(); ++n) {
          num += std::norm(scaled[k][n] - s * s * s * nl[k][n]);
          den += std::norm(s * s * s * nl[k][n]);
        }
      homogeneity = std::max(homogeneity, std::sqrt(num / den));
    }
    auto b = e1.basis_ptr();
    const auto a = probe_lipschitz(b, 2, 1, 100);
    const auto c = probe_lipschitz(b, 2, 1000001, 100);
    const double spread = std::abs(a.max_quotient / c.max_quotient - 1.0);
    verdict(8, "lipschitz structure", homogeneity <= 1e-10 && spread <= 0.2 && a.scaling_defect <= 1e-10,
            fmt("cubic homogeneity defect %.3e (<= 1e-10); max quotient %.4f vs %.4f (spread %.1f%% <= 20%%); s^2 "
                "scaling defect %.1e",
                homogeneity, a.max_quotient, c.max_quotient, 100 * spread, a.scaling_defect));
  }
  // 9. Splitting order.
  {
    RunConfig cfg;
    cfg.domain = dom1;
    cfg.weights = geometric_weights(4, 0.5);
    cfg.wavefunctions = 4;
    cfg.damping = 2.0;
    cfg.directory = "acceptance_out";
    cfg.dt_levels = 5;
    cfg.n_levels = 3;
    cfg.converge_dt = 1e-2;
    cfg.converge_time = 0.5;
    cfg.reference_divisor = 16;
    const auto out = command_converge(cfg, {});
    verdict(9, "splitting order", std::abs(out.dt_slope - 2.0) <= 0.2 && out.split_difference_slope >= 2.7,
            fmt("self-convergence slope %.3f over 4 halvings (2.0 +- 0.2); strang vs duhamel_midpoint per-step slope "
                "%.3f (>= 2.7)",
                out.dt_slope, out.split_difference_slope));
  }
  // 10. 3D smoke test with tolerances relaxed x10.
  {
    const DomainSpec dom3{3, {1.0, 1.0, 1.0}, {16, 16, 16}, 2};
    const Ensemble e3 = baseline(dom3, 2);
    const auto t0 = std::chrono::steady_clock::now();
    const RunResult a = evolve(e3, 1e-3, 100, 10);
    const RunResult b = evolve(e3, 5e-4, 200, 20);
    const double secs = seconds_since(t0);
    const double mass = a.summary.drift("mass");
    const double gram = a.summary.max_gram_defect;
    const double energy = a.summary.drift("energy_Tm");
    const double ratio = energy / b.summary.drift("energy_Tm");
    verdict(10, "3D smoke test",
            mass <= 1e-9 && gram <= 1e-7 && energy <= 1e-3 && ratio >= 3.0 && ratio <= 5.0 && secs <= 300.0,
            fmt("mass %.2e (<= 1e-9), gram %.2e (<= 1e-7), energy_Tm %.2e (<= 1e-3), dt/2 ratio %.2f in [3, 5], "
                "runtime %.1f s (<= 300 s)",
                mass, gram, energy, ratio, secs));
  }
  // 11. Gronwall envelope.
  {
    // A linear envelope must bound log h1 from above over the whole run.
    const double y0 = std::log(full.records.front().h1);
    const double slope = std::max(0.0, full.summary.gronwall_envelope_slope);
    bool bounded = true;
    for (const auto& r : full.records)
      bounded = bounded && std::log(r.h1) <= y0 + slope * r.t + 1e-12;
    verdict(11, "gronwall monitor", bounded && !full.guard_tripped && !half.guard_tripped,
            fmt("fitted slope of log h1 %.3e, envelope slope %.3e, guard tripped: %s", full.summary.gronwall_slope,
                full.summary.gronwall_envelope_slope, full.guard_tripped || half.guard_tripped ? "yes" : "no"));
  }

  std::printf("%s: %d failure(s)\n", failures == 0 ? "ACCEPTANCE PASS" : "ACCEPTANCE FAIL", failures);
  return failures == 0 ? 0 : 1;
}
