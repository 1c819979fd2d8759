#include "srsp/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "srsp/error.hpp"

namespace srsp {

DiagnosticsRecord record(const Ensemble& e, double t, Coupling coupling) {
  DiagnosticsRecord r;
  r.t = t;
  const auto n = density(e);
  double pot = 0.0;
  if (coupling == Coupling::On) pot = potential_energy(poisson_solve(n, e.basis()), e.basis());
  r.mass = sobolev_norm(e, SobolevOrder::Zero, NormKind::Homogeneous);
  r.potential_energy = pot;
  r.energy_Tm = kinetic_energy(e, EnergyVariant::Tm) + pot;
  r.energy_half_p = kinetic_energy(e, EnergyVariant::HalfP) + pot;
  r.h12 = sobolev_norm(e, SobolevOrder::Half, NormKind::Homogeneous);
  r.h1 = sobolev_norm(e, SobolevOrder::One, NormKind::Homogeneous);
  r.gram_defect = gram_matrix(e).defect();
  r.density_min = n.values.empty() ? 0.0 : *std::min_element(n.values.begin(), n.values.end());
  return r;
}

double ConservationSummary::drift(const std::string& name) const {
  for (const auto& d : drifts)
    if (d.name == name) return d.max_relative_drift;
  throw Error(ErrorCode::InvalidArgument, "conservation summary has no quantity '" + name + "'");
}

ConservationSummary conservation_report(const std::vector<DiagnosticsRecord>& records) {
  if (records.size() < 2) throw Error(ErrorCode::InvalidArgument, "conservation_report: need at least two records");
  ConservationSummary s;
  const DiagnosticsRecord& first = records.front();
  auto track = [&](const char* name, double DiagnosticsRecord::*field) {
    QuantityDrift d{name, first.*field, 0.0};
    const double scale = std::abs(first.*field);
    for (const auto& r : records) {
      const double diff = std::abs(r.*field - first.*field);
      d.max_relative_drift = std::max(d.max_relative_drift, scale > 0.0 ? diff / scale : diff);
    }
    s.drifts.push_back(d);
  };
  track("mass", &DiagnosticsRecord::mass);
  track("energy_Tm", &DiagnosticsRecord::energy_Tm);
  track("energy_half_p", &DiagnosticsRecord::energy_half_p);
  track("h12", &DiagnosticsRecord::h12);
  track("h1", &DiagnosticsRecord::h1);

  s.min_density = std::numeric_limits<double>::infinity();
  for (const auto& r : records) {
    s.max_gram_defect = std::max(s.max_gram_defect, r.gram_defect);
    s.min_density = std::min(s.min_density, r.density_min);
  }
  s.conserved_energy = s.drift("energy_Tm") <= s.drift("energy_half_p") ? "energy_Tm" : "energy_half_p";

  if (first.h1 > 0.0) {
    double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
    const double n = static_cast<double>(records.size());
    const double y0 = std::log(first.h1);
    for (const auto& r : records) {
      const double y = std::log(r.h1);
      st += r.t;
      sy += y;
      stt += r.t * r.t;
      sty += r.t * y;
      if (r.t > first.t) s.gronwall_envelope_slope = std::max(s.gronwall_envelope_slope, (y - y0) / (r.t - first.t));
    }
    const double denom = n * stt - st * st;
    s.gronwall_slope = denom > 0.0 ? (n * sty - st * sy) / denom : 0.0;
  }
  return s;
}

namespace {

// Uniform weights keep every random trial a valid (Psi, lambda) pair.
std::vector<double> uniform_weights(std::size_t count) { return std::vector<double>(count, 1.0 / static_cast<double>(count)); }

std::string seed_tag(std::uint64_t seed, std::size_t trial) {
  std::ostringstream os;
  os << "seed " << seed << ", trial " << trial;
  return os.str();
}

constexpr double kRoundoff = 1e-12;

}  // namespace

NormEquivalenceReport verify_norm_equivalence(const SineBasis& basis, std::uint64_t seed, std::size_t trials) {
  if (trials < 1) throw Error(ErrorCode::InvalidArgument, "verify_norm_equivalence: trials must be >= 1");
  NormEquivalenceReport rep;
  rep.seed = seed;
  rep.trials = trials;
  const double cp = basis.domain().poincare_constant();
  rep.half_bound = std::sqrt(1.0 + 1.0 / std::sqrt(cp));
  rep.one_bound = std::sqrt(1.0 + 1.0 / cp);
  rep.min_half_ratio = std::numeric_limits<double>::infinity();
  rep.min_one_ratio = std::numeric_limits<double>::infinity();

  auto check = [&](std::span<const double> w, std::span<const SpectralCoeffs> psi, const std::string& tag) {
    const double h12 = weighted_sobolev_norm(basis, w, psi, SobolevOrder::Half, NormKind::Inhomogeneous) /
                       weighted_sobolev_norm(basis, w, psi, SobolevOrder::Half, NormKind::Homogeneous);
    const double h1 = weighted_sobolev_norm(basis, w, psi, SobolevOrder::One, NormKind::Inhomogeneous) /
                      weighted_sobolev_norm(basis, w, psi, SobolevOrder::One, NormKind::Homogeneous);
    rep.worst_half_ratio = std::max(rep.worst_half_ratio, h12);
    rep.worst_one_ratio = std::max(rep.worst_one_ratio, h1);
    rep.min_half_ratio = std::min(rep.min_half_ratio, h12);
    rep.min_one_ratio = std::min(rep.min_one_ratio, h1);
    const bool ok = h12 >= 1.0 - kRoundoff && h12 <= rep.half_bound * (1.0 + kRoundoff) && h1 >= 1.0 - kRoundoff &&
                    h1 <= rep.one_bound * (1.0 + kRoundoff);
    if (!ok) {
      ++rep.violations;
      if (rep.failure.empty()) {
        std::ostringstream os;
        os.precision(17);
        os << "norm equivalence violated (" << tag << "): H^1/2 ratio " << h12 << " vs bound " << rep.half_bound
           << ", H^1 ratio " << h1 << " vs bound " << rep.one_bound;
        rep.failure = os.str();
      }
    }
    return h12;
  };

  SpectralCoeffs lowest(basis.mode_count(), Complex{0.0, 0.0});
  lowest[0] = 1.0;
  const std::vector<double> one{1.0};
  const std::vector<SpectralCoeffs> single{lowest};
  rep.lowest_mode_half_ratio = check(one, single, seed_tag(seed, 0) + ", lowest mode");

  GaussianStream rng(seed);
  for (std::size_t trial = 1; trial <= trials; ++trial) {
    const std::size_t count = 1 + static_cast<std::size_t>(rng.uniform() * 4.0) % 4;
    const double damping = 2.0 * rng.uniform();
    auto psi = random_coefficients(basis, count, rng, damping);
    std::vector<double> w(count);
    for (auto& x : w) x = rng.uniform();
    w = normalize_weights(std::move(w));
    check(w, psi, seed_tag(seed, trial));
  }
  return rep;
}

KineticBoundReport verify_kinetic_bound(const SineBasis& basis, double mass, std::uint64_t seed, std::size_t trials) {
  if (trials < 1) throw Error(ErrorCode::InvalidArgument, "verify_kinetic_bound: trials must be >= 1");
  KineticBoundReport rep;
  rep.seed = seed;
  rep.trials = trials;
  rep.mass = mass;
  auto shared = std::make_shared<SineBasis>(basis);
  GaussianStream rng(seed);
  for (std::size_t trial = 1; trial <= trials; ++trial) {
    const std::size_t count = 1 + static_cast<std::size_t>(rng.uniform() * 4.0) % 4;
    const double damping = 2.0 * rng.uniform();
    auto psi = random_coefficients(basis, count, rng, damping);
    const Ensemble e(shared, uniform_weights(count), std::move(psi), mass);
    const double t2 = std::pow(kinetic_operator_norm(e), 2);
    const double bound = std::pow(sobolev_norm(e, SobolevOrder::One, NormKind::Homogeneous), 2) +
                         2.0 * mass * mass * std::pow(sobolev_norm(e, SobolevOrder::Zero, NormKind::Homogeneous), 2);
    const double ratio = t2 / bound;
    rep.tightest_ratio = std::max(rep.tightest_ratio, ratio);
    if (t2 > bound * (1.0 + kRoundoff)) {
      ++rep.violations;
      if (rep.failure.empty()) {
        std::ostringstream os;
        os.precision(17);
        os << "kinetic bound violated (" << seed_tag(seed, trial) << ", m = " << mass << "): " << t2 << " > " << bound;
        rep.failure = os.str();
      }
    }
  }
  return rep;
}

double lipschitz_quotient(const Ensemble& psi, const Ensemble& phi) {
  const auto fpsi = nonlinear_rhs(psi);
  const auto fphi = nonlinear_rhs(phi);
  std::vector<SpectralCoeffs> df = fpsi;
  std::vector<SpectralCoeffs> dx = psi.wavefunctions();
  for (std::size_t k = 0; k < df.size(); ++k)
    for (std::size_t n = 0; n < df[k].size(); ++n) {
      df[k][n] -= fphi[k][n];
      dx[k][n] -= phi.wavefunction(k)[n];
    }
  const auto& basis = psi.basis();
  const double dist = weighted_sobolev_norm(basis, psi.weights(), dx, SobolevOrder::One, NormKind::Inhomogeneous);
  if (dist == 0.0) return 0.0;
  const double num = weighted_sobolev_norm(basis, psi.weights(), df, SobolevOrder::One, NormKind::Inhomogeneous);
  const double a = sobolev_norm(psi, SobolevOrder::One, NormKind::Inhomogeneous);
  const double b = sobolev_norm(phi, SobolevOrder::One, NormKind::Inhomogeneous);
  return num / ((a * a + b * b) * dist);
}

LipschitzReport probe_lipschitz(std::shared_ptr<const SineBasis> basis, std::size_t count, std::uint64_t seed,
                                std::size_t trials, double scale) {
  if (trials < 1) throw Error(ErrorCode::InvalidArgument, "probe_lipschitz: trials must be >= 1");
  if (count < 1) throw Error(ErrorCode::InvalidArgument, "probe_lipschitz: need at least one wavefunction");
  LipschitzReport rep;
  rep.seed = seed;
  rep.trials = trials;
  const auto w = uniform_weights(count);
  GaussianStream rng(seed);

  auto draw = [&]() {
    Ensemble e(basis, w, random_coefficients(*basis, count, rng, 1.0), 1.0);
    const double target = 0.5 + 1.5 * rng.uniform();
    return e.scaled(target / sobolev_norm(e, SobolevOrder::One, NormKind::Inhomogeneous));
  };
  // ||F_V[Psi] - F_V[Phi]|| / ||Psi - Phi||, un-normalized.
  auto raw = [](const Ensemble& a, const Ensemble& b) {
    const double na = sobolev_norm(a, SobolevOrder::One, NormKind::Inhomogeneous);
    const double nb = sobolev_norm(b, SobolevOrder::One, NormKind::Inhomogeneous);
    return lipschitz_quotient(a, b) * (na * na + nb * nb);
  };

  double sum = 0.0;
  for (std::size_t trial = 0; trial < trials; ++trial) {
    const Ensemble psi = draw();
    const Ensemble phi = draw();
    const double q = lipschitz_quotient(psi, phi);
    rep.max_quotient = std::max(rep.max_quotient, q);
    sum += q;
    const double base = raw(psi, phi);
    const double scaled = raw(psi.scaled(scale), phi.scaled(scale));
    if (base > 0.0) rep.scaling_defect = std::max(rep.scaling_defect, std::abs(scaled / (scale * scale * base) - 1.0));
  }
  rep.mean_quotient = sum / static_cast<double>(trials);
  return rep;
}

}  // namespace srsp
