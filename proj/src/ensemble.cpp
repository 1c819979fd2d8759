#include "srsp/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "srsp/error.hpp"

namespace srsp {

std::vector<double> normalize_weights(std::vector<double> weights) {
  if (weights.empty()) throw Error(ErrorCode::Constraint, "physics.weights: at least one weight required");
  double total = 0.0;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    if (!(weights[k] > 0.0) || !std::isfinite(weights[k])) {
      std::ostringstream os;
      os << "physics.weights: lambda_" << (k + 1) << " = " << weights[k]
         << " violates positivity (every lambda_k must be > 0)";
      throw Error(ErrorCode::Constraint, os.str());
    }
    total += weights[k];
  }
  for (double& w : weights) w /= total;
  return weights;
}

std::vector<double> geometric_weights(std::size_t count, double ratio) {
  if (!(ratio > 0.0)) throw Error(ErrorCode::Constraint, "physics.weights: geometric ratio must be > 0");
  std::vector<double> w(count);
  double r = 1.0;
  for (std::size_t k = 0; k < count; ++k) {
    r *= ratio;
    w[k] = r;
  }
  return normalize_weights(std::move(w));
}

Ensemble::Ensemble(std::shared_ptr<const SineBasis> basis, std::vector<double> weights, std::vector<SpectralCoeffs> psi,
                   double mass)
    : basis_(std::move(basis)), weights_(std::move(weights)), psi_(std::move(psi)), mass_(mass) {
  if (!basis_) throw Error(ErrorCode::InvalidArgument, "ensemble: null basis");
  if (weights_.size() != psi_.size()) throw Error(ErrorCode::DimensionMismatch, "ensemble: weight count != wavefunction count");
  for (const auto& c : psi_)
    if (c.size() != basis_->mode_count()) throw Error(ErrorCode::DimensionMismatch, "ensemble: coefficient length != mode count");
  for (double w : weights_)
    if (!(w > 0.0)) throw Error(ErrorCode::Constraint, "ensemble: weights must be > 0");
  if (!(mass_ >= 0.0) || !std::isfinite(mass_)) throw Error(ErrorCode::Constraint, "physics.mass: must be >= 0");
}

Ensemble Ensemble::scaled(double s) const {
  auto psi = psi_;
  for (auto& c : psi)
    for (auto& v : c) v *= s;
  return with_wavefunctions(std::move(psi));
}

Ensemble Ensemble::with_wavefunctions(std::vector<SpectralCoeffs> psi) const {
  return Ensemble(basis_, weights_, std::move(psi), mass_);
}

RealGridField density(const Ensemble& e) {
  const SineBasis& basis = e.basis();
  RealGridField n{std::vector<double>(basis.grid_count(), 0.0)};
  for (std::size_t k = 0; k < e.size(); ++k) {
    const auto grid = basis.synthesize(e.wavefunction(k));
    const double w = e.weights()[k];
    for (std::size_t j = 0; j < n.values.size(); ++j) n.values[j] += w * std::norm(grid.values[j]);
  }
  return n;
}

PotentialField poisson_solve(const RealGridField& n, const SineBasis& basis) {
  auto coeffs = basis.analyze_full(n.values);
  const auto mu = basis.full_eigenvalues();
  for (std::size_t i = 0; i < coeffs.size(); ++i) coeffs[i] /= mu[i];
  auto grid = basis.synthesize_full(coeffs);
  return {std::move(grid), std::move(coeffs)};
}

SpectralCoeffs multiply_and_project(const PotentialField& v, const SpectralCoeffs& psi, const SineBasis& basis) {
  auto grid = basis.synthesize(psi);
  if (v.grid.values.size() != grid.values.size()) throw Error(ErrorCode::DimensionMismatch, "potential on a different grid");
  for (std::size_t j = 0; j < grid.values.size(); ++j) grid.values[j] *= v.grid.values[j];
  return basis.analyze(grid.values);
}

std::vector<SpectralCoeffs> nonlinear_rhs(const Ensemble& e) {
  const auto v = poisson_solve(density(e), e.basis());
  std::vector<SpectralCoeffs> out;
  out.reserve(e.size());
  const Complex minus_i{0.0, -1.0};
  for (const auto& psi : e.wavefunctions()) {
    auto c = multiply_and_project(v, psi, e.basis());
    for (auto& x : c) x *= minus_i;
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<SpectralCoeffs> kinetic_rhs(const Ensemble& e) {
  const double m = e.mass();
  std::vector<SpectralCoeffs> out;
  out.reserve(e.size());
  const Complex minus_i{0.0, -1.0};
  for (const auto& psi : e.wavefunctions()) {
    auto c = apply_multiplier(psi, e.basis().eigenvalues(), [m](double mu) { return kinetic_symbol(mu, m); });
    for (auto& x : c) x *= minus_i;
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<SpectralCoeffs> hartree_rhs(const Ensemble& e) {
  auto out = kinetic_rhs(e);
  const auto nonlinear = nonlinear_rhs(e);
  for (std::size_t k = 0; k < out.size(); ++k)
    for (std::size_t n = 0; n < out[k].size(); ++n) out[k][n] += nonlinear[k][n];
  return out;
}

double weighted_sobolev_norm(const SineBasis& basis, std::span<const double> weights, std::span<const SpectralCoeffs> psi,
                             SobolevOrder order, NormKind kind) {
  if (weights.size() != psi.size()) throw Error(ErrorCode::DimensionMismatch, "sobolev_norm: weight count != wavefunction count");
  const auto mu = basis.eigenvalues();
  std::vector<double> w(mu.size());
  for (std::size_t n = 0; n < mu.size(); ++n) {
    double power = 1.0;
    switch (order) {
      case SobolevOrder::Zero: power = 1.0; break;
      case SobolevOrder::Half: power = std::sqrt(mu[n]); break;
      case SobolevOrder::One: power = mu[n]; break;
    }
    // ||.||_{L^2} is the same for both kinds.
    w[n] = (order != SobolevOrder::Zero && kind == NormKind::Inhomogeneous) ? 1.0 + power : power;
  }
  double total = 0.0;
  for (std::size_t k = 0; k < psi.size(); ++k) {
    if (psi[k].size() != mu.size()) throw Error(ErrorCode::DimensionMismatch, "sobolev_norm: coefficient length != mode count");
    double sum = 0.0;
    for (std::size_t n = 0; n < mu.size(); ++n) sum += w[n] * std::norm(psi[k][n]);
    total += weights[k] * sum;
  }
  return std::sqrt(total);
}

double sobolev_norm(const Ensemble& e, SobolevOrder order, NormKind kind) {
  return weighted_sobolev_norm(e.basis(), e.weights(), e.wavefunctions(), order, kind);
}

double kinetic_operator_norm(const Ensemble& e) {
  const auto mu = e.basis().eigenvalues();
  double total = 0.0;
  for (std::size_t k = 0; k < e.size(); ++k) {
    double sum = 0.0;
    for (std::size_t n = 0; n < mu.size(); ++n) {
      const double t = kinetic_symbol(mu[n], e.mass());
      sum += t * t * std::norm(e.wavefunction(k)[n]);
    }
    total += e.weights()[k] * sum;
  }
  return std::sqrt(total);
}

double potential_energy(const PotentialField& v, const SineBasis& basis) {
  const auto mu = basis.full_eigenvalues();
  if (v.coeffs.size() != mu.size()) throw Error(ErrorCode::DimensionMismatch, "potential coefficients on a different grid");
  double sum = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) sum += mu[i] * v.coeffs[i] * v.coeffs[i];
  return 0.5 * sum;
}

double potential_energy_quadrature(const PotentialField& v, const RealGridField& n, const SineBasis& basis) {
  if (v.grid.values.size() != n.values.size()) throw Error(ErrorCode::DimensionMismatch, "potential/density grid mismatch");
  std::vector<double> product(n.values.size());
  for (std::size_t j = 0; j < product.size(); ++j) product[j] = v.grid.values[j] * n.values[j];
  return 0.5 * basis.integrate(product);
}

double kinetic_energy(const Ensemble& e, EnergyVariant variant) {
  const auto mu = e.basis().eigenvalues();
  std::vector<double> symbol(mu.size());
  for (std::size_t n = 0; n < mu.size(); ++n)
    symbol[n] = variant == EnergyVariant::Tm ? kinetic_symbol(mu[n], e.mass()) : std::sqrt(mu[n]);
  double total = 0.0;
  for (std::size_t k = 0; k < e.size(); ++k) {
    double sum = 0.0;
    for (std::size_t n = 0; n < mu.size(); ++n) sum += symbol[n] * std::norm(e.wavefunction(k)[n]);
    total += e.weights()[k] * sum;
  }
  return total;
}

double energy(const Ensemble& e, EnergyVariant variant) {
  const auto v = poisson_solve(density(e), e.basis());
  return kinetic_energy(e, variant) + potential_energy(v, e.basis());
}

double GramMatrix::defect() const {
  double worst = 0.0;
  for (std::size_t k = 0; k < size; ++k)
    for (std::size_t l = 0; l < size; ++l)
      worst = std::max(worst, std::abs((*this)(k, l) - Complex(k == l ? 1.0 : 0.0, 0.0)));
  return worst;
}

GramMatrix gram_matrix(const Ensemble& e) {
  GramMatrix g;
  g.size = e.size();
  g.entries.resize(g.size * g.size);
  for (std::size_t k = 0; k < g.size; ++k) {
    g.entries[k * g.size + k] = Complex(mode_inner_product(e.wavefunction(k), e.wavefunction(k)).real(), 0.0);
    for (std::size_t l = k + 1; l < g.size; ++l) {
      const Complex kl = mode_inner_product(e.wavefunction(k), e.wavefunction(l));
      g.entries[k * g.size + l] = kl;
      g.entries[l * g.size + k] = std::conj(kl);
    }
  }
  return g;
}

Complex density_matrix_element(const Ensemble& e, std::size_t x_point, std::size_t y_point) {
  const SineBasis& basis = e.basis();
  if (x_point >= basis.grid_count() || y_point >= basis.grid_count())
    throw Error(ErrorCode::OutOfRange, "density_matrix_element: point is not a grid point");
  const auto x = basis.grid_point(x_point);
  const auto y = basis.grid_point(y_point);
  std::vector<double> ex(basis.mode_count());
  std::vector<double> ey(basis.mode_count());
  for (std::size_t n = 0; n < ex.size(); ++n) {
    ex[n] = basis.eigenfunction(n, x);
    ey[n] = basis.eigenfunction(n, y);
  }
  Complex rho{0.0, 0.0};
  for (std::size_t k = 0; k < e.size(); ++k) {
    Complex px{0.0, 0.0};
    Complex py{0.0, 0.0};
    for (std::size_t n = 0; n < ex.size(); ++n) {
      px += ex[n] * e.wavefunction(k)[n];
      py += ey[n] * e.wavefunction(k)[n];
    }
    // Diagonal entries are real by definition; fused multiply-adds would leave an imaginary residue.
    rho += x_point == y_point ? Complex(e.weights()[k] * std::norm(px), 0.0) : e.weights()[k] * px * std::conj(py);
  }
  return rho;
}

bool potential_nonnegative(const PotentialField& v, double tolerance) {
  return std::all_of(v.grid.values.begin(), v.grid.values.end(), [&](double x) { return x >= -tolerance; });
}

}  // namespace srsp
