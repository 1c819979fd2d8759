#pragma once

// The truncated mixed state (Psi, lambda) together with the density, the
// Poisson potential, the mean-field nonlinearity and the weighted norms.

#include <cstdint>
#include <memory>
#include <random>
#include <span>
#include <vector>

#include "srsp/spectral.hpp"

namespace srsp {

/// Normalizes positive weights to unit sum. Throws Error(Constraint) when any
/// weight is <= 0 or non-finite.
std::vector<double> normalize_weights(std::vector<double> weights);

/// lambda_k proportional to ratio^k, k = 1..count, normalized.
std::vector<double> geometric_weights(std::size_t count, double ratio);

class Ensemble {
 public:
  Ensemble(std::shared_ptr<const SineBasis> basis, std::vector<double> weights, std::vector<SpectralCoeffs> psi,
           double mass);

  const SineBasis& basis() const { return *basis_; }
  const std::shared_ptr<const SineBasis>& basis_ptr() const { return basis_; }
  const DomainSpec& domain() const { return basis_->domain(); }

  std::size_t size() const { return psi_.size(); }
  double mass() const { return mass_; }
  std::span<const double> weights() const { return weights_; }
  const std::vector<SpectralCoeffs>& wavefunctions() const { return psi_; }
  const SpectralCoeffs& wavefunction(std::size_t k) const { return psi_.at(k); }
  SpectralCoeffs& wavefunction(std::size_t k) { return psi_.at(k); }

  /// Same basis, weights and mass with every coefficient multiplied by s.
  Ensemble scaled(double s) const;
  Ensemble with_wavefunctions(std::vector<SpectralCoeffs> psi) const;

 private:
  std::shared_ptr<const SineBasis> basis_;
  std::vector<double> weights_;
  std::vector<SpectralCoeffs> psi_;
  double mass_;
};

struct PotentialField {
  RealGridField grid;
  /// Coefficients over every grid-resolved mode (SineBasis::full_eigenvalues order).
  std::vector<double> coeffs;
};

/// n(x_j) = sum_k lambda_k |psi_k(x_j)|^2 on the collocation grid.
RealGridField density(const Ensemble& e);

/// -Delta V = n with V = 0 on the boundary, solved over every grid-resolved mode.
PotentialField poisson_solve(const RealGridField& n, const SineBasis& basis);

/// Projection of V psi onto the retained modes.
SpectralCoeffs multiply_and_project(const PotentialField& v, const SpectralCoeffs& psi, const SineBasis& basis);

/// Per k, the coefficients of -i V[Psi] psi_k (the nonlinear part F_V).
std::vector<SpectralCoeffs> nonlinear_rhs(const Ensemble& e);
/// Per k, the coefficients of -i T_m psi_k.
std::vector<SpectralCoeffs> kinetic_rhs(const Ensemble& e);
/// Per k, -i (T_m psi_k + V[Psi] psi_k).
std::vector<SpectralCoeffs> hartree_rhs(const Ensemble& e);

enum class SobolevOrder { Zero, Half, One };
enum class NormKind { Homogeneous, Inhomogeneous };

/// (sum_k lambda_k sum_n w(mu_n) |c_k[n]|^2)^(1/2) with w = mu^s or 1 + mu^s.
double weighted_sobolev_norm(const SineBasis& basis, std::span<const double> weights,
                             std::span<const SpectralCoeffs> psi, SobolevOrder order, NormKind kind);
double sobolev_norm(const Ensemble& e, SobolevOrder order, NormKind kind);

/// (sum_k lambda_k ||T_m psi_k||^2)^(1/2).
double kinetic_operator_norm(const Ensemble& e);

enum class EnergyVariant { Tm, HalfP };

/// 1/2 ||grad V||^2 computed spectrally as 1/2 sum_n mu_n |V_n|^2.
double potential_energy(const PotentialField& v, const SineBasis& basis);
/// 1/2 grid-quadrature of V n; equals potential_energy by parts.
double potential_energy_quadrature(const PotentialField& v, const RealGridField& n, const SineBasis& basis);
double kinetic_energy(const Ensemble& e, EnergyVariant variant);
double energy(const Ensemble& e, EnergyVariant variant);

struct GramMatrix {
  std::size_t size = 0;
  std::vector<Complex> entries;  // row-major
  Complex operator()(std::size_t k, std::size_t l) const { return entries[k * size + l]; }
  /// max_{k,l} |G_kl - delta_kl|
  double defect() const;
};

GramMatrix gram_matrix(const Ensemble& e);

/// rho(x, y) = sum_k lambda_k psi_k(x) conj(psi_k(y)) at two grid points.
Complex density_matrix_element(const Ensemble& e, std::size_t x_point, std::size_t y_point);

inline constexpr double kPositivityTolerance = 1e-10;
/// True when min V >= -tolerance.
bool potential_nonnegative(const PotentialField& v, double tolerance = kPositivityTolerance);

// Initial data -------------------------------------------------------------

/// Seeded standard-normal stream built on mt19937_64 and Box-Muller, so that
/// the sequence does not depend on the standard library's distributions.
class GaussianStream {
 public:
  explicit GaussianStream(std::uint64_t seed);
  double next();
  double uniform();

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// K coefficient vectors with entries drawn from the stream and damped by
/// (1 + mu_n)^(-damping), not orthonormalized.
std::vector<SpectralCoeffs> random_coefficients(const SineBasis& basis, std::size_t count, GaussianStream& rng,
                                                double damping);

/// Modified Gram-Schmidt in mode space. Throws if the family is rank deficient.
void orthonormalize(std::vector<SpectralCoeffs>& psi);

/// Random orthonormal ensemble: draw, damp, orthonormalize.
Ensemble random_ensemble(std::shared_ptr<const SineBasis> basis, std::vector<double> weights, double mass,
                         std::uint64_t seed, double damping);

}  // namespace srsp
