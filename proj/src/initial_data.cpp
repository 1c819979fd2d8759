#include <cmath>
#include <numbers>

#include "srsp/ensemble.hpp"
#include "srsp/error.hpp"

namespace srsp {

GaussianStream::GaussianStream(std::uint64_t seed) : engine_(seed) {}

double GaussianStream::uniform() {
  // 53 random bits in (0, 1].
  return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
}

double GaussianStream::next() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

std::vector<SpectralCoeffs> random_coefficients(const SineBasis& basis, std::size_t count, GaussianStream& rng,
                                                double damping) {
  const auto mu = basis.eigenvalues();
  std::vector<SpectralCoeffs> psi(count, SpectralCoeffs(mu.size()));
  for (auto& c : psi) {
    for (std::size_t n = 0; n < mu.size(); ++n) {
      const double re = rng.next();
      const double im = rng.next();
      c[n] = Complex(re, im) * std::pow(1.0 + mu[n], -damping);
    }
  }
  return psi;
}

void orthonormalize(std::vector<SpectralCoeffs>& psi) {
  for (std::size_t k = 0; k < psi.size(); ++k) {
    for (std::size_t l = 0; l < k; ++l) {
      const Complex proj = mode_inner_product(psi[l], psi[k]);
      for (std::size_t n = 0; n < psi[k].size(); ++n) psi[k][n] -= proj * psi[l][n];
    }
    const double norm = std::sqrt(mode_inner_product(psi[k], psi[k]).real());
    if (!(norm > 1e-300)) throw Error(ErrorCode::InvalidArgument, "orthonormalize: linearly dependent family");
    for (auto& v : psi[k]) v /= norm;
  }
}

Ensemble random_ensemble(std::shared_ptr<const SineBasis> basis, std::vector<double> weights, double mass,
                         std::uint64_t seed, double damping) {
  if (weights.size() > basis->mode_count())
    throw Error(ErrorCode::Constraint, "physics.wavefunctions: K exceeds the number of retained modes");
  GaussianStream rng(seed);
  auto psi = random_coefficients(*basis, weights.size(), rng, damping);
  orthonormalize(psi);
  return Ensemble(std::move(basis), std::move(weights), std::move(psi), mass);
}

}  // namespace srsp
