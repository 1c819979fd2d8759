#pragma once

#include <doctest.h>

#include <memory>

#include "srsp/ensemble.hpp"
#include "srsp/error.hpp"
#include "srsp/spectral.hpp"

namespace testing {

inline srsp::DomainSpec box(int d, int n, int q = 2, double length = 1.0) {
  return srsp::DomainSpec{d, std::vector<double>(static_cast<std::size_t>(d), length),
                          std::vector<int>(static_cast<std::size_t>(d), n), q};
}

inline std::shared_ptr<const srsp::SineBasis> basis(const srsp::DomainSpec& dom) {
  return std::make_shared<const srsp::SineBasis>(dom);
}

inline srsp::SpectralCoeffs unit_mode(std::size_t size, std::size_t flat, srsp::Complex value = 1.0) {
  srsp::SpectralCoeffs c(size, 0.0);
  c[flat] = value;
  return c;
}

// Ensemble of unit vectors on the first K flat modes.
inline srsp::Ensemble mode_ensemble(std::shared_ptr<const srsp::SineBasis> b, std::vector<double> weights,
                                    double mass = 1.0) {
  std::vector<srsp::SpectralCoeffs> psi;
  for (std::size_t k = 0; k < weights.size(); ++k) psi.push_back(unit_mode(b->mode_count(), k));
  return srsp::Ensemble(std::move(b), srsp::normalize_weights(std::move(weights)), std::move(psi), mass);
}

inline double distance(const std::vector<srsp::SpectralCoeffs>& a, const std::vector<srsp::SpectralCoeffs>& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k)
    for (std::size_t n = 0; n < a[k].size(); ++n) s += std::norm(a[k][n] - b[k][n]);
  return std::sqrt(s);
}

template <class F>
srsp::ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const srsp::Error& e) {
    return e.code();
  }
  FAIL("expected srsp::Error");
  return srsp::ErrorCode::InvalidArgument;
}

}  // namespace testing
