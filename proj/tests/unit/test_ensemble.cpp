#include <cmath>
#include <numbers>

#include "../oracles.hpp"
#include "helpers.hpp"
#include "srsp/ensemble.hpp"

using namespace srsp;
using testing::basis;
using testing::box;
constexpr double pi = std::numbers::pi;

namespace {

Ensemble random_state(int d, int n, std::size_t k, std::uint64_t seed, double damping = 1.0, double mass = 1.0) {
  return random_ensemble(basis(box(d, n)), geometric_weights(k, 0.5), mass, seed, damping);
}

double field_norm(const std::vector<SpectralCoeffs>& psi, std::span<const double> weights) {
  double s = 0.0;
  for (std::size_t k = 0; k < psi.size(); ++k) s += weights[k] * std::pow(oracle::l2(psi[k]), 2);
  return std::sqrt(s);
}

}  // namespace

TEST_CASE("weights") {
  auto w = normalize_weights({2, 1, 1});
  CHECK(w == std::vector<double>{0.5, 0.25, 0.25});
  try {
    normalize_weights({1, 0, 1});
    FAIL("zero weight accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Constraint);
    CHECK(std::string(e.what()).find("positivity") != std::string::npos);
  }
  CHECK(testing::code_of([] { normalize_weights({1, -1}); }) == ErrorCode::Constraint);
  CHECK(testing::code_of([] { normalize_weights({}); }) == ErrorCode::Constraint);
  auto g = geometric_weights(3, 0.5);
  CHECK(g[0] == doctest::Approx(4.0 / 7));
  CHECK(g[1] == doctest::Approx(2.0 / 7));
  CHECK(g[2] == doctest::Approx(1.0 / 7));
}

TEST_CASE("ensemble construction is validated") {
  auto b = basis(box(1, 4));
  CHECK(testing::code_of([&] { Ensemble(b, {1.0}, {SpectralCoeffs(3)}, 1.0); }) == ErrorCode::DimensionMismatch);
  CHECK(testing::code_of([&] { Ensemble(b, {0.5, 0.5}, {SpectralCoeffs(4)}, 1.0); }) == ErrorCode::DimensionMismatch);
  CHECK(testing::code_of([&] { Ensemble(nullptr, {1.0}, {SpectralCoeffs(4)}, 1.0); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("random initial data is orthonormal and reproducible") {
  auto a = random_state(1, 32, 4, 7);
  auto b = random_state(1, 32, 4, 7);
  CHECK(a.wavefunctions() == b.wavefunctions());
  CHECK(gram_matrix(a).defect() <= 1e-12);
  CHECK(random_state(1, 32, 4, 8).wavefunctions() != a.wavefunctions());
  CHECK(testing::code_of([] { random_state(1, 2, 3, 1); }) == ErrorCode::Constraint);
}

TEST_CASE("density") {
  SUBCASE("single mode") {
    auto b = basis(box(1, 16));
    auto e = testing::mode_ensemble(b, {1.0});
    auto n = density(e);
    for (std::size_t j = 0; j < n.values.size(); ++j)
      CHECK(std::abs(n.values[j] - 2 * std::pow(std::sin(pi * b->grid_point(j)[0]), 2)) <= 1e-14);
    CHECK(b->integrate(n.values) == doctest::Approx(1.0).epsilon(1e-14));
  }
  SUBCASE("two modes with equal weights") {
    auto b = basis(box(1, 16));
    auto n = density(testing::mode_ensemble(b, {1.0, 1.0}));
    CHECK(b->integrate(n.values) == doctest::Approx(1.0).epsilon(1e-14));
  }
  SUBCASE("random ensemble integrates to its weighted Parseval sum") {
    for (int d : {1, 2, 3}) {
      auto b = basis(box(d, d == 1 ? 32 : 6));
      std::vector<SpectralCoeffs> psi;
      for (std::uint64_t k = 0; k < 4; ++k) psi.push_back(oracle::random_complex(b->mode_count(), 40 + k));
      Ensemble e(b, geometric_weights(4, 0.7), psi, 1.0);
      const double expected = std::pow(field_norm(psi, e.weights()), 2);
      auto n = density(e);
      CHECK(std::abs(b->integrate(n.values) - expected) <= 1e-10 * expected);
      for (double v : n.values) CHECK(v >= 0.0);
    }
  }
}

TEST_CASE("poisson_solve") {
  SUBCASE("single sine mode") {
    auto b = basis(box(1, 32));
    RealGridField n{std::vector<double>(b->grid_count())};
    for (std::size_t j = 0; j < n.values.size(); ++j) n.values[j] = std::sqrt(2.0) * std::sin(pi * b->grid_point(j)[0]);
    auto v = poisson_solve(n, *b);
    for (std::size_t j = 0; j < n.values.size(); ++j) CHECK(std::abs(v.grid.values[j] - n.values[j] / (pi * pi)) <= 1e-15);
    CHECK(std::abs(v.coeffs[0] - 1.0 / (pi * pi)) <= 1e-15);
  }
  SUBCASE("zero density") {
    auto b = basis(box(2, 4));
    auto v = poisson_solve(RealGridField{std::vector<double>(b->grid_count(), 0.0)}, *b);
    for (double x : v.grid.values) CHECK(x == 0.0);
  }
  SUBCASE("residual against the retained-mode projection") {
    auto b = basis(DomainSpec{2, {1.0, 2.0}, {8, 6}, 2});
    auto e = random_ensemble(b, geometric_weights(3, 0.5), 1.0, 3, 1.0);
    auto n = density(e);
    auto v = poisson_solve(n, *b);
    auto n_hat = b->analyze_full(n.values);
    double worst = 0.0;
    for (std::size_t i = 0; i < n_hat.size(); ++i)
      worst = std::max(worst, std::abs(b->full_eigenvalues()[i] * v.coeffs[i] - n_hat[i]));
    CHECK(worst <= 1e-10);
    CHECK(potential_nonnegative(v));
  }
  SUBCASE("dense finite differences converge at second order") {
    std::vector<double> h, err;
    for (int m : {64, 128, 256}) {
      auto b = basis(box(1, m / 2));
      std::vector<double> n(b->grid_count());
      for (std::size_t j = 0; j < n.size(); ++j) {
        const double x = b->grid_point(j)[0];
        n[j] = std::exp(std::sin(3 * x)) * x * (1 - x) + 2 * std::pow(std::sin(pi * x), 2);
      }
      auto v = poisson_solve(RealGridField{n}, *b);
      auto fd = oracle::dense_fd_poisson(n, 1.0);
      double num = 0, den = 0;
      for (std::size_t j = 0; j < n.size(); ++j) {
        num += std::pow(fd[j] - v.grid.values[j], 2);
        den += std::pow(v.grid.values[j], 2);
      }
      h.push_back(1.0 / m);
      err.push_back(std::sqrt(num / den));
    }
    CHECK(oracle::loglog_slope(h, err) >= 1.9);
  }
  SUBCASE("potential scales quadratically") {
    auto e = random_state(1, 32, 3, 9);
    auto v1 = poisson_solve(density(e), e.basis());
    auto v3 = poisson_solve(density(e.scaled(3.0)), e.basis());
    for (std::size_t j = 0; j < v1.grid.values.size(); ++j)
      CHECK(std::abs(v3.grid.values[j] - 9 * v1.grid.values[j]) <= 1e-13 * std::abs(9 * v1.grid.values[j]) + 1e-16);
  }
}

TEST_CASE("hartree_rhs") {
  auto b = basis(box(1, 16));
  SUBCASE("zero ensemble") {
    Ensemble e(b, {1.0}, {SpectralCoeffs(16, 0.0)}, 1.0);
    const auto rhs = hartree_rhs(e);
    for (auto z : rhs[0]) CHECK(z == Complex(0.0));
  }
  SUBCASE("kinetic part of a single mode") {
    auto e = testing::mode_ensemble(b, {1.0});
    auto kin = kinetic_rhs(e);
    CHECK(std::abs(kin[0][0] - Complex(0, -(std::sqrt(pi * pi + 1) - 1))) <= 1e-14);
  }
  SUBCASE("potential part against grid quadrature by direct summation") {
    for (auto e : {testing::mode_ensemble(b, {1.0}), random_state(1, 16, 3, 4)}) {
      auto v = poisson_solve(density(e), *b);
      auto pot = nonlinear_rhs(e);
      const auto& dom = b->domain();
      auto grid = oracle::interior_grid(dom.lengths, {dom.divisions(0)});
      for (std::size_t k = 0; k < e.size(); ++k) {
        auto psi = oracle::direct_synthesis(e.wavefunction(k), dom.lengths, dom.modes, grid);
        for (std::size_t j = 0; j < psi.size(); ++j) psi[j] *= Complex(0, -1) * v.grid.values[j];
        auto ref = oracle::grid_projection(psi, dom.lengths, dom.modes, grid);
        CHECK(oracle::max_abs_diff(pot[k], ref) <= 1e-11);
      }
    }
  }
  SUBCASE("full rhs is kinetic plus potential") {
    auto e = random_state(1, 16, 2, 6);
    auto full = hartree_rhs(e), kin = kinetic_rhs(e), pot = nonlinear_rhs(e);
    for (std::size_t k = 0; k < 2; ++k)
      for (std::size_t n = 0; n < 16; ++n) CHECK(std::abs(full[k][n] - kin[k][n] - pot[k][n]) <= 1e-15);
  }
  SUBCASE("homogeneity") {
    auto e = random_state(1, 32, 4, 12);
    auto kin1 = kinetic_rhs(e), pot1 = nonlinear_rhs(e);
    for (double s : {2.0, 10.0}) {
      auto es = e.scaled(s);
      auto kin = kinetic_rhs(es), pot = nonlinear_rhs(es);
      for (std::size_t k = 0; k < e.size(); ++k) {
        for (auto& z : kin1[k]) z *= s;
        for (auto& z : pot1[k]) z *= s * s * s;
      }
      CHECK(testing::distance(kin, kin1) <= 1e-12 * oracle::l2(kin[0]));
      double scale = 0;
      for (const auto& p : pot) scale = std::max(scale, oracle::l2(p));
      CHECK(testing::distance(pot, pot1) <= 1e-12 * scale);
      kin1 = kinetic_rhs(e);
      pot1 = nonlinear_rhs(e);
    }
  }
}

TEST_CASE("sobolev norms") {
  auto b = basis(box(1, 16));
  auto single = testing::mode_ensemble(b, {1.0});
  CHECK(sobolev_norm(single, SobolevOrder::One, NormKind::Homogeneous) == doctest::Approx(pi).epsilon(1e-15));
  CHECK(sobolev_norm(single, SobolevOrder::Half, NormKind::Inhomogeneous) /
            sobolev_norm(single, SobolevOrder::Half, NormKind::Homogeneous) ==
        doctest::Approx(std::sqrt(1 + 1 / pi)).epsilon(1e-14));
  auto e = random_state(1, 16, 4, 2);
  CHECK(sobolev_norm(e, SobolevOrder::Zero, NormKind::Homogeneous) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(sobolev_norm(e, SobolevOrder::Zero, NormKind::Homogeneous) ==
        sobolev_norm(e, SobolevOrder::Zero, NormKind::Inhomogeneous));

  // Operator-norm identity: ||T_m Psi||^2 <= ||Psi||^2_{dot H^1} + 2 m^2 ||Psi||^2.
  for (double m : {0.0, 0.1, 1.0, 10.0}) {
    auto em = random_state(2, 6, 3, 13, 0.5, m);
    const double lhs = std::pow(kinetic_operator_norm(em), 2);
    const double rhs = std::pow(sobolev_norm(em, SobolevOrder::One, NormKind::Homogeneous), 2) +
                       2 * m * m * std::pow(sobolev_norm(em, SobolevOrder::Zero, NormKind::Homogeneous), 2);
    CHECK(lhs <= rhs);
    if (m == 0.0) CHECK(lhs == doctest::Approx(rhs).epsilon(1e-14));
  }
}

TEST_CASE("energy") {
  auto b = basis(box(1, 32));
  SUBCASE("zero ensemble") {
    Ensemble e(b, {1.0}, {SpectralCoeffs(32, 0.0)}, 1.0);
    CHECK(energy(e, EnergyVariant::Tm) == 0.0);
    CHECK(energy(e, EnergyVariant::HalfP) == 0.0);
  }
  SUBCASE("single mode kinetic part") {
    auto e = testing::mode_ensemble(b, {1.0});
    CHECK(kinetic_energy(e, EnergyVariant::Tm) == doctest::Approx(std::sqrt(pi * pi + 1) - 1).epsilon(1e-15));
    CHECK(kinetic_energy(e, EnergyVariant::HalfP) == doctest::Approx(pi).epsilon(1e-15));
  }
  SUBCASE("field energy by parts") {
    for (auto e : {testing::mode_ensemble(b, {1.0}), random_state(1, 32, 4, 3), random_state(3, 6, 2, 3)}) {
      auto n = density(e);
      auto v = poisson_solve(n, e.basis());
      const double spectral = potential_energy(v, e.basis());
      double quad = 0;
      for (std::size_t j = 0; j < n.values.size(); ++j) quad += v.grid.values[j] * n.values[j];
      quad *= 0.5 * e.basis().cell_volume();
      CHECK(std::abs(spectral - quad) <= 1e-10 * spectral);
      CHECK(potential_energy_quadrature(v, n, e.basis()) == doctest::Approx(quad).epsilon(1e-13));
      CHECK(energy(e, EnergyVariant::Tm) ==
            doctest::Approx(kinetic_energy(e, EnergyVariant::Tm) + spectral).epsilon(1e-15));
    }
  }
}

TEST_CASE("gram matrix and density matrix") {
  auto e = random_state(2, 6, 3, 17);
  auto g = gram_matrix(e);
  CHECK(g.defect() <= 1e-12);
  for (std::size_t k = 0; k < 3; ++k)
    for (std::size_t l = 0; l < 3; ++l) CHECK(g(k, l) == std::conj(g(l, k)));

  auto n = density(e);
  double trace = 0.0;
  for (std::size_t j = 0; j < n.values.size(); ++j) {
    const Complex diag = density_matrix_element(e, j, j);
    CHECK(diag.imag() == 0.0);
    CHECK(std::abs(diag.real() - n.values[j]) <= 1e-14 * std::max(1.0, n.values[j]));
    trace += diag.real();
  }
  CHECK(trace * e.basis().cell_volume() == doctest::Approx(1.0).epsilon(1e-12));

  std::mt19937_64 rng(5);
  std::uniform_int_distribution<std::size_t> pick(0, n.values.size() - 1);
  for (int i = 0; i < 50; ++i) {
    const auto x = pick(rng), y = pick(rng);
    CHECK(std::abs(density_matrix_element(e, x, y) - std::conj(density_matrix_element(e, y, x))) <= 1e-13);
  }
  CHECK(testing::code_of([&] { density_matrix_element(e, n.values.size(), 0); }) == ErrorCode::OutOfRange);
}

TEST_CASE("orthonormalize rejects dependent families") {
  std::vector<SpectralCoeffs> psi{testing::unit_mode(4, 0), testing::unit_mode(4, 0, 2.0)};
  CHECK(testing::code_of([&] { orthonormalize(psi); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("gaussian stream") {
  GaussianStream a(3), b(3);
  double mean = 0, var = 0;
  const int count = 20000;
  for (int i = 0; i < count; ++i) {
    const double x = a.next();
    CHECK(x == b.next());
    mean += x;
    var += x * x;
  }
  mean /= count;
  var = var / count - mean * mean;
  CHECK(std::abs(mean) < 0.03);
  CHECK(std::abs(var - 1) < 0.05);
  for (int i = 0; i < 1000; ++i) {
    const double u = a.uniform();
    CHECK((u > 0.0 && u <= 1.0));
  }
}
