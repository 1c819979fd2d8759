#pragma once

// Dirichlet sine eigenbasis of a rectangular box and the transforms between
// mode coefficients and interior collocation grid values.

#include <array>
#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace srsp {

using Complex = std::complex<double>;

/// Coefficients of one wavefunction over the retained eigenmodes, flat
/// row-major mode order (last axis fastest).
using SpectralCoeffs = std::vector<Complex>;

template <class T>
struct GridField {
  std::vector<T> values;
};
using RealGridField = GridField<double>;
using ComplexGridField = GridField<Complex>;

inline constexpr int kMaxDimension = 3;

struct DomainSpec {
  int dimension = 1;
  std::vector<double> lengths{1.0};
  std::vector<int> modes{32};
  int oversampling = 2;

  /// Throws Error(Constraint) naming the offending field.
  void validate() const;

  std::size_t mode_count() const;
  /// M_i = q N_i; the grid has M_i - 1 interior points along axis i.
  int divisions(int axis) const { return oversampling * modes[static_cast<std::size_t>(axis)]; }
  int interior_points(int axis) const { return divisions(axis) - 1; }
  std::size_t grid_count() const;
  /// Smallest Dirichlet eigenvalue sum_i (pi/L_i)^2.
  double poincare_constant() const;
  /// Quadrature weight of one grid point, prod_i L_i / M_i.
  double cell_volume() const;

  bool operator==(const DomainSpec&) const = default;
};

/// 1-based multi-index (n_1, ..., n_d); unused trailing entries are ignored.
struct ModeIndex {
  std::array<int, kMaxDimension> n{1, 1, 1};
};

double laplacian_eigenvalue(const ModeIndex& mode, const DomainSpec& dom);

/// sqrt(mu + m^2) - m, evaluated without cancellation for small mu.
double kinetic_symbol(double mu, double m);

std::size_t flat_mode_index(const ModeIndex& mode, const DomainSpec& dom);
ModeIndex mode_from_flat(std::size_t flat, const DomainSpec& dom);

class SineBasis {
 public:
  explicit SineBasis(DomainSpec dom);

  const DomainSpec& domain() const { return dom_; }
  int dimension() const { return dom_.dimension; }
  std::size_t mode_count() const { return eigen_.size(); }
  std::size_t grid_count() const { return full_eigen_.size(); }

  /// Laplacian eigenvalues of the retained modes, flat order.
  std::span<const double> eigenvalues() const { return eigen_; }
  /// Eigenvalues of every mode the grid resolves (indices 1..M_i-1), used
  /// for grid-resolution fields such as the potential.
  std::span<const double> full_eigenvalues() const { return full_eigen_; }

  ComplexGridField synthesize(std::span<const Complex> coeffs) const;
  SpectralCoeffs analyze(std::span<const Complex> grid) const;

  std::vector<double> analyze_full(std::span<const double> grid) const;
  RealGridField synthesize_full(std::span<const double> coeffs) const;

  /// Grid-quadrature integral of point values.
  double integrate(std::span<const double> grid) const;
  double cell_volume() const { return cell_volume_; }

  std::array<double, kMaxDimension> grid_point(std::size_t flat) const;
  /// e_n(x) at an arbitrary point of the box.
  double eigenfunction(std::size_t mode, const std::array<double, kMaxDimension>& x) const;

  /// Test hook: rescales one entry of the retained eigenvalue table. Used by
  /// negative controls of the verification probes.
  void tamper_eigenvalue(std::size_t mode, double factor);

 private:
  struct AxisMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> a;
  };

  DomainSpec dom_;
  std::vector<double> eigen_;
  std::vector<double> full_eigen_;
  std::vector<AxisMatrix> synth_;
  std::vector<AxisMatrix> analysis_;
  std::vector<AxisMatrix> synth_full_;
  std::vector<AxisMatrix> analysis_full_;
  double cell_volume_ = 0.0;

  template <class T>
  static std::vector<T> apply_axes(std::span<const T> in, const std::vector<AxisMatrix>& mats);
};

/// result[n] = g(mu[n]) c[n]. Throws if g is non-finite on any retained mu.
SpectralCoeffs apply_multiplier(std::span<const Complex> c, std::span<const double> mu,
                                const std::function<double(double)>& g);

/// sum_n conj(a[n]) b[n].
Complex mode_inner_product(std::span<const Complex> a, std::span<const Complex> b);

}  // namespace srsp
