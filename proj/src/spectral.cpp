#include "srsp/spectral.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "srsp/error.hpp"

namespace srsp {

const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "SRSP_E_INVALID_ARGUMENT";
    case ErrorCode::DimensionMismatch: return "SRSP_E_DIMENSION";
    case ErrorCode::OutOfRange: return "SRSP_E_RANGE";
    case ErrorCode::Parse: return "SRSP_E_PARSE";
    case ErrorCode::Constraint: return "SRSP_E_CONSTRAINT";
    case ErrorCode::Io: return "SRSP_E_IO";
    case ErrorCode::Format: return "SRSP_E_FORMAT";
    case ErrorCode::BlowUp: return "SRSP_E_BLOWUP";
    case ErrorCode::VerificationFailed: return "SRSP_E_VERIFICATION";
  }
  return "SRSP_E_UNKNOWN";
}

namespace {

constexpr double kPi = std::numbers::pi;

[[noreturn]] void constraint(const std::string& field, const std::string& rule) {
  throw Error(ErrorCode::Constraint, field + ": " + rule);
}

// sin(pi * n * j / M) with the argument reduced exactly in integers.
double sine_node(long n, long j, long divisions) {
  const long period = 2 * divisions;
  const long r = (n * j) % period;
  return std::sin(kPi * static_cast<double>(r) / static_cast<double>(divisions));
}

}  // namespace

void DomainSpec::validate() const {
  if (dimension < 1 || dimension > kMaxDimension) constraint("domain.dimension", "must be 1, 2 or 3");
  const auto d = static_cast<std::size_t>(dimension);
  if (lengths.size() != d) constraint("domain.lengths", "expected one entry per dimension");
  if (modes.size() != d) constraint("domain.modes", "expected one entry per dimension");
  for (std::size_t i = 0; i < d; ++i) {
    if (!(lengths[i] > 0.0) || !std::isfinite(lengths[i])) constraint("domain.lengths", "every L_i must be > 0");
    if (modes[i] < 1) constraint("domain.modes", "every N_i must be >= 1");
  }
  if (oversampling < 2) constraint("domain.oversampling", "q must be >= 2");
}

std::size_t DomainSpec::mode_count() const {
  std::size_t p = 1;
  for (int i = 0; i < dimension; ++i) p *= static_cast<std::size_t>(modes[static_cast<std::size_t>(i)]);
  return p;
}

std::size_t DomainSpec::grid_count() const {
  std::size_t g = 1;
  for (int i = 0; i < dimension; ++i) g *= static_cast<std::size_t>(interior_points(i));
  return g;
}

double DomainSpec::poincare_constant() const {
  double c = 0.0;
  for (int i = 0; i < dimension; ++i) {
    const double k = kPi / lengths[static_cast<std::size_t>(i)];
    c += k * k;
  }
  return c;
}

double DomainSpec::cell_volume() const {
  double w = 1.0;
  for (int i = 0; i < dimension; ++i) w *= lengths[static_cast<std::size_t>(i)] / divisions(i);
  return w;
}

double laplacian_eigenvalue(const ModeIndex& mode, const DomainSpec& dom) {
  double mu = 0.0;
  for (int i = 0; i < dom.dimension; ++i) {
    const auto a = static_cast<std::size_t>(i);
    if (mode.n[a] < 1 || mode.n[a] > dom.modes[a]) {
      std::ostringstream os;
      os << "mode index n_" << (i + 1) << " = " << mode.n[a] << " outside [1, " << dom.modes[a] << "]";
      throw Error(ErrorCode::OutOfRange, os.str());
    }
    const double k = mode.n[a] * kPi / dom.lengths[a];
    mu += k * k;
  }
  return mu;
}

double kinetic_symbol(double mu, double m) {
  if (!(mu >= 0.0) || !(m >= 0.0)) throw Error(ErrorCode::InvalidArgument, "kinetic_symbol: mu and m must be >= 0");
  if (mu == 0.0) return 0.0;
  return mu / (std::sqrt(mu + m * m) + m);
}

std::size_t flat_mode_index(const ModeIndex& mode, const DomainSpec& dom) {
  std::size_t flat = 0;
  for (int i = 0; i < dom.dimension; ++i) {
    const auto a = static_cast<std::size_t>(i);
    if (mode.n[a] < 1 || mode.n[a] > dom.modes[a]) throw Error(ErrorCode::OutOfRange, "mode index outside cutoffs");
    flat = flat * static_cast<std::size_t>(dom.modes[a]) + static_cast<std::size_t>(mode.n[a] - 1);
  }
  return flat;
}

ModeIndex mode_from_flat(std::size_t flat, const DomainSpec& dom) {
  if (flat >= dom.mode_count()) throw Error(ErrorCode::OutOfRange, "flat mode index beyond mode count");
  ModeIndex mode;
  for (int i = dom.dimension - 1; i >= 0; --i) {
    const auto a = static_cast<std::size_t>(i);
    const auto n = static_cast<std::size_t>(dom.modes[a]);
    mode.n[a] = static_cast<int>(flat % n) + 1;
    flat /= n;
  }
  return mode;
}

SineBasis::SineBasis(DomainSpec dom) : dom_(std::move(dom)) {
  dom_.validate();
  const auto d = static_cast<std::size_t>(dom_.dimension);
  cell_volume_ = dom_.cell_volume();

  auto make_axis = [](int points, int modes, long divisions, double length, bool analysis) {
    AxisMatrix m;
    const double norm = std::sqrt(2.0 / length);
    const double h = length / static_cast<double>(divisions);
    m.rows = analysis ? modes : points;
    m.cols = analysis ? points : modes;
    m.a.resize(static_cast<std::size_t>(m.rows) * static_cast<std::size_t>(m.cols));
    for (int j = 0; j < points; ++j) {
      for (int n = 0; n < modes; ++n) {
        const double s = norm * sine_node(n + 1, j + 1, divisions);
        if (analysis)
          m.a[static_cast<std::size_t>(n) * static_cast<std::size_t>(points) + static_cast<std::size_t>(j)] = h * s;
        else
          m.a[static_cast<std::size_t>(j) * static_cast<std::size_t>(modes) + static_cast<std::size_t>(n)] = s;
      }
    }
    return m;
  };

  for (std::size_t a = 0; a < d; ++a) {
    const int axis = static_cast<int>(a);
    const int points = dom_.interior_points(axis);
    const long div = dom_.divisions(axis);
    synth_.push_back(make_axis(points, dom_.modes[a], div, dom_.lengths[a], false));
    analysis_.push_back(make_axis(points, dom_.modes[a], div, dom_.lengths[a], true));
    synth_full_.push_back(make_axis(points, points, div, dom_.lengths[a], false));
    analysis_full_.push_back(make_axis(points, points, div, dom_.lengths[a], true));
  }

  auto table = [&](auto count_along) {
    std::size_t total = 1;
    for (std::size_t a = 0; a < d; ++a) total *= static_cast<std::size_t>(count_along(a));
    std::vector<double> mu(total, 0.0);
    for (std::size_t flat = 0; flat < total; ++flat) {
      std::size_t rest = flat;
      double sum = 0.0;
      for (std::size_t a = d; a-- > 0;) {
        const auto n = static_cast<std::size_t>(count_along(a));
        const double k = static_cast<double>(rest % n + 1) * kPi / dom_.lengths[a];
        sum += k * k;
        rest /= n;
      }
      mu[flat] = sum;
    }
    return mu;
  };
  eigen_ = table([&](std::size_t a) { return dom_.modes[a]; });
  full_eigen_ = table([&](std::size_t a) { return dom_.interior_points(static_cast<int>(a)); });
}

template <class T>
std::vector<T> SineBasis::apply_axes(std::span<const T> in, const std::vector<AxisMatrix>& mats) {
  std::vector<std::size_t> shape;
  for (const auto& m : mats) shape.push_back(static_cast<std::size_t>(m.cols));
  std::vector<T> cur(in.begin(), in.end());
  std::vector<T> next;
  for (std::size_t axis = 0; axis < mats.size(); ++axis) {
    const auto& m = mats[axis];
    std::size_t outer = 1;
    std::size_t inner = 1;
    for (std::size_t a = 0; a < axis; ++a) outer *= shape[a];
    for (std::size_t a = axis + 1; a < shape.size(); ++a) inner *= shape[a];
    const auto rows = static_cast<std::size_t>(m.rows);
    const auto cols = static_cast<std::size_t>(m.cols);
    next.assign(outer * rows * inner, T{});
    for (std::size_t o = 0; o < outer; ++o) {
      const T* src = cur.data() + o * cols * inner;
      T* dst = next.data() + o * rows * inner;
      for (std::size_t r = 0; r < rows; ++r) {
        T* out = dst + r * inner;
        const double* row = m.a.data() + r * cols;
        for (std::size_t c = 0; c < cols; ++c) {
          const double w = row[c];
          const T* x = src + c * inner;
          for (std::size_t i = 0; i < inner; ++i) out[i] += w * x[i];
        }
      }
    }
    shape[axis] = rows;
    cur.swap(next);
  }
  return cur;
}

ComplexGridField SineBasis::synthesize(std::span<const Complex> coeffs) const {
  if (coeffs.size() != mode_count()) throw Error(ErrorCode::DimensionMismatch, "synthesize: coefficient length != mode count");
  return {apply_axes<Complex>(coeffs, synth_)};
}

SpectralCoeffs SineBasis::analyze(std::span<const Complex> grid) const {
  if (grid.size() != grid_count()) throw Error(ErrorCode::DimensionMismatch, "analyze: field length != grid count");
  return apply_axes<Complex>(grid, analysis_);
}

std::vector<double> SineBasis::analyze_full(std::span<const double> grid) const {
  if (grid.size() != grid_count()) throw Error(ErrorCode::DimensionMismatch, "analyze_full: field length != grid count");
  return apply_axes<double>(grid, analysis_full_);
}

RealGridField SineBasis::synthesize_full(std::span<const double> coeffs) const {
  if (coeffs.size() != grid_count()) throw Error(ErrorCode::DimensionMismatch, "synthesize_full: coefficient length != grid count");
  return {apply_axes<double>(coeffs, synth_full_)};
}

double SineBasis::integrate(std::span<const double> grid) const {
  if (grid.size() != grid_count()) throw Error(ErrorCode::DimensionMismatch, "integrate: field length != grid count");
  double sum = 0.0;
  for (double v : grid) sum += v;
  return sum * cell_volume_;
}

std::array<double, kMaxDimension> SineBasis::grid_point(std::size_t flat) const {
  if (flat >= grid_count()) throw Error(ErrorCode::OutOfRange, "grid point index beyond grid count");
  std::array<double, kMaxDimension> x{0.0, 0.0, 0.0};
  for (int i = dom_.dimension - 1; i >= 0; --i) {
    const auto a = static_cast<std::size_t>(i);
    const auto n = static_cast<std::size_t>(dom_.interior_points(i));
    const auto j = flat % n + 1;
    flat /= n;
    x[a] = static_cast<double>(j) * dom_.lengths[a] / dom_.divisions(i);
  }
  return x;
}

double SineBasis::eigenfunction(std::size_t mode, const std::array<double, kMaxDimension>& x) const {
  const ModeIndex idx = mode_from_flat(mode, dom_);
  double v = 1.0;
  for (int i = 0; i < dom_.dimension; ++i) {
    const auto a = static_cast<std::size_t>(i);
    v *= std::sqrt(2.0 / dom_.lengths[a]) * std::sin(idx.n[a] * kPi * x[a] / dom_.lengths[a]);
  }
  return v;
}

void SineBasis::tamper_eigenvalue(std::size_t mode, double factor) {
  if (mode >= eigen_.size()) throw Error(ErrorCode::OutOfRange, "tamper_eigenvalue: mode beyond table");
  eigen_[mode] *= factor;
}

SpectralCoeffs apply_multiplier(std::span<const Complex> c, std::span<const double> mu,
                                const std::function<double(double)>& g) {
  if (c.size() != mu.size()) throw Error(ErrorCode::DimensionMismatch, "apply_multiplier: coefficient/eigenvalue length mismatch");
  SpectralCoeffs out(c.size());
  for (std::size_t n = 0; n < c.size(); ++n) {
    const double factor = g(mu[n]);
    if (!std::isfinite(factor)) {
      std::ostringstream os;
      os << "apply_multiplier: symbol non-finite at mu = " << mu[n];
      throw Error(ErrorCode::InvalidArgument, os.str());
    }
    out[n] = factor * c[n];
  }
  return out;
}

Complex mode_inner_product(std::span<const Complex> a, std::span<const Complex> b) {
  if (a.size() != b.size()) throw Error(ErrorCode::DimensionMismatch, "mode_inner_product: length mismatch");
  Complex sum{0.0, 0.0};
  for (std::size_t n = 0; n < a.size(); ++n) sum += std::conj(a[n]) * b[n];
  return sum;
}

}  // namespace srsp
