#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "srsp/diagnostics.hpp"

namespace srsp {

/// Shortest round-trip decimal form, independent of the global locale.
std::string format_double(double x);

inline constexpr const char* kDiagnosticsHeader =
    "t,mass,energy_Tm,energy_half_p,potential_energy,h12,h1,gram_defect,density_min";

void write_diagnostics_header(std::ostream& os);
void write_diagnostics_row(std::ostream& os, const DiagnosticsRecord& r);

struct ConvergenceRow {
  std::string ladder;  // "dt", "modes" or "split_difference"
  std::size_t level = 0;
  double dt = 0.0;
  int modes = 0;
  double error = 0.0;
  double observed_order = 0.0;  // NaN on the first level
  double tail_norm = 0.0;
};

inline constexpr const char* kConvergenceHeader = "ladder,level,dt,modes,error,observed_order,tail_norm";
void write_convergence_csv(std::ostream& os, const std::vector<ConvergenceRow>& rows);

struct PlotSeries {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

/// Standalone SVG with one polyline panel per series.
std::string render_svg(const std::string& title, const std::vector<PlotSeries>& series);
void write_svg(const std::filesystem::path& path, const std::string& title, const std::vector<PlotSeries>& series);

}  // namespace srsp
