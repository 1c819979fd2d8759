#include "srsp/output.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <locale>
#include <sstream>

#include "srsp/error.hpp"

namespace srsp {

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

void write_diagnostics_header(std::ostream& os) { os << kDiagnosticsHeader << '\n'; }

void write_diagnostics_row(std::ostream& os, const DiagnosticsRecord& r) {
  const double fields[] = {r.t,  r.mass, r.energy_Tm, r.energy_half_p, r.potential_energy,
                           r.h12, r.h1,  r.gram_defect, r.density_min};
  bool first = true;
  for (double f : fields) {
    if (!first) os << ',';
    os << format_double(f);
    first = false;
  }
  os << '\n';
}

void write_convergence_csv(std::ostream& os, const std::vector<ConvergenceRow>& rows) {
  os << kConvergenceHeader << '\n';
  for (const auto& r : rows) {
    os << r.ladder << ',' << r.level << ',' << format_double(r.dt) << ',' << r.modes << ',' << format_double(r.error)
       << ',' << format_double(r.observed_order) << ',' << format_double(r.tail_norm) << '\n';
  }
}

namespace {

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string render_svg(const std::string& title, const std::vector<PlotSeries>& series) {
  constexpr double width = 640.0;
  constexpr double panel = 200.0;
  constexpr double margin = 60.0;
  const double height = 40.0 + panel * static_cast<double>(series.size());
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\" "
     << "font-family=\"sans-serif\" font-size=\"11\">\n";
  os << "<text x=\"" << width / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">" << escape(title)
     << "</text>\n";
  for (std::size_t s = 0; s < series.size(); ++s) {
    const auto& ps = series[s];
    const double top = 40.0 + panel * static_cast<double>(s);
    const double plot_h = panel - 40.0;
    const double plot_w = width - 2 * margin;
    os << "<rect x=\"" << margin << "\" y=\"" << top << "\" width=\"" << plot_w << "\" height=\"" << plot_h
       << "\" fill=\"none\" stroke=\"#888\"/>\n";
    os << "<text x=\"" << margin << "\" y=\"" << top - 4 << "\">" << escape(ps.name) << "</text>\n";
    if (ps.x.empty() || ps.x.size() != ps.y.size()) continue;
    const auto [xmin_it, xmax_it] = std::minmax_element(ps.x.begin(), ps.x.end());
    const auto [ymin_it, ymax_it] = std::minmax_element(ps.y.begin(), ps.y.end());
    double xmin = *xmin_it, xmax = *xmax_it, ymin = *ymin_it, ymax = *ymax_it;
    if (xmax == xmin) xmax = xmin + 1.0;
    if (ymax == ymin) {
      const double pad = ymin == 0.0 ? 1.0 : std::abs(ymin) * 1e-12;
      ymin -= pad;
      ymax += pad;
    }
    os << "<text x=\"" << margin - 4 << "\" y=\"" << top + 10 << "\" text-anchor=\"end\">" << format_double(ymax)
       << "</text>\n";
    os << "<text x=\"" << margin - 4 << "\" y=\"" << top + plot_h << "\" text-anchor=\"end\">" << format_double(ymin)
       << "</text>\n";
    os << "<text x=\"" << margin + plot_w << "\" y=\"" << top + plot_h + 14 << "\" text-anchor=\"end\">t = "
       << format_double(xmax) << "</text>\n";
    os << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.2\" points=\"";
    for (std::size_t i = 0; i < ps.x.size(); ++i) {
      if (!std::isfinite(ps.y[i])) continue;
      const double px = margin + plot_w * (ps.x[i] - xmin) / (xmax - xmin);
      const double py = top + plot_h - plot_h * (ps.y[i] - ymin) / (ymax - ymin);
      os << px << ',' << py << ' ';
    }
    os << "\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

void write_svg(const std::filesystem::path& path, const std::string& title, const std::vector<PlotSeries>& series) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, path.string() + ": cannot write plot");
  out << render_svg(title, series);
}

}  // namespace srsp
