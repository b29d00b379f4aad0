#include "nhse/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace nhse {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void CsvTable::add_row(std::vector<std::string> row) {
  if (row.size() != header.size()) throw Error("io.csv", "row width differs from header");
  rows.push_back(std::move(row));
}

std::string CsvTable::str() const {
  std::ostringstream out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
    out << '\n';
  };
  line(header);
  for (const auto& r : rows) line(r);
  return out.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("io.write", "cannot open " + path);
  f << text;
  if (!f) throw Error("io.write", "failed writing " + path);
}

CsvTable matrix_table(const ComplexMatrix& m) {
  CsvTable t{{"row", "col", "re", "im"}, {}};
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (m(i, j) == Complex{0.0, 0.0}) continue;
      t.add_row({std::to_string(i), std::to_string(j), format_double(m(i, j).real()),
                 format_double(m(i, j).imag())});
    }
  }
  return t;
}

CsvTable spectrum_table(const SpectralSet& s) {
  CsvTable t{{"index", "re_eig", "im_eig", "ipr"}, {}};
  for (std::size_t i = 0; i < s.size(); ++i) {
    t.add_row({std::to_string(i), format_double(s.values[i].real()),
               format_double(s.values[i].imag()), format_double(s.ipr[i])});
  }
  return t;
}

CsvTable density_table(const LatticeGeometry& g, const std::vector<double>& rho) {
  if (static_cast<int>(rho.size()) != g.num_sites()) {
    throw ValidationError("io.density_table", "profile size differs from the site count");
  }
  CsvTable t{{"x", "y", "rho"}, {}};
  for (int i = 0; i < g.num_sites(); ++i) {
    t.add_row({std::to_string(g.site(i).x), std::to_string(g.site(i).y),
               format_double(rho[static_cast<std::size_t>(i)])});
  }
  return t;
}

CsvTable gbz_table(const std::vector<GbzSample>& samples) {
  CsvTable t{{"re_E", "im_E", "beta1", "beta2", "beta3", "beta4", "gbz_radius", "matched"}, {}};
  for (const GbzSample& s : samples) {
    std::vector<std::string> row{format_double(s.energy.real()), format_double(s.energy.imag())};
    for (std::size_t i = 0; i < 4; ++i) {
      if (i < s.roots.size()) {
        row.push_back(format_double(std::abs(s.roots[i])));
      } else if (i < s.roots.size() + static_cast<std::size_t>(s.infinite_roots)) {
        row.push_back("inf");
      } else {
        row.push_back("");
      }
    }
    row.push_back(format_double(s.gbz_radius));
    row.push_back(s.matched ? "1" : "0");
    t.add_row(std::move(row));
  }
  return t;
}

namespace {

// Dark-to-light ramp (blue to yellow) used for heatmap weights.
constexpr const char* kRamp[8] = {"#30123b", "#4145ab", "#4675ed", "#39a2fc",
                                  "#1bcfd4", "#61fc6c", "#c5f133", "#fbb938"};
constexpr const char* kSeries[4] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};

struct Range {
  double lo;
  double hi;
};

Range fit(const std::vector<PlotPoint>& pts, bool use_x, double pad) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& p : pts) {
    const double v = use_x ? p.x : p.y;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (hi - lo < 1e-12 * (1.0 + std::abs(hi))) {
    lo -= 0.5;
    hi += 0.5;
  }
  return {lo - pad, hi + pad};
}

}  // namespace

std::string render_svg(const std::vector<PlotPoint>& points, PlotKind kind,
                       const std::string& title) {
  if (points.empty()) throw ValidationError("io.emit_svg", "no points to plot");
  const double w = 480.0;
  const double h = 480.0;
  const double margin = 56.0;
  const double pad = kind == PlotKind::heatmap ? 0.5 : 0.0;
  const Range rx = fit(points, true, pad);
  const Range ry = fit(points, false, pad);
  auto sx = [&](double x) { return margin + (x - rx.lo) / (rx.hi - rx.lo) * (w - 2 * margin); };
  auto sy = [&](double y) { return h - margin - (y - ry.lo) / (ry.hi - ry.lo) * (h - 2 * margin); };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
      << "\" viewBox=\"0 0 " << w << ' ' << h << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!title.empty()) {
    out << "<text x=\"" << w / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">"
        << title << "</text>\n";
  }
  // Axes with five ticks each.
  out << "<g stroke=\"black\" fill=\"none\"><rect x=\"" << margin << "\" y=\"" << margin
      << "\" width=\"" << w - 2 * margin << "\" height=\"" << h - 2 * margin << "\"/></g>\n";
  out << "<g font-size=\"10\" fill=\"black\">\n";
  for (int i = 0; i <= 4; ++i) {
    const double vx = rx.lo + (rx.hi - rx.lo) * i / 4.0;
    const double vy = ry.lo + (ry.hi - ry.lo) * i / 4.0;
    char bx[32];
    char by[32];
    std::snprintf(bx, sizeof bx, "%.3g", vx);
    std::snprintf(by, sizeof by, "%.3g", vy);
    out << "<text x=\"" << sx(vx) << "\" y=\"" << h - margin + 14
        << "\" text-anchor=\"middle\">" << bx << "</text>\n";
    out << "<text x=\"" << margin - 4 << "\" y=\"" << sy(vy) + 3 << "\" text-anchor=\"end\">"
        << by << "</text>\n";
  }
  out << "</g>\n";

  if (kind == PlotKind::scatter) {
    out << "<g stroke=\"none\">\n";
    for (const auto& p : points) {
      out << "<circle cx=\"" << sx(p.x) << "\" cy=\"" << sy(p.y) << "\" r=\"2.5\" fill=\""
          << kSeries[static_cast<std::size_t>(std::abs(p.series)) % 4] << "\"/>\n";
    }
    out << "</g>\n";
  } else {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& p : points) {
      lo = std::min(lo, p.weight);
      hi = std::max(hi, p.weight);
    }
    const double cw = sx(1.0) - sx(0.0);
    const double ch = sy(0.0) - sy(1.0);
    out << "<g stroke=\"none\">\n";
    for (const auto& p : points) {
      const double f = hi > lo ? (p.weight - lo) / (hi - lo) : 0.0;
      const int bin = std::clamp(static_cast<int>(f * 8.0), 0, 7);
      out << "<rect x=\"" << sx(p.x - 0.5) << "\" y=\"" << sy(p.y + 0.5) << "\" width=\"" << cw
          << "\" height=\"" << ch << "\" fill=\"" << kRamp[bin] << "\"/>\n";
    }
    out << "</g>\n";
  }
  out << "</svg>\n";
  return out.str();
}

void emit_svg(const std::vector<PlotPoint>& points, PlotKind kind, const std::string& path,
              const std::string& title) {
  write_text(path, render_svg(points, kind, title));
}

}  // namespace nhse
