#pragma once

#include <string>
#include <vector>

#include "nhse/gbz.hpp"
#include "nhse/geometry.hpp"
#include "nhse/linalg.hpp"
#include "nhse/spectral.hpp"

namespace nhse {

/// Shortest-exact form: 17 significant digits.
std::string format_double(double x);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> row);
  std::string str() const;
};

/// Throws Error on I/O failure.
void write_text(const std::string& path, const std::string& text);

CsvTable matrix_table(const ComplexMatrix& m);                  // row, col, re, im
CsvTable spectrum_table(const SpectralSet& s);                  // index, re_eig, im_eig, ipr
CsvTable density_table(const LatticeGeometry& g, const std::vector<double>& rho);  // x, y, rho
CsvTable gbz_table(const std::vector<GbzSample>& samples);

struct PlotPoint {
  double x = 0.0;
  double y = 0.0;
  double weight = 0.0;
  int series = 0;
};

enum class PlotKind { scatter, heatmap };

/// Standalone SVG. Scatter colours points by series; heatmap draws one cell
/// per point on the integer lattice with the weight mapped to an 8-step ramp.
std::string render_svg(const std::vector<PlotPoint>& points, PlotKind kind,
                       const std::string& title = "");
void emit_svg(const std::vector<PlotPoint>& points, PlotKind kind, const std::string& path,
              const std::string& title = "");

}  // namespace nhse
