#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "adslab/boundary.hpp"
#include "adslab/surface.hpp"

// CSV / JSON / SVG emission. All numeric formatting goes through
// format_scalar so identical runs produce byte-identical files.

namespace adslab {

std::string format_scalar(Scalar x);

using CsvRow = std::vector<std::string>;

void write_csv(const std::filesystem::path& path, const CsvRow& header,
               const std::vector<CsvRow>& rows);

/// Boundary file: { n, kind, theta, values, fourier: {a, b}, margin }.
void save_boundary_json(const std::filesystem::path& path, const AdmissibleBoundary& b);
AdmissibleBoundary load_boundary_json(const std::filesystem::path& path, int num_samples = 512);

/// Solution dump: { vertices, triangles, f, H, lambda }.
void save_surface_json(const std::filesystem::path& path, const CmcMesh& c);

struct SvgSeries {
  std::vector<std::pair<Scalar, Scalar>> points;
  std::string color = "#1f6fb2";
  bool line = false;  // polyline vs scatter
  std::string label;
};

/// Minimal self-contained scatter/line plot.
void write_svg_plot(const std::filesystem::path& path, const std::string& title,
                    const std::string& xlabel, const std::string& ylabel,
                    const std::vector<SvgSeries>& series);

}  // namespace adslab
