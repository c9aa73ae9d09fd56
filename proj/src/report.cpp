#include "adslab/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace adslab {

using nlohmann::json;

std::string format_scalar(Scalar x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

void write_csv(const std::filesystem::path& path, const CsvRow& header,
               const std::vector<CsvRow>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_csv: cannot open " + path.string());
  auto emit = [&](const CsvRow& r) {
    for (size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << r[i];
    out << "\n";
  };
  emit(header);
  for (const auto& r : rows) emit(r);
}

void save_boundary_json(const std::filesystem::path& path, const AdmissibleBoundary& b) {
  json j;
  j["n"] = b.n;
  j["margin"] = b.margin;
  if (b.generator) {
    j["kind"] = "fourier";
    j["fourier"]["a"] = std::vector<Scalar>(b.generator->cos_coeffs.data(),
                                            b.generator->cos_coeffs.data() +
                                                b.generator->cos_coeffs.size());
    j["fourier"]["b"] = std::vector<Scalar>(b.generator->sin_coeffs.data(),
                                            b.generator->sin_coeffs.data() +
                                                b.generator->sin_coeffs.size());
  } else {
    j["kind"] = "samples";
  }
  j["theta"] = std::vector<Scalar>(b.angles.data(), b.angles.data() + b.angles.size());
  j["values"] = std::vector<Scalar>(b.values.data(), b.values.data() + b.values.size());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_boundary_json: cannot open " + path.string());
  out << j.dump(2) << "\n";
}

AdmissibleBoundary load_boundary_json(const std::filesystem::path& path, int num_samples) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_boundary_json: cannot open " + path.string());
  json j;
  in >> j;
  const int n = j.value("n", 2);
  const Scalar margin = j.value("margin", 1e-3);
  const std::string kind = j.value("kind", "samples");
  if (kind == "fourier") {
    if (n != 2) throw std::runtime_error("load_boundary_json: fourier kind requires n = 2");
    FourierSeries g;
    auto a = j["fourier"]["a"].get<std::vector<Scalar>>();
    auto bb = j["fourier"]["b"].get<std::vector<Scalar>>();
    g.cos_coeffs = Eigen::Map<Vec>(a.data(), static_cast<Index>(a.size()));
    g.sin_coeffs = Eigen::Map<Vec>(bb.data(), static_cast<Index>(bb.size()));
    const Scalar d = g.max_abs_deriv();
    if (d >= 1.0 - margin)
      throw std::runtime_error("load_boundary_json: generator slope " + format_scalar(d) +
                               " violates the Lipschitz margin");
    return make_boundary_fourier(num_samples, g, margin);
  }
  auto th = j["theta"].get<std::vector<Scalar>>();
  auto va = j["values"].get<std::vector<Scalar>>();
  return make_boundary_samples(Eigen::Map<Vec>(th.data(), static_cast<Index>(th.size())),
                               Eigen::Map<Vec>(va.data(), static_cast<Index>(va.size())), margin);
}

void save_surface_json(const std::filesystem::path& path, const CmcMesh& c) {
  json j;
  const DiscMesh& m = *c.mesh;
  std::vector<std::vector<Scalar>> verts(m.num_vertices());
  for (Index v = 0; v < m.num_vertices(); ++v)
    verts[v] = std::vector<Scalar>(m.vertices.row(v).data(),
                                   m.vertices.row(v).data() + m.vertices.cols());
  std::vector<std::vector<int>> tris(m.num_cells());
  for (Index t = 0; t < m.num_cells(); ++t)
    tris[t] = std::vector<int>(m.cells.row(t).data(), m.cells.row(t).data() + m.cells.cols());
  j["vertices"] = verts;
  j["triangles"] = tris;
  j["f"] = std::vector<Scalar>(c.f.data(), c.f.data() + c.f.size());
  j["H"] = c.H_target;
  std::vector<std::vector<Scalar>> lam(m.num_vertices());
  for (Index v = 0; v < m.num_vertices(); ++v)
    lam[v] = std::vector<Scalar>(c.geo.lambda.row(v).data(),
                                 c.geo.lambda.row(v).data() + c.geo.lambda.cols());
  j["lambda"] = lam;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_surface_json: cannot open " + path.string());
  out << j.dump() << "\n";
}

void write_svg_plot(const std::filesystem::path& path, const std::string& title,
                    const std::string& xlabel, const std::string& ylabel,
                    const std::vector<SvgSeries>& series) {
  const int W = 640, H = 440, ml = 70, mr = 20, mt = 40, mb = 50;
  Scalar xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& s : series)
    for (auto [x, y] : s.points) {
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  if (xmin > xmax) {
    xmin = 0;
    xmax = 1;
    ymin = 0;
    ymax = 1;
  }
  if (xmax - xmin < 1e-12) {
    xmin -= 0.5;
    xmax += 0.5;
  }
  if (ymax - ymin < 1e-12) {
    ymin -= 0.5;
    ymax += 0.5;
  }
  const Scalar px = (W - ml - mr) / (xmax - xmin);
  const Scalar py = (H - mt - mb) / (ymax - ymin);
  auto X = [&](Scalar x) { return ml + (x - xmin) * px; };
  auto Y = [&](Scalar y) { return H - mb - (y - ymin) * py; };

  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_svg_plot: cannot open " + path.string());
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
      << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << title
      << "</text>\n";
  out << "<line x1=\"" << ml << "\" y1=\"" << H - mb << "\" x2=\"" << W - mr << "\" y2=\""
      << H - mb << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << H - mb
      << "\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const Scalar xv = xmin + (xmax - xmin) * k / 4;
    const Scalar yv = ymin + (ymax - ymin) * k / 4;
    out << "<text x=\"" << X(xv) << "\" y=\"" << H - mb + 18
        << "\" text-anchor=\"middle\" font-size=\"11\">" << format_scalar(xv) << "</text>\n";
    out << "<text x=\"" << ml - 8 << "\" y=\"" << Y(yv) + 4
        << "\" text-anchor=\"end\" font-size=\"11\">" << format_scalar(yv) << "</text>\n";
  }
  out << "<text x=\"" << W / 2 << "\" y=\"" << H - 12
      << "\" text-anchor=\"middle\" font-size=\"13\">" << xlabel << "</text>\n";
  out << "<text x=\"16\" y=\"" << H / 2 << "\" text-anchor=\"middle\" font-size=\"13\" "
      << "transform=\"rotate(-90 16 " << H / 2 << ")\">" << ylabel << "</text>\n";

  int legend_y = mt + 6;
  for (const auto& s : series) {
    if (s.line) {
      out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\"";
      for (auto [x, y] : s.points) out << X(x) << "," << Y(y) << " ";
      out << "\"/>\n";
    } else {
      for (auto [x, y] : s.points)
        out << "<circle cx=\"" << X(x) << "\" cy=\"" << Y(y) << "\" r=\"3\" fill=\"" << s.color
            << "\"/>\n";
    }
    if (!s.label.empty()) {
      out << "<text x=\"" << W - mr - 6 << "\" y=\"" << legend_y
          << "\" text-anchor=\"end\" font-size=\"11\" fill=\"" << s.color << "\">" << s.label
          << "</text>\n";
      legend_y += 15;
    }
  }
  out << "</svg>\n";
}

}  // namespace adslab
