#include "twophase/output.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace twophase {

void write_history_csv(std::ostream& out, std::span<const IterationRecord> records) {
  std::ostringstream buf;
  buf << std::setprecision(17);
  buf << "k,objective,diff_l2,theta,restarted\n";
  for (const auto& r : records) {
    buf << r.k << ',' << r.objective << ',' << r.diff_l2 << ',' << r.theta << ','
        << (r.restarted ? 1 : 0) << '\n';
  }
  out << buf.str();
}

void write_vtk(std::ostream& out, const Mesh& mesh, std::span<const double> cell_f,
               std::span<const double> point_u) {
  std::ostringstream buf;
  buf << std::setprecision(17);
  buf << "# vtk DataFile Version 3.0\n"
      << "two-phase density\n"
      << "ASCII\n"
      << "DATASET UNSTRUCTURED_GRID\n";
  buf << "POINTS " << mesh.num_vertices() << " double\n";
  for (const auto& p : mesh.vertices()) buf << p[0] << ' ' << p[1] << " 0\n";
  buf << "CELLS " << mesh.num_cells() << ' ' << 4 * mesh.num_cells() << '\n';
  for (const auto& t : mesh.triangles()) buf << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  buf << "CELL_TYPES " << mesh.num_cells() << '\n';
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) buf << "5\n";
  if (!cell_f.empty()) {
    buf << "CELL_DATA " << mesh.num_cells() << '\n'
        << "SCALARS f double 1\nLOOKUP_TABLE default\n";
    for (double v : cell_f) buf << v << '\n';
  }
  if (!point_u.empty()) {
    buf << "POINT_DATA " << mesh.num_vertices() << '\n'
        << "SCALARS u double 1\nLOOKUP_TABLE default\n";
    for (double v : point_u) buf << v << '\n';
  }
  out << buf.str();
}

namespace {

struct Series {
  std::string label;
  std::string color;
  std::vector<std::pair<double, double>> points;  // (k, log10 value)
};

}  // namespace

void write_convergence_svg(std::ostream& out, std::span<const IterationRecord> records,
                           const std::string& title) {
  constexpr double width = 640, height = 420;
  constexpr double left = 70, right = 20, top = 40, bottom = 50;
  const double plot_w = width - left - right, plot_h = height - top - bottom;

  Series gap{"|objective - final|", "#1f77b4", {}};
  Series diff{"diff_l2", "#d62728", {}};
  const double final_obj = records.empty() ? 0.0 : records.back().objective;
  for (const auto& r : records) {
    const double g = std::abs(r.objective - final_obj);
    if (g > 0.0 && std::isfinite(g)) gap.points.emplace_back(r.k, std::log10(g));
    if (r.diff_l2 > 0.0 && std::isfinite(r.diff_l2)) diff.points.emplace_back(r.k, std::log10(r.diff_l2));
  }

  double kmax = 1.0, lo = 0.0, hi = 1.0;
  bool any = false;
  for (const auto* s : {&gap, &diff}) {
    for (const auto& [k, v] : s->points) {
      kmax = std::max(kmax, k);
      if (!any) lo = hi = v;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
      any = true;
    }
  }
  lo = std::floor(lo);
  hi = std::ceil(hi);
  if (hi <= lo) hi = lo + 1.0;
  auto sx = [&](double k) { return left + plot_w * k / kmax; };
  auto sy = [&](double v) { return top + plot_h * (hi - v) / (hi - lo); };

  std::ostringstream buf;
  buf << std::setprecision(6);
  buf << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  buf << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  buf << "<text x=\"" << width / 2 << "\" y=\"22\" text-anchor=\"middle\">" << title
      << "</text>\n";
  buf << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << plot_w << "\" height=\""
      << plot_h << "\" fill=\"none\" stroke=\"black\"/>\n";

  const int decades = static_cast<int>(hi - lo);
  const int step = std::max(1, decades / 8);
  for (int d = static_cast<int>(lo); d <= static_cast<int>(hi); d += step) {
    buf << "<line x1=\"" << left << "\" x2=\"" << left + plot_w << "\" y1=\"" << sy(d)
        << "\" y2=\"" << sy(d) << "\" stroke=\"#ddd\"/>\n";
    buf << "<text x=\"" << left - 6 << "\" y=\"" << sy(d) + 4
        << "\" text-anchor=\"end\">1e" << d << "</text>\n";
  }
  for (int i = 0; i <= 5; ++i) {
    const double k = kmax * i / 5.0;
    buf << "<text x=\"" << sx(k) << "\" y=\"" << top + plot_h + 18
        << "\" text-anchor=\"middle\">" << std::lround(k) << "</text>\n";
  }
  buf << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << height - 10
      << "\" text-anchor=\"middle\">iteration k</text>\n";

  int legend_row = 0;
  for (const auto* s : {&gap, &diff}) {
    if (!s->points.empty()) {
      buf << "<polyline fill=\"none\" stroke=\"" << s->color << "\" stroke-width=\"1.5\" points=\"";
      for (const auto& [k, v] : s->points) buf << sx(k) << ',' << sy(v) << ' ';
      buf << "\"/>\n";
    }
    const double ly = top + 16 + 16 * legend_row++;
    buf << "<line x1=\"" << left + plot_w - 150 << "\" x2=\"" << left + plot_w - 125
        << "\" y1=\"" << ly - 4 << "\" y2=\"" << ly - 4 << "\" stroke=\"" << s->color
        << "\" stroke-width=\"2\"/>\n";
    buf << "<text x=\"" << left + plot_w - 120 << "\" y=\"" << ly << "\">" << s->label
        << "</text>\n";
  }
  buf << "</svg>\n";
  out << buf.str();
}

}  // namespace twophase
