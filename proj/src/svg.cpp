#include "cohmatch/svg.hpp"

#include "cohmatch/io.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace cohmatch {

namespace {

constexpr double kSize = 480.0;
constexpr double kMargin = 40.0;
const char* const kColours[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string num(double x) { return format_real(x, 6); }

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else if (c == '&') out += "&amp;";
    else out += c;
  }
  return out;
}

struct Frame {
  double x0, x1, y0, y1;
  double sx(double x) const { return kMargin + (x - x0) / (x1 - x0) * (kSize - 2 * kMargin); }
  double sy(double y) const { return kSize - kMargin - (y - y0) / (y1 - y0) * (kSize - 2 * kMargin); }
};

Frame padded(double lo_x, double hi_x, double lo_y, double hi_y) {
  auto widen = [](double& lo, double& hi) {
    if (!(hi > lo)) {
      lo -= 1.0;
      hi += 1.0;
    }
    const double pad = 0.05 * (hi - lo);
    lo -= pad;
    hi += pad;
  };
  widen(lo_x, hi_x);
  widen(lo_y, hi_y);
  return {lo_x, hi_x, lo_y, hi_y};
}

void open(std::ostringstream& os, const std::string& title) {
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kSize << "\" height=\"" << kSize
     << "\" viewBox=\"0 0 " << kSize << ' ' << kSize << "\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!title.empty())
    os << "<text x=\"" << kSize / 2 << "\" y=\"20\" text-anchor=\"middle\" font-family=\"sans-serif\" "
          "font-size=\"14\">"
       << escape(title) << "</text>\n";
}

void axes(std::ostringstream& os, const Frame& f, const std::string& xlabel,
          const std::string& ylabel) {
  os << "<rect x=\"" << kMargin << "\" y=\"" << kMargin << "\" width=\"" << kSize - 2 * kMargin
     << "\" height=\"" << kSize - 2 * kMargin << "\" fill=\"none\" stroke=\"black\"/>\n";
  os << "<text x=\"" << kMargin << "\" y=\"" << kSize - 12 << "\" font-family=\"sans-serif\" "
     << "font-size=\"11\">" << escape(xlabel) << " [" << num(f.x0) << ", " << num(f.x1)
     << "]</text>\n";
  os << "<text x=\"4\" y=\"" << kMargin - 6 << "\" font-family=\"sans-serif\" font-size=\"11\">"
     << escape(ylabel) << " [" << num(f.y0) << ", " << num(f.y1) << "]</text>\n";
}

}  // namespace

std::string diagram_svg(const PersistenceDiagram& d, const std::string& title) {
  double lo = kInfinity, hi = -kInfinity;
  for (const auto& c : d.points()) {
    lo = std::min(lo, c.birth);
    hi = std::max(hi, c.at_infinity() ? c.birth : c.death);
  }
  if (!std::isfinite(lo)) lo = hi = 0.0;
  // Room above for the points at infinity.
  const double top = hi + 0.1 * std::max(1e-9, hi - lo) + 1e-9;
  const Frame f = padded(lo, hi, lo, top);
  std::ostringstream os;
  open(os, title);
  axes(os, f, "birth", "death");
  os << "<line x1=\"" << num(f.sx(f.x0)) << "\" y1=\"" << num(f.sy(f.x0)) << "\" x2=\""
     << num(f.sx(f.x1)) << "\" y2=\"" << num(f.sy(f.x1)) << "\" stroke=\"grey\"/>\n";
  os << "<line x1=\"" << num(f.sx(f.x0)) << "\" y1=\"" << num(f.sy(top)) << "\" x2=\""
     << num(f.sx(f.x1)) << "\" y2=\"" << num(f.sy(top))
     << "\" stroke=\"grey\" stroke-dasharray=\"4 3\"/>\n";
  for (const auto& c : d.points()) {
    const double y = c.at_infinity() ? top : c.death;
    os << "<circle cx=\"" << num(f.sx(c.birth)) << "\" cy=\"" << num(f.sy(y)) << "\" r=\""
       << 3 + c.multiplicity << "\" fill=\"" << kColours[c.degree % 6] << "\"><title>degree "
       << c.degree << " (" << format_real(c.birth, 6) << ", " << format_real(c.death, 6)
       << ") x" << c.multiplicity << "</title></circle>\n";
  }
  os << "</svg>\n";
  return os.str();
}

std::string vineyard_svg(const std::vector<CornerpointTrack>& tracks, const std::string& title) {
  double lo = kInfinity, hi = -kInfinity;
  for (const auto& t : tracks)
    for (const auto& s : t.samples) {
      lo = std::min({lo, s.position.x(), s.position.y()});
      hi = std::max({hi, s.position.x(), s.position.y()});
    }
  if (!std::isfinite(lo)) lo = hi = 0.0;
  const Frame f = padded(0.0, 1.0, lo, hi);
  std::ostringstream os;
  open(os, title);
  axes(os, f, "tau", "birth / death");
  for (std::size_t k = 0; k < tracks.size(); ++k) {
    const auto& samples = tracks[k].samples;
    for (int coord = 0; coord < 2; ++coord)
      for (std::size_t i = 1; i < samples.size(); ++i) {
        const auto& p = samples[i - 1];
        const auto& q = samples[i];
        os << "<line x1=\"" << num(f.sx(p.tau)) << "\" y1=\"" << num(f.sy(p.position[coord]))
           << "\" x2=\"" << num(f.sx(q.tau)) << "\" y2=\"" << num(f.sy(q.position[coord]))
           << "\" stroke=\"" << kColours[k % 6] << "\""
           << (p.on_diagonal || q.on_diagonal ? " stroke-dasharray=\"3 3\"" : "")
           << (coord == 1 ? " stroke-width=\"2\"" : "") << "/>\n";
      }
  }
  os << "</svg>\n";
  return os.str();
}

std::string heatmap_svg(const ParameterRegion& region, const Eigen::MatrixXd& grid,
                        const std::vector<ParameterPoint>& markers, const std::string& title) {
  const int n = static_cast<int>(grid.rows());
  double hi = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (std::isfinite(grid(i, j))) hi = std::max(hi, grid(i, j));
  const Frame f{region.a_lo, region.a_hi, region.b_lo, region.b_hi};
  const double cw = (kSize - 2 * kMargin) / n;
  std::ostringstream os;
  open(os, title);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double v = grid(i, j);
      if (!std::isfinite(v)) continue;
      const int shade = hi > 0 ? static_cast<int>(std::lround(255 * v / hi)) : 255;
      os << "<rect x=\"" << num(kMargin + i * cw) << "\" y=\"" << num(kSize - kMargin - (j + 1) * cw)
         << "\" width=\"" << num(cw) << "\" height=\"" << num(cw) << "\" fill=\"rgb(" << shade
         << ',' << shade << ",255)\"/>\n";
    }
  axes(os, f, "a", "b");
  for (const auto& m : markers)
    os << "<circle cx=\"" << num(f.sx(m.a)) << "\" cy=\"" << num(f.sy(m.b))
       << "\" r=\"4\" fill=\"none\" stroke=\"red\" stroke-width=\"2\"/>\n";
  os << "</svg>\n";
  return os.str();
}

}  // namespace cohmatch
