#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include <anderson/error.hpp>

#include "anderson/cli/output.hpp"

namespace anderson::cli::svg {

namespace {

constexpr double kWidth = 640.0;
constexpr double kPanelHeight = 260.0;
constexpr double kMargin = 48.0;
constexpr std::array<const char*, 6> kColors{"#c0392b", "#2471a3", "#229954",
                                             "#7d3c98", "#d68910", "#566573"};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

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

void draw_frame(std::ostringstream& o, double top, const std::string& title, double x0, double x1,
                double y0, double y1, bool log_y) {
  o << "<rect x=\"" << kMargin << "\" y=\"" << top + kMargin / 2 << "\" width=\""
    << kWidth - 1.5 * kMargin << "\" height=\"" << kPanelHeight - kMargin
    << "\" fill=\"none\" stroke=\"#333\"/>\n";
  o << "<text x=\"" << kWidth / 2 << "\" y=\"" << top + 16
    << "\" text-anchor=\"middle\" font-size=\"13\">" << escape(title) << "</text>\n";
  const double bottom = top + kPanelHeight - kMargin / 2;
  auto ylab = [&](double v) { return log_y ? "1e" + fmt(v) : fmt(v); };
  o << "<text x=\"" << kMargin - 4 << "\" y=\"" << bottom
    << "\" text-anchor=\"end\" font-size=\"10\">" << ylab(y0) << "</text>\n";
  o << "<text x=\"" << kMargin - 4 << "\" y=\"" << top + kMargin / 2 + 10
    << "\" text-anchor=\"end\" font-size=\"10\">" << ylab(y1) << "</text>\n";
  o << "<text x=\"" << kMargin << "\" y=\"" << bottom + 14 << "\" font-size=\"10\">" << fmt(x0)
    << "</text>\n";
  o << "<text x=\"" << kWidth - kMargin / 2 << "\" y=\"" << bottom + 14
    << "\" text-anchor=\"end\" font-size=\"10\">" << fmt(x1) << "</text>\n";
}

void draw_panel(std::ostringstream& o, const Panel& p, double top) {
  const double left = kMargin;
  const double right = kWidth - kMargin / 2;
  const double upper = top + kMargin / 2;
  const double lower = top + kPanelHeight - kMargin / 2;

  if (p.histogram != nullptr) {
    const Histogram& h = *p.histogram;
    const double x0 = h.edges.front();
    const double x1 = h.edges.back();
    const std::size_t peak =
        h.counts.empty() ? 1 : std::max<std::size_t>(1, *std::max_element(h.counts.begin(), h.counts.end()));
    draw_frame(o, top, p.title, x0, x1, 0.0, static_cast<double>(peak), false);
    const double bw = (right - left) / static_cast<double>(h.counts.size());
    for (std::size_t i = 0; i < h.counts.size(); ++i) {
      const double ht = (lower - upper) * static_cast<double>(h.counts[i]) / static_cast<double>(peak);
      o << "<rect x=\"" << left + bw * static_cast<double>(i) << "\" y=\"" << lower - ht
        << "\" width=\"" << bw << "\" height=\"" << ht << "\" fill=\"" << kColors[1]
        << "\" stroke=\"#fff\" stroke-width=\"0.5\"/>\n";
    }
    return;
  }

  auto ty = [&](double y) { return p.log_y ? std::log10(y) : y; };
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const Series& s : p.series) {
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      const double y = ty(s.y[i]);
      if (!std::isfinite(s.x[i]) || !std::isfinite(y)) continue;
      x0 = std::min(x0, s.x[i]);
      x1 = std::max(x1, s.x[i]);
      y0 = std::min(y0, y);
      y1 = std::max(y1, y);
    }
  }
  if (!std::isfinite(x0)) {
    x0 = 0.0, x1 = 1.0, y0 = 0.0, y1 = 1.0;
  }
  if (x1 == x0) x1 = x0 + 1.0;
  if (y1 == y0) y1 = y0 + 1.0;
  draw_frame(o, top, p.title, x0, x1, y0, y1, p.log_y);

  for (std::size_t si = 0; si < p.series.size(); ++si) {
    const Series& s = p.series[si];
    const char* color = kColors[si % kColors.size()];
    o << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.2\" points=\"";
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      const double y = ty(s.y[i]);
      if (!std::isfinite(s.x[i]) || !std::isfinite(y)) continue;
      o << fmt(left + (right - left) * (s.x[i] - x0) / (x1 - x0)) << ','
        << fmt(lower - (lower - upper) * (y - y0) / (y1 - y0)) << ' ';
    }
    o << "\"/>\n";
    if (!s.label.empty() && si < 8) {
      o << "<text x=\"" << right - 4 << "\" y=\"" << upper + 14 + 12 * static_cast<double>(si)
        << "\" text-anchor=\"end\" font-size=\"10\" fill=\"" << color << "\">" << escape(s.label)
        << "</text>\n";
    }
  }
}

}  // namespace

std::string render(const std::vector<Panel>& panels) {
  std::ostringstream o;
  const double height = kPanelHeight * static_cast<double>(std::max<std::size_t>(1, panels.size()));
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << height
    << "\" font-family=\"sans-serif\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"#fff\"/>\n";
  for (std::size_t i = 0; i < panels.size(); ++i) {
    draw_panel(o, panels[i], kPanelHeight * static_cast<double>(i));
  }
  o << "</svg>\n";
  return o.str();
}

void write(const std::filesystem::path& path, const std::vector<Panel>& panels) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::ConfigError, "cannot write " + path.string());
  out << render(panels);
}

}  // namespace anderson::cli::svg
