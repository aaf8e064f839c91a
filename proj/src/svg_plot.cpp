#include "vowelkit/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "vowelkit/error.hpp"

namespace vowelkit {

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 540.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 150.0;  // legend column
constexpr double kTop = 50.0;
constexpr double kBottom = 60.0;

constexpr const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                   "#9467bd", "#8c564b", "#e377c2", "#17becf"};

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_text(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", std::abs(v) < 1e-12 ? 0.0 : v);
  return buf;
}

// Marker centred at (x, y); shape chosen by index.
std::string marker(std::size_t shape, double x, double y, const char* color) {
  const double r = 4.0;
  std::ostringstream o;
  const std::string style = std::string(" fill=\"") + color + "\" fill-opacity=\"0.7\" stroke=\"" +
                            color + "\"";
  switch (shape % 7) {
    case 0:
      o << "<circle cx=\"" << num(x) << "\" cy=\"" << num(y) << "\" r=\"" << num(r) << "\"" << style << "/>";
      break;
    case 1:
      o << "<rect x=\"" << num(x - r) << "\" y=\"" << num(y - r) << "\" width=\"" << num(2 * r)
        << "\" height=\"" << num(2 * r) << "\"" << style << "/>";
      break;
    case 2:
      o << "<polygon points=\"" << num(x) << ',' << num(y - r * 1.2) << ' ' << num(x - r) << ','
        << num(y + r) << ' ' << num(x + r) << ',' << num(y + r) << "\"" << style << "/>";
      break;
    case 3:
      o << "<polygon points=\"" << num(x) << ',' << num(y - r * 1.3) << ' ' << num(x + r) << ','
        << num(y) << ' ' << num(x) << ',' << num(y + r * 1.3) << ' ' << num(x - r) << ',' << num(y)
        << "\"" << style << "/>";
      break;
    case 4:
      o << "<polygon points=\"" << num(x) << ',' << num(y + r * 1.2) << ' ' << num(x - r) << ','
        << num(y - r) << ' ' << num(x + r) << ',' << num(y - r) << "\"" << style << "/>";
      break;
    case 5:
      o << "<path d=\"M" << num(x - r) << ' ' << num(y) << " H" << num(x + r) << " M" << num(x) << ' '
        << num(y - r) << " V" << num(y + r) << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>";
      break;
    default:
      o << "<path d=\"M" << num(x - r) << ' ' << num(y - r) << " L" << num(x + r) << ' ' << num(y + r)
        << " M" << num(x - r) << ' ' << num(y + r) << " L" << num(x + r) << ' ' << num(y - r)
        << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>";
      break;
  }
  return o.str();
}

struct Axis {
  double lo, hi, step;
};

Axis nice_axis(double lo, double hi) {
  if (!(hi > lo)) {
    const double pad = std::max(1.0, std::abs(lo) * 0.1);
    lo -= pad;
    hi += pad;
  }
  const double raw = (hi - lo) / 6.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    step = m * mag;
    if (step >= raw) break;
  }
  return {std::floor(lo / step) * step, std::ceil(hi / step) * step, step};
}

}  // namespace

std::vector<std::string> legend_labels(const ScatterPlot& plot) {
  std::set<std::string> labels;
  for (const ScatterPoint& p : plot.points) labels.insert(p.label);
  return {labels.begin(), labels.end()};
}

std::string render_svg(const ScatterPlot& plot) {
  double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  if (!plot.points.empty()) {
    xmin = xmax = plot.points.front().x;
    ymin = ymax = plot.points.front().y;
    for (const ScatterPoint& p : plot.points) {
      xmin = std::min(xmin, p.x);
      xmax = std::max(xmax, p.x);
      ymin = std::min(ymin, p.y);
      ymax = std::max(ymax, p.y);
    }
  }
  const Axis ax = nice_axis(xmin, xmax);
  const Axis ay = nice_axis(ymin, ymax);
  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  auto sx = [&](double x) { return kLeft + (x - ax.lo) / (ax.hi - ax.lo) * pw; };
  auto sy = [&](double y) { return kTop + ph - (y - ay.lo) / (ay.hi - ay.lo) * ph; };

  const std::vector<std::string> labels = legend_labels(plot);
  auto style_of = [&](const std::string& label) {
    return static_cast<std::size_t>(std::lower_bound(labels.begin(), labels.end(), label) - labels.begin());
  };

  std::ostringstream o;
  o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
    << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << num(kLeft + pw / 2) << "\" y=\"28\" text-anchor=\"middle\" font-size=\"16\">"
    << escape(plot.title) << "</text>\n";

  o << "<g stroke=\"#ccc\" stroke-width=\"0.5\" font-size=\"11\" fill=\"#333\">\n";
  for (double t = ax.lo; t <= ax.hi + ax.step * 1e-9; t += ax.step) {
    o << "<line x1=\"" << num(sx(t)) << "\" y1=\"" << num(kTop) << "\" x2=\"" << num(sx(t)) << "\" y2=\""
      << num(kTop + ph) << "\"/>";
    o << "<text x=\"" << num(sx(t)) << "\" y=\"" << num(kTop + ph + 16)
      << "\" text-anchor=\"middle\" stroke=\"none\">" << tick_text(t) << "</text>\n";
  }
  for (double t = ay.lo; t <= ay.hi + ay.step * 1e-9; t += ay.step) {
    o << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(sy(t)) << "\" x2=\"" << num(kLeft + pw)
      << "\" y2=\"" << num(sy(t)) << "\"/>";
    o << "<text x=\"" << num(kLeft - 6) << "\" y=\"" << num(sy(t) + 4)
      << "\" text-anchor=\"end\" stroke=\"none\">" << tick_text(t) << "</text>\n";
  }
  o << "</g>\n";
  o << "<rect x=\"" << num(kLeft) << "\" y=\"" << num(kTop) << "\" width=\"" << num(pw) << "\" height=\""
    << num(ph) << "\" fill=\"none\" stroke=\"black\"/>\n";
  o << "<text x=\"" << num(kLeft + pw / 2) << "\" y=\"" << num(kHeight - 16)
    << "\" text-anchor=\"middle\" font-size=\"13\">" << escape(plot.x_label) << "</text>\n";
  o << "<text x=\"18\" y=\"" << num(kTop + ph / 2) << "\" text-anchor=\"middle\" font-size=\"13\" "
    << "transform=\"rotate(-90 18 " << num(kTop + ph / 2) << ")\">" << escape(plot.y_label) << "</text>\n";

  o << "<g class=\"points\">\n";
  for (const ScatterPoint& p : plot.points) {
    const std::size_t s = style_of(p.label);
    o << marker(s, sx(p.x), sy(p.y), kColors[s % std::size(kColors)]) << '\n';
  }
  o << "</g>\n";

  o << "<g class=\"legend\" font-size=\"13\">\n";
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const double y = kTop + 14 + 22.0 * static_cast<double>(i);
    const double x = kWidth - kRight + 24;
    o << marker(i, x, y, kColors[i % std::size(kColors)]) << "<text x=\"" << num(x + 12) << "\" y=\""
      << num(y + 4) << "\">" << escape(labels[i]) << "</text>\n";
  }
  o << "</g>\n</svg>\n";
  return o.str();
}

void write_svg(const ScatterPlot& plot, const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(Errc::io, "cannot write '" + path.string() + "'");
  f << render_svg(plot);
  if (!f) throw Error(Errc::io, "write failed for '" + path.string() + "'");
}

}  // namespace vowelkit
