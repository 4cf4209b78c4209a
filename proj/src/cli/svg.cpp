#include "bdi/cli/svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace bdi::cli {
namespace {

constexpr double kLeft = 80, kRight = 170, kTop = 40, kBottom = 60;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  if (v != 0.0 && (std::abs(v) >= 1e5 || std::abs(v) < 1e-3)) {
    std::snprintf(buf, sizeof buf, "%.0e", v);
  } else {
    std::snprintf(buf, sizeof buf, "%g", v);
  }
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

// Round step (1, 2 or 5 times a power of ten) giving about n ticks.
double nice_step(double span, int n) {
  const double raw = span / n;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (m * mag >= raw) return m * mag;
  }
  return 10.0 * mag;
}

}  // namespace

const std::string& palette(std::size_t i) {
  static const std::array<std::string, 10> colors{"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                                  "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
  return colors[i % colors.size()];
}

std::string render_svg(const ChartSpec& chart, const std::vector<Series>& series) {
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const auto& s : series) {
    if (s.x.size() != s.y.size()) throw std::invalid_argument("series x and y differ in length");
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      const double y = s.y[i];
      if (!std::isfinite(y) || !std::isfinite(s.x[i]) || (chart.log_y && y <= 0.0)) continue;
      const double half = s.bars ? 0.5 * s.bar_width : 0.0;
      xmin = std::min(xmin, s.x[i] - half);
      xmax = std::max(xmax, s.x[i] + half);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
      if (s.bars && !chart.log_y) ymin = std::min(ymin, 0.0);
    }
  }
  if (!std::isfinite(xmin)) xmin = 0, xmax = 1, ymin = chart.log_y ? 1 : 0, ymax = chart.log_y ? 10 : 1;
  if (xmax == xmin) xmax = xmin + 1;
  if (chart.log_y) {
    ymin = std::pow(10.0, std::floor(std::log10(ymin)));
    ymax = std::pow(10.0, std::ceil(std::log10(ymax)));
    if (ymax == ymin) ymax = ymin * 10;
  } else {
    if (ymin > 0 && ymin < 0.5 * ymax) ymin = 0;
    if (ymax == ymin) ymax = ymin + 1;
    const double st = nice_step(ymax - ymin, 6);
    ymin = std::floor(ymin / st) * st;
    ymax = std::ceil(ymax / st) * st;
  }

  const double pw = chart.width - kLeft - kRight;
  const double ph = chart.height - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (x - xmin) / (xmax - xmin) * pw; };
  auto py = [&](double y) {
    const double f = chart.log_y ? (std::log10(y) - std::log10(ymin)) / (std::log10(ymax) - std::log10(ymin))
                                : (y - ymin) / (ymax - ymin);
    return kTop + (1.0 - f) * ph;
  };

  std::string o;
  o += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(chart.width) + "\" height=\"" +
       std::to_string(chart.height) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  o += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o += "<text x=\"" + num(kLeft + pw / 2) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" +
       escape(chart.title) + "</text>\n";

  // grid and ticks
  const double xs = nice_step(xmax - xmin, 8);
  for (double x = std::ceil(xmin / xs) * xs; x <= xmax + 1e-9 * xs; x += xs) {
    o += "<line x1=\"" + num(px(x)) + "\" y1=\"" + num(kTop) + "\" x2=\"" + num(px(x)) + "\" y2=\"" +
         num(kTop + ph) + "\" stroke=\"#e0e0e0\"/>\n";
    o += "<text x=\"" + num(px(x)) + "\" y=\"" + num(kTop + ph + 16) + "\" text-anchor=\"middle\">" +
         tick_label(x) + "</text>\n";
  }
  std::vector<double> yt;
  if (chart.log_y) {
    for (double y = ymin; y <= ymax * 1.0000001; y *= 10) yt.push_back(y);
  } else {
    const double st = nice_step(ymax - ymin, 6);
    for (double y = ymin; y <= ymax + 1e-9 * st; y += st) yt.push_back(y);
  }
  for (double y : yt) {
    o += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(py(y)) + "\" x2=\"" + num(kLeft + pw) + "\" y2=\"" +
         num(py(y)) + "\" stroke=\"#e0e0e0\"/>\n";
    o += "<text x=\"" + num(kLeft - 6) + "\" y=\"" + num(py(y) + 4) + "\" text-anchor=\"end\">" +
         tick_label(y) + "</text>\n";
  }
  o += "<rect x=\"" + num(kLeft) + "\" y=\"" + num(kTop) + "\" width=\"" + num(pw) + "\" height=\"" + num(ph) +
       "\" fill=\"none\" stroke=\"black\"/>\n";
  o += "<text x=\"" + num(kLeft + pw / 2) + "\" y=\"" + num(chart.height - 18.0) + "\" text-anchor=\"middle\">" +
       escape(chart.x_label) + "</text>\n";
  o += "<text transform=\"translate(18," + num(kTop + ph / 2) + ") rotate(-90)\" text-anchor=\"middle\">" +
       escape(chart.y_label) + "</text>\n";

  for (const auto& s : series) {
    if (s.bars) {
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        const double y = s.y[i];
        if (!std::isfinite(y) || (chart.log_y && y <= 0)) continue;
        const double base = chart.log_y ? ymin : std::max(ymin, 0.0);
        const double top = std::min(py(y), py(base));
        const double h = std::abs(py(base) - py(y));
        o += "<rect x=\"" + num(px(s.x[i] - 0.5 * s.bar_width)) + "\" y=\"" + num(top) + "\" width=\"" +
             num(px(s.x[i] + 0.5 * s.bar_width) - px(s.x[i] - 0.5 * s.bar_width)) + "\" height=\"" + num(h) +
             "\" fill=\"" + s.color + "\" fill-opacity=\"0.6\"/>\n";
      }
      continue;
    }
    std::string pts;
    auto flush = [&] {
      if (pts.empty()) return;
      o += "<polyline fill=\"none\" stroke=\"" + s.color + "\" stroke-width=\"1.5\"" +
           (s.dashed ? " stroke-dasharray=\"6,4\"" : "") + " points=\"" + pts + "\"/>\n";
      pts.clear();
    };
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      const double y = s.y[i];
      if (!std::isfinite(y) || (chart.log_y && y <= 0)) {
        flush();
        continue;
      }
      if (!pts.empty()) pts += ' ';
      pts += num(px(s.x[i])) + "," + num(py(y));
    }
    flush();
  }

  // legend
  double ly = kTop + 10;
  for (const auto& s : series) {
    if (s.label.empty()) continue;
    const double lx = kLeft + pw + 12;
    if (s.bars) {
      o += "<rect x=\"" + num(lx) + "\" y=\"" + num(ly - 6) + "\" width=\"20\" height=\"10\" fill=\"" + s.color +
           "\" fill-opacity=\"0.6\"/>\n";
    } else {
      o += "<line x1=\"" + num(lx) + "\" y1=\"" + num(ly) + "\" x2=\"" + num(lx + 20) + "\" y2=\"" + num(ly) +
           "\" stroke=\"" + s.color + "\" stroke-width=\"2\"" + (s.dashed ? " stroke-dasharray=\"6,4\"" : "") +
           "/>\n";
    }
    o += "<text x=\"" + num(lx + 26) + "\" y=\"" + num(ly + 4) + "\">" + escape(s.label) + "</text>\n";
    ly += 18;
  }
  o += "</svg>\n";
  return o;
}

void write_svg(const std::filesystem::path& path, const ChartSpec& chart, const std::vector<Series>& series) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << render_svg(chart, series);
}

}  // namespace bdi::cli
