#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <string>

#include "aerocov/errors.hpp"
#include "aerocov/experiments.hpp"

namespace aerocov {

namespace {

constexpr double kWidth = 880.0;
constexpr double kHeight = 560.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 650.0;
constexpr double kTop = 48.0;
constexpr double kBottom = 500.0;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                          "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
                          "#17becf", "#bcbd22"};
constexpr int kPaletteSize = 10;

std::string fmt(double v, const char* pattern = "%.2f") {
  char buf[64];
  std::snprintf(buf, sizeof(buf), pattern, v);
  return buf;
}

// largest "nice" step (1/2/2.5/5 x 10^k) giving at most `max_ticks` ticks
double nice_step(double range, int max_ticks) {
  if (!(range > 0.0)) {
    return 1.0;
  }
  const double raw = range / max_ticks;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double mult : {1.0, 2.0, 2.5, 5.0, 10.0}) {
    if (mag * mult >= raw) {
      return mag * mult;
    }
  }
  return mag * 10.0;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

} // namespace

void emit_plot_svg(const std::string& path, const std::string& title,
                   const std::string& x_label, const std::string& y_label,
                   const std::vector<PlotSeries>& series,
                   const std::vector<double>& vertical_guides) {
  bool any_points = false;
  for (const auto& s : series) {
    any_points = any_points || !s.x.empty();
  }
  if (!any_points) {
    throw ConfigError("emit_plot_svg: no points to plot");
  }

  double x_min = std::numeric_limits<double>::infinity();
  double x_max = -x_min;
  double y_min = std::numeric_limits<double>::infinity();
  double y_max = -y_min;
  for (const auto& s : series) {
    for (double v : s.x) {
      x_min = std::min(x_min, v);
      x_max = std::max(x_max, v);
    }
    for (double v : s.y) {
      y_min = std::min(y_min, v);
      y_max = std::max(y_max, v);
    }
  }
  for (double g : vertical_guides) {
    x_min = std::min(x_min, g);
    x_max = std::max(x_max, g);
  }
  if (x_max - x_min < 1e-12) {
    x_min -= 1.0;
    x_max += 1.0;
  }
  if (y_max - y_min < 1e-12) {
    y_min -= 0.05;
    y_max += 0.05;
  }
  const double x_pad = 0.04 * (x_max - x_min);
  const double y_pad = 0.06 * (y_max - y_min);
  x_min -= x_pad;
  x_max += x_pad;
  y_min -= y_pad;
  y_max += y_pad;

  const auto px = [&](double x) {
    return kLeft + (x - x_min) / (x_max - x_min) * (kRight - kLeft);
  };
  const auto py = [&](double y) {
    return kBottom - (y - y_min) / (y_max - y_min) * (kBottom - kTop);
  };

  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot write plot file: " + path);
  }

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(kWidth, "%.0f")
      << "\" height=\"" << fmt(kHeight, "%.0f") << "\" viewBox=\"0 0 "
      << fmt(kWidth, "%.0f") << " " << fmt(kHeight, "%.0f") << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << fmt((kLeft + kRight) / 2) << "\" y=\"28\" "
      << "font-family=\"sans-serif\" font-size=\"17\" text-anchor=\"middle\">"
      << xml_escape(title) << "</text>\n";

  // grid and ticks
  const double x_step = nice_step(x_max - x_min, 8);
  const double y_step = nice_step(y_max - y_min, 8);
  out << "<g font-family=\"sans-serif\" font-size=\"12\" fill=\"#333\">\n";
  for (double t = std::ceil(x_min / x_step) * x_step; t <= x_max + 1e-9;
       t += x_step) {
    const double x = px(t);
    out << "<line x1=\"" << fmt(x) << "\" y1=\"" << fmt(kTop) << "\" x2=\""
        << fmt(x) << "\" y2=\"" << fmt(kBottom)
        << "\" stroke=\"#e0e0e0\" stroke-width=\"1\"/>\n";
    out << "<text x=\"" << fmt(x) << "\" y=\"" << fmt(kBottom + 18)
        << "\" text-anchor=\"middle\">" << fmt(t, "%.6g") << "</text>\n";
  }
  for (double t = std::ceil(y_min / y_step) * y_step; t <= y_max + 1e-9;
       t += y_step) {
    const double y = py(t);
    out << "<line x1=\"" << fmt(kLeft) << "\" y1=\"" << fmt(y) << "\" x2=\""
        << fmt(kRight) << "\" y2=\"" << fmt(y)
        << "\" stroke=\"#e0e0e0\" stroke-width=\"1\"/>\n";
    out << "<text x=\"" << fmt(kLeft - 8) << "\" y=\"" << fmt(y + 4)
        << "\" text-anchor=\"end\">" << fmt(t, "%.6g") << "</text>\n";
  }
  out << "</g>\n";

  // guides
  for (double g : vertical_guides) {
    const double x = px(g);
    out << "<line x1=\"" << fmt(x) << "\" y1=\"" << fmt(kTop) << "\" x2=\""
        << fmt(x) << "\" y2=\"" << fmt(kBottom)
        << "\" stroke=\"#888888\" stroke-width=\"1\" stroke-dasharray=\"5,4\"/>\n";
    out << "<text x=\"" << fmt(x + 3) << "\" y=\"" << fmt(kTop + 12)
        << "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"#555\">"
        << fmt(g, "%.6g") << "</text>\n";
  }

  // frame
  out << "<rect x=\"" << fmt(kLeft) << "\" y=\"" << fmt(kTop) << "\" width=\""
      << fmt(kRight - kLeft) << "\" height=\"" << fmt(kBottom - kTop)
      << "\" fill=\"none\" stroke=\"#333\" stroke-width=\"1\"/>\n";

  // series
  for (std::size_t i = 0; i < series.size(); ++i) {
    const PlotSeries& s = series[i];
    if (s.x.empty()) {
      continue;
    }
    const char* color = kPalette[i % kPaletteSize];
    if (s.x.size() > 1) {
      out << "<polyline fill=\"none\" stroke=\"" << color
          << "\" stroke-width=\"1.8\" points=\"";
      for (std::size_t k = 0; k < s.x.size(); ++k) {
        out << fmt(px(s.x[k])) << "," << fmt(py(s.y[k])) << " ";
      }
      out << "\"/>\n";
    }
    for (std::size_t k = 0; k < s.x.size(); ++k) {
      out << "<circle cx=\"" << fmt(px(s.x[k])) << "\" cy=\"" << fmt(py(s.y[k]))
          << "\" r=\"2.4\" fill=\"" << color << "\"/>\n";
    }
  }

  // legend
  out << "<g font-family=\"sans-serif\" font-size=\"12\">\n";
  for (std::size_t i = 0; i < series.size(); ++i) {
    const double y = kTop + 14 + 18.0 * static_cast<double>(i);
    const char* color = kPalette[i % kPaletteSize];
    out << "<line x1=\"" << fmt(kRight + 14) << "\" y1=\"" << fmt(y - 4)
        << "\" x2=\"" << fmt(kRight + 38) << "\" y2=\"" << fmt(y - 4)
        << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << fmt(kRight + 44) << "\" y=\"" << fmt(y) << "\">"
        << xml_escape(series[i].label) << "</text>\n";
  }
  out << "</g>\n";

  // axis labels
  out << "<text x=\"" << fmt((kLeft + kRight) / 2) << "\" y=\""
      << fmt(kHeight - 14)
      << "\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\">"
      << xml_escape(x_label) << "</text>\n";
  out << "<text x=\"20\" y=\"" << fmt((kTop + kBottom) / 2)
      << "\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\" "
      << "transform=\"rotate(-90 20 " << fmt((kTop + kBottom) / 2) << ")\">"
      << xml_escape(y_label) << "</text>\n";
  out << "</svg>\n";
  if (!out) {
    throw IoError("failed writing plot file: " + path);
  }
}

} // namespace aerocov
