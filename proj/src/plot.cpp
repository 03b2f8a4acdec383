#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <string>

#include "optex/harness.hpp"

namespace optex {

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 160.0;
constexpr double kTop = 30.0;
constexpr double kBottom = 50.0;

constexpr const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                   "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

double value_of(const TraceRow& r, PlotQuantity q) {
  switch (q) {
    case PlotQuantity::SinAngle: return r.sin_angle;
    case PlotQuantity::RelResStandard: return r.rel_res_standard;
    case PlotQuantity::RelResRefined: return r.rel_res_refined;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

std::string render_plot_svg(const std::vector<TraceRow>& rows, PlotQuantity quantity) {
  if (rows.empty()) throw Error(ErrorKind::PreconditionViolated, "no trace rows to plot");

  // Strategies in order of first appearance.
  std::vector<StrategyTag> order;
  for (const auto& r : rows) {
    if (std::find(order.begin(), order.end(), r.strategy) == order.end()) order.push_back(r.strategy);
  }

  Index kmax = 1;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& r : rows) {
    kmax = std::max(kmax, r.k);
    const double v = value_of(r, quantity);
    if (std::isfinite(v) && v > 0.0) {
      lo = std::min(lo, std::log10(v));
      hi = std::max(hi, std::log10(v));
    }
  }
  if (!std::isfinite(lo)) {
    lo = -1.0;
    hi = 0.0;
  }
  lo = std::floor(lo);
  hi = std::ceil(hi);
  if (hi <= lo) hi = lo + 1.0;

  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  auto px = [&](double k) { return kLeft + pw * k / static_cast<double>(kmax); };
  auto py = [&](double lg) { return kTop + ph * (hi - lg) / (hi - lo); };

  std::string s;
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(kWidth) + "\" height=\"" + fmt(kHeight) +
       "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s += "<rect x=\"" + fmt(kLeft) + "\" y=\"" + fmt(kTop) + "\" width=\"" + fmt(pw) + "\" height=\"" + fmt(ph) +
       "\" fill=\"none\" stroke=\"black\"/>\n";

  const int step = std::max(1, static_cast<int>(std::ceil((hi - lo) / 10.0)));
  for (int e = static_cast<int>(lo); e <= static_cast<int>(hi); e += step) {
    const double y = py(e);
    s += "<line x1=\"" + fmt(kLeft) + "\" y1=\"" + fmt(y) + "\" x2=\"" + fmt(kLeft + pw) + "\" y2=\"" + fmt(y) +
         "\" stroke=\"#dddddd\"/>\n";
    s += "<text x=\"" + fmt(kLeft - 6) + "\" y=\"" + fmt(y + 4) + "\" text-anchor=\"end\">1e" + std::to_string(e) +
         "</text>\n";
  }
  const Index kstep = std::max<Index>(1, (kmax + 9) / 10);
  for (Index k = 0; k <= kmax; k += kstep) {
    s += "<text x=\"" + fmt(px(static_cast<double>(k))) + "\" y=\"" + fmt(kTop + ph + 18) +
         "\" text-anchor=\"middle\">" + std::to_string(k) + "</text>\n";
  }
  s += "<text x=\"" + fmt(kLeft + pw / 2) + "\" y=\"" + fmt(kHeight - 12) + "\" text-anchor=\"middle\">k</text>\n";
  s += "<text x=\"16\" y=\"" + fmt(kTop + ph / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " +
       fmt(kTop + ph / 2) + ")\">" + to_string(quantity) + "</text>\n";

  for (std::size_t c = 0; c < order.size(); ++c) {
    const char* color = kColors[c % (sizeof kColors / sizeof kColors[0])];
    std::string points;
    for (const auto& r : rows) {
      if (r.strategy != order[c]) continue;
      const double v = value_of(r, quantity);
      if (!std::isfinite(v) || v <= 0.0) continue;
      points += fmt(px(static_cast<double>(r.k))) + "," + fmt(py(std::log10(v))) + " ";
    }
    if (!points.empty()) {
      points.pop_back();
      s += "<polyline fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"1.5\" points=\"" + points +
           "\"/>\n";
    }
    const double ly = kTop + 14.0 + 18.0 * static_cast<double>(c);
    const double lx = kLeft + pw + 12.0;
    s += "<line x1=\"" + fmt(lx) + "\" y1=\"" + fmt(ly - 4) + "\" x2=\"" + fmt(lx + 24) + "\" y2=\"" + fmt(ly - 4) +
         "\" stroke=\"" + color + "\" stroke-width=\"1.5\"/>\n";
    s += "<text x=\"" + fmt(lx + 30) + "\" y=\"" + fmt(ly) + "\">" + display_label(order[c]) + "</text>\n";
  }
  s += "</svg>\n";
  return s;
}

void emit_plot(const std::vector<TraceRow>& rows, const std::string& path, PlotQuantity quantity) {
  const std::string svg = render_plot_svg(rows, quantity);
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::IoError, "cannot write '" + path + "'");
  f << svg;
  f.close();
  if (!f) throw Error(ErrorKind::IoError, "write failed for '" + path + "'");
}

}  // namespace optex
