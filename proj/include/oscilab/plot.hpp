// Minimal SVG step plots on a logarithmic t axis. Output bytes depend only on
// the input (fixed-precision formatting, no timestamps).
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "oscilab/grid.hpp"

namespace oscilab::plot {

struct Curve {
  std::string label;
  std::vector<double> t;  // increasing, in (0, 1]
  std::vector<double> v;
};

namespace detail {

inline std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}

inline std::string escape(const std::string& s) {
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

inline const char* color(std::size_t i) {
  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#17becf"};
  return palette[i % 7];
}

}  // namespace detail

/// Each curve is drawn as a right-continuous step function: value v[i] on
/// [t[i], t[i+1]), the last value held to t = 1.
inline std::string render_svg(const std::vector<Curve>& curves, const std::string& title = "") {
  if (curves.empty()) throw ConfigError("plot needs at least one profile");
  const double W = 640, H = 400, L = 60, R = 150, T = 30, B = 40;
  double tmin = 1.0, vmin = 0.0, vmax = 0.0;
  for (const Curve& c : curves) {
    if (c.t.size() != c.v.size() || c.t.empty()) throw ConfigError("profile '" + c.label + "' is empty or ragged");
    for (double t : c.t)
      if (t > 0.0) tmin = std::min(tmin, t);
    for (double v : c.v) {
      vmin = std::min(vmin, v);
      vmax = std::max(vmax, v);
    }
  }
  if (!(tmin < 1.0)) tmin = 0.1;
  if (!(vmax > vmin)) vmax = vmin + 1.0;
  const double lo = std::log10(tmin), span = -lo;
  auto X = [&](double t) { return L + (W - L - R) * (std::log10(std::max(t, tmin)) - lo) / span; };
  auto Y = [&](double v) { return H - B - (H - T - B) * (v - vmin) / (vmax - vmin); };

  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 " << W
    << " " << H << "\">\n";
  s << "<rect x=\"0\" y=\"0\" width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
  if (!title.empty())
    s << "<text x=\"" << L << "\" y=\"18\" font-family=\"sans-serif\" font-size=\"13\">" << detail::escape(title)
      << "</text>\n";
  s << "<g stroke=\"black\" fill=\"none\"><line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\""
    << H - B << "\"/><line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B << "\"/></g>\n";
  for (int e = int(std::floor(lo)); e <= 0; ++e) {
    const double t = std::pow(10.0, e);
    if (t < tmin) continue;
    s << "<text x=\"" << detail::num(X(t)) << "\" y=\"" << H - B + 16
      << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">1e" << e << "</text>\n";
  }
  for (double v : {vmin, vmax})
    s << "<text x=\"" << L - 6 << "\" y=\"" << detail::num(Y(v) + 4)
      << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">" << detail::num(v) << "</text>\n";
  for (std::size_t i = 0; i < curves.size(); ++i) {
    const Curve& c = curves[i];
    s << "<path fill=\"none\" stroke-width=\"1.5\" stroke=\"" << detail::color(i) << "\" d=\"";
    for (std::size_t k = 0; k < c.t.size(); ++k) {
      const double x0 = X(c.t[k]), x1 = X(k + 1 < c.t.size() ? c.t[k + 1] : 1.0), y = Y(c.v[k]);
      s << (k == 0 ? "M" : "L") << detail::num(x0) << " " << detail::num(y) << " L" << detail::num(x1) << " "
        << detail::num(y) << " ";
    }
    s << "\"/>\n";
    const double ly = T + 16.0 * double(i) + 8.0;
    s << "<line x1=\"" << W - R + 10 << "\" y1=\"" << ly << "\" x2=\"" << W - R + 30 << "\" y2=\"" << ly
      << "\" stroke=\"" << detail::color(i) << "\" stroke-width=\"2\"/>";
    s << "<text x=\"" << W - R + 34 << "\" y=\"" << ly + 4 << "\" font-family=\"sans-serif\" font-size=\"11\">"
      << detail::escape(c.label) << "</text>\n";
  }
  s << "</svg>\n";
  return s.str();
}

inline void write_svg(const std::string& path, const std::vector<Curve>& curves, const std::string& title = "") {
  const std::string svg = render_svg(curves, title);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path);
  out << svg;
  if (!out) throw ConfigError("write failed: " + path);
}

}  // namespace oscilab::plot
