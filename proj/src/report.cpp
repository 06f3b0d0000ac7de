#include "modsi/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace modsi {
namespace {

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
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

}  // namespace

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << "snr_db,mse_bl_db,mse_coef_db,n_fail,n_trials\n";
  char buf[160];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.6f,%.6f,%.6f,%zu,%zu\n", r.snr_db, r.mse_bl_db, r.mse_coef_db, r.n_fail,
                  r.n_trials);
    os << buf;
  }
}

std::vector<Curve> sweep_curves(const std::vector<SweepRow>& rows, const std::string& suffix) {
  Curve bl{"BL error" + suffix, {}, {}};
  Curve coef{"coefficient error" + suffix, {}, {}};
  for (const auto& r : rows) {
    bl.x.push_back(r.snr_db);
    bl.y.push_back(r.mse_bl_db);
    coef.x.push_back(r.snr_db);
    coef.y.push_back(r.mse_coef_db);
  }
  return {bl, coef};
}

void write_svg(std::ostream& os, const std::string& title, const std::string& xlabel, const std::string& ylabel,
               const std::vector<Curve>& curves) {
  constexpr double W = 640, H = 420, left = 70, right = 180, top = 40, bottom = 50;
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& c : curves)
    for (std::size_t i = 0; i < c.x.size(); ++i) {
      if (!std::isfinite(c.x[i]) || !std::isfinite(c.y[i])) continue;
      x0 = std::min(x0, c.x[i]);
      x1 = std::max(x1, c.x[i]);
      y0 = std::min(y0, c.y[i]);
      y1 = std::max(y1, c.y[i]);
    }
  if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (x1 == x0) x0 -= 1, x1 += 1;
  if (y1 == y0) y0 -= 1, y1 += 1;
  const double pad = 0.05 * (y1 - y0);
  y0 -= pad;
  y1 += pad;
  const double pw = W - left - right, ph = H - top - bottom;
  auto px = [&](double x) { return left + (x - x0) / (x1 - x0) * pw; };
  auto py = [&](double y) { return top + (y1 - y) / (y1 - y0) * ph; };

  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << escape(title) << "</text>\n";
  os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    const double xv = x0 + (x1 - x0) * i / 5.0, yv = y0 + (y1 - y0) * i / 5.0;
    os << "<text x=\"" << fmt("%.1f", px(xv)) << "\" y=\"" << H - bottom + 16 << "\" text-anchor=\"middle\">"
       << fmt("%.4g", xv) << "</text>\n";
    os << "<text x=\"" << left - 6 << "\" y=\"" << fmt("%.1f", py(yv) + 4) << "\" text-anchor=\"end\">"
       << fmt("%.4g", yv) << "</text>\n";
    os << "<line x1=\"" << left << "\" x2=\"" << left + pw << "\" y1=\"" << fmt("%.1f", py(yv)) << "\" y2=\""
       << fmt("%.1f", py(yv)) << "\" stroke=\"#ddd\"/>\n";
  }
  os << "<text x=\"" << left + pw / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\">" << escape(xlabel)
     << "</text>\n";
  os << "<text transform=\"translate(18," << top + ph / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
     << escape(ylabel) << "</text>\n";
  for (std::size_t c = 0; c < curves.size(); ++c) {
    const char* color = colors[c % 6];
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < curves[c].x.size(); ++i)
      if (std::isfinite(curves[c].y[i]))
        os << fmt("%.1f", px(curves[c].x[i])) << "," << fmt("%.1f", py(curves[c].y[i])) << " ";
    os << "\"/>\n";
    const double ly = top + 16 + 18.0 * static_cast<double>(c);
    os << "<line x1=\"" << left + pw + 10 << "\" x2=\"" << left + pw + 30 << "\" y1=\"" << ly << "\" y2=\"" << ly
       << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << left + pw + 36 << "\" y=\"" << ly + 4 << "\">" << escape(curves[c].label) << "</text>\n";
  }
  os << "</svg>\n";
}

void write_demo_csv(std::ostream& os, const Acquisition& acq, double lambda) {
  os << "t,x,y,fold_y\n";
  char buf[160];
  for (std::size_t k = 0; k < acq.y.size(); ++k) {
    const double y = acq.y.values[k];
    std::snprintf(buf, sizeof buf, "%.9g,%.12g,%.12g,%.12g\n", acq.y.time(k), acq.x.values[k] / acq.scale, y,
                  fold(y, lambda));
    os << buf;
  }
}

}  // namespace modsi
