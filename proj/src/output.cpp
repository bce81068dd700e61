#include "floquet/output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace floquet {

std::string format_number(double x) {
  if (x == 0.0) x = 0.0;  // normalize -0
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.14e", x);
  return buf;
}

SvgPlot::SvgPlot(std::string title, std::string x_label, std::string y_label)
    : title_(std::move(title)), x_label_(std::move(x_label)), y_label_(std::move(y_label)) {}

void SvgPlot::add_polyline(const std::vector<double>& x, const std::vector<double>& y,
                           const std::string& color) {
  series_.push_back({x, y, color, true, 0.0});
}

void SvgPlot::add_points(const std::vector<double>& x, const std::vector<double>& y,
                         const std::string& color, double radius) {
  series_.push_back({x, y, color, false, radius});
}

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

std::string SvgPlot::render(int width, int height) const {
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const auto& s : series_) {
    for (double v : s.x) xmin = std::min(xmin, v), xmax = std::max(xmax, v);
    for (double v : s.y) ymin = std::min(ymin, v), ymax = std::max(ymax, v);
  }
  if (!(xmin < xmax)) xmin -= 1.0, xmax += 1.0;
  if (!(ymin < ymax)) ymin -= 1.0, ymax += 1.0;
  const double pad_y = 0.05 * (ymax - ymin);
  ymin -= pad_y;
  ymax += pad_y;

  const double left = 60, right = 20, top = 40, bottom = 50;
  const double pw = width - left - right, ph = height - top - bottom;
  const auto px = [&](double v) { return left + (v - xmin) / (xmax - xmin) * pw; };
  const auto py = [&](double v) { return top + (ymax - v) / (ymax - ymin) * ph; };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
     << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<rect x=\"" << fmt(left) << "\" y=\"" << fmt(top) << "\" width=\"" << fmt(pw)
     << "\" height=\"" << fmt(ph) << "\" fill=\"none\" stroke=\"black\"/>\n";
  os << "<text x=\"" << fmt(width / 2.0) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">"
     << title_ << "</text>\n";
  os << "<text x=\"" << fmt(left + pw / 2) << "\" y=\"" << fmt(height - 12.0)
     << "\" text-anchor=\"middle\" font-size=\"13\">" << x_label_ << "</text>\n";
  os << "<text x=\"16\" y=\"" << fmt(top + ph / 2) << "\" font-size=\"13\" transform=\"rotate(-90 16 "
     << fmt(top + ph / 2) << ")\" text-anchor=\"middle\">" << y_label_ << "</text>\n";
  for (int t = 0; t <= 4; ++t) {
    const double xv = xmin + (xmax - xmin) * t / 4.0;
    const double yv = ymin + (ymax - ymin) * t / 4.0;
    os << "<text x=\"" << fmt(px(xv)) << "\" y=\"" << fmt(top + ph + 16)
       << "\" text-anchor=\"middle\" font-size=\"11\">" << fmt(xv) << "</text>\n";
    os << "<text x=\"" << fmt(left - 6) << "\" y=\"" << fmt(py(yv) + 4)
       << "\" text-anchor=\"end\" font-size=\"11\">" << fmt(yv) << "</text>\n";
  }
  for (const auto& s : series_) {
    if (s.line) {
      os << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\"";
      for (std::size_t i = 0; i < s.x.size(); ++i) os << fmt(px(s.x[i])) << ',' << fmt(py(s.y[i])) << ' ';
      os << "\"/>\n";
    } else {
      for (std::size_t i = 0; i < s.x.size(); ++i)
        os << "<circle cx=\"" << fmt(px(s.x[i])) << "\" cy=\"" << fmt(py(s.y[i])) << "\" r=\""
           << fmt(s.radius) << "\" fill=\"none\" stroke=\"" << s.color << "\"/>\n";
    }
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace floquet
