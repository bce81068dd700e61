#pragma once

#include <string>
#include <vector>

namespace floquet {

/// Fixed 15-significant-digit scientific notation ("-1.23456789012345e-03").
/// All CSV/JSON numeric output goes through this so runs are byte-identical.
std::string format_number(double x);

/// Minimal SVG line/scatter plot.
class SvgPlot {
 public:
  SvgPlot(std::string title, std::string x_label, std::string y_label);

  void add_polyline(const std::vector<double>& x, const std::vector<double>& y,
                    const std::string& color);
  void add_points(const std::vector<double>& x, const std::vector<double>& y,
                  const std::string& color, double radius = 3.0);

  std::string render(int width = 640, int height = 480) const;

 private:
  struct Series {
    std::vector<double> x, y;
    std::string color;
    bool line = true;
    double radius = 3.0;
  };
  std::string title_, x_label_, y_label_;
  std::vector<Series> series_;
};

}  // namespace floquet
