#pragma once

#include <string>
#include <utility>
#include <vector>

namespace nlpc::cli {

/// Minimal fixed-size SVG chart: a framed data area with tick labels,
/// polylines, point markers and filled cells. Coordinates are in data units.
class SvgPlot {
 public:
  SvgPlot(std::string title, std::string xlabel, std::string ylabel, std::pair<double, double> xrange,
          std::pair<double, double> yrange);

  /// Breaks the line wherever a y value is NaN.
  void polyline(const std::vector<std::pair<double, double>>& pts, const std::string& color,
                double width = 1.5);
  void markers(const std::vector<std::pair<double, double>>& pts, const std::string& color,
               double radius = 3.0);
  void cell(double x0, double y0, double x1, double y1, const std::string& color);
  void legend(const std::string& label, const std::string& color);

  std::string str() const;

 private:
  double px(double x) const;
  double py(double y) const;

  std::string title_, xlabel_, ylabel_;
  std::pair<double, double> xr_, yr_;
  std::string body_;
  std::vector<std::pair<std::string, std::string>> legend_;
};

}  // namespace nlpc::cli
