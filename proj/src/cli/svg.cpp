#include "nlpc/cli/svg.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace nlpc::cli {

namespace {

constexpr double kWidth = 640, kHeight = 480;
constexpr double kLeft = 70, kRight = 20, kTop = 40, kBottom = 55;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '<')
      out += "&lt;";
    else if (c == '>')
      out += "&gt;";
    else if (c == '&')
      out += "&amp;";
    else
      out += c;
  }
  return out;
}

}  // namespace

SvgPlot::SvgPlot(std::string title, std::string xlabel, std::string ylabel,
                 std::pair<double, double> xrange, std::pair<double, double> yrange)
    : title_(std::move(title)), xlabel_(std::move(xlabel)), ylabel_(std::move(ylabel)),
      xr_(xrange), yr_(yrange) {
  if (!(xr_.second > xr_.first)) xr_ = {xr_.first - 1.0, xr_.first + 1.0};
  if (!(yr_.second > yr_.first)) yr_ = {yr_.first - 1.0, yr_.first + 1.0};
}

double SvgPlot::px(double x) const {
  return kLeft + (x - xr_.first) / (xr_.second - xr_.first) * (kWidth - kLeft - kRight);
}

double SvgPlot::py(double y) const {
  return kHeight - kBottom - (y - yr_.first) / (yr_.second - yr_.first) * (kHeight - kTop - kBottom);
}

void SvgPlot::polyline(const std::vector<std::pair<double, double>>& pts, const std::string& color,
                       double width) {
  std::string run;
  auto flush = [&] {
    if (!run.empty())
      body_ += "<polyline fill=\"none\" stroke=\"" + color + "\" stroke-width=\"" + num(width) +
               "\" points=\"" + run + "\"/>\n";
    run.clear();
  };
  for (const auto& [x, y] : pts) {
    if (std::isnan(x) || std::isnan(y)) {
      flush();
      continue;
    }
    if (!run.empty()) run += ' ';
    run += num(px(x)) + "," + num(py(y));
  }
  flush();
}

void SvgPlot::markers(const std::vector<std::pair<double, double>>& pts, const std::string& color,
                      double radius) {
  for (const auto& [x, y] : pts)
    body_ += "<circle cx=\"" + num(px(x)) + "\" cy=\"" + num(py(y)) + "\" r=\"" + num(radius) +
             "\" fill=\"" + color + "\"/>\n";
}

void SvgPlot::cell(double x0, double y0, double x1, double y1, const std::string& color) {
  const double a = px(x0), b = px(x1), c = py(y1), d = py(y0);
  body_ += "<rect x=\"" + num(std::min(a, b)) + "\" y=\"" + num(std::min(c, d)) + "\" width=\"" +
           num(std::abs(b - a)) + "\" height=\"" + num(std::abs(d - c)) + "\" fill=\"" + color +
           "\"/>\n";
}

void SvgPlot::legend(const std::string& label, const std::string& color) {
  legend_.emplace_back(label, color);
}

std::string SvgPlot::str() const {
  std::string s;
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) + "\" height=\"" +
       num(kHeight) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s += "<text x=\"" + num(kWidth / 2) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" +
       escape(title_) + "</text>\n";
  s += "<svg x=\"" + num(kLeft) + "\" y=\"" + num(kTop) + "\" width=\"" +
       num(kWidth - kLeft - kRight) + "\" height=\"" + num(kHeight - kTop - kBottom) +
       "\" viewBox=\"" + num(kLeft) + " " + num(kTop) + " " + num(kWidth - kLeft - kRight) + " " +
       num(kHeight - kTop - kBottom) + "\">\n" + body_ + "</svg>\n";
  s += "<rect x=\"" + num(kLeft) + "\" y=\"" + num(kTop) + "\" width=\"" +
       num(kWidth - kLeft - kRight) + "\" height=\"" + num(kHeight - kTop - kBottom) +
       "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double x = xr_.first + (xr_.second - xr_.first) * i / 4.0;
    const double y = yr_.first + (yr_.second - yr_.first) * i / 4.0;
    s += "<text x=\"" + num(px(x)) + "\" y=\"" + num(kHeight - kBottom + 16) +
         "\" text-anchor=\"middle\">" + tick(x) + "</text>\n";
    s += "<text x=\"" + num(kLeft - 6) + "\" y=\"" + num(py(y) + 4) + "\" text-anchor=\"end\">" +
         tick(y) + "</text>\n";
  }
  s += "<text x=\"" + num(kWidth / 2) + "\" y=\"" + num(kHeight - 12) + "\" text-anchor=\"middle\">" +
       escape(xlabel_) + "</text>\n";
  s += "<text x=\"16\" y=\"" + num(kHeight / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " +
       num(kHeight / 2) + ")\">" + escape(ylabel_) + "</text>\n";
  double ly = kTop + 16;
  for (const auto& [label, color] : legend_) {
    s += "<rect x=\"" + num(kWidth - kRight - 110) + "\" y=\"" + num(ly - 9) +
         "\" width=\"10\" height=\"10\" fill=\"" + color + "\"/>\n";
    s += "<text x=\"" + num(kWidth - kRight - 95) + "\" y=\"" + num(ly) + "\">" + escape(label) +
         "</text>\n";
    ly += 16;
  }
  s += "</svg>\n";
  return s;
}

}  // namespace nlpc::cli
