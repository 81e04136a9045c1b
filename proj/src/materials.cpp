#include "nlpc/materials.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include "nlpc/errors.hpp"
#include "nlpc/units.hpp"

namespace nlpc {

namespace {

double oscillator_index(const OscillatorIndex& fit, double lambda) {
  const double e = kHcEvMeters / lambda;
  const double e0 = fit.e0, ed = fit.ed, eg = fit.e_gap;
  const double eta = kPi * ed / (2.0 * e0 * e0 * e0 * (e0 * e0 - eg * eg));
  const double ef2 = 2.0 * e0 * e0 - eg * eg;
  const double e2 = e * e;
  const double n2 = 1.0 + ed / e0 + ed * e2 / (e0 * e0 * e0) +
                    eta / kPi * e2 * e2 * std::log((ef2 - e2) / (eg * eg - e2));
  return std::sqrt(n2) + fit.index_offset;
}

// Fritsch-Carlson tangents; shape preserving, so interpolated values stay
// between neighbouring table entries.
std::vector<double> pchip_slopes(const std::vector<std::pair<double, double>>& p) {
  const std::size_t n = p.size();
  std::vector<double> h(n - 1), d(n - 1), m(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    h[i] = p[i + 1].first - p[i].first;
    d[i] = (p[i + 1].second - p[i].second) / h[i];
  }
  if (n == 2) {
    m[0] = m[1] = d[0];
    return m;
  }
  for (std::size_t k = 1; k + 1 < n; ++k) {
    if (d[k - 1] * d[k] <= 0.0) continue;
    const double w1 = 2.0 * h[k] + h[k - 1];
    const double w2 = h[k] + 2.0 * h[k - 1];
    m[k] = (w1 + w2) / (w1 / d[k - 1] + w2 / d[k]);
  }
  auto edge = [](double h0, double h1, double d0, double d1) {
    double s = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if (s * d0 <= 0.0) return 0.0;
    if (d0 * d1 <= 0.0 && std::abs(s) > std::abs(3.0 * d0)) return 3.0 * d0;
    return s;
  };
  m[0] = edge(h[0], h[1], d[0], d[1]);
  m[n - 1] = edge(h[n - 2], h[n - 3], d[n - 2], d[n - 3]);
  return m;
}

double table_index(const TableIndex& t, const std::vector<double>& slopes, double lambda) {
  const auto& p = t.points;
  auto it = std::upper_bound(p.begin(), p.end(), lambda,
                             [](double x, const auto& e) { return x < e.first; });
  std::size_t i = it == p.begin() ? 0 : static_cast<std::size_t>(it - p.begin()) - 1;
  if (i + 1 >= p.size()) i = p.size() - 2;
  const double x0 = p[i].first, x1 = p[i + 1].first;
  const double y0 = p[i].second, y1 = p[i + 1].second;
  const double h = x1 - x0;
  const double s = (lambda - x0) / h;
  if (t.kind == Interpolation::Linear || p.size() == 2) return y0 + s * (y1 - y0);
  const double s2 = s * s, s3 = s2 * s;
  return (2 * s3 - 3 * s2 + 1) * y0 + (s3 - 2 * s2 + s) * h * slopes[i] +
         (-2 * s3 + 3 * s2) * y1 + (s3 - s2) * h * slopes[i + 1];
}

}  // namespace

MaterialModel::MaterialModel(Model model, double lambda_min, double lambda_max, std::string name)
    : model_(std::move(model)),
      lambda_min_(lambda_min),
      lambda_max_(lambda_max),
      name_(std::move(name)) {
  if (auto* t = std::get_if<TableIndex>(&model_)) {
    if (t->points.size() < 2) throw DomainError("material table needs at least 2 entries");
    for (std::size_t i = 0; i + 1 < t->points.size(); ++i)
      if (!(t->points[i + 1].first > t->points[i].first))
        throw DomainError("material table wavelengths must be strictly increasing");
    slopes_ = pchip_slopes(t->points);
  }
  if (!(lambda_min_ >= 0.0) || !(lambda_max_ > lambda_min_))
    throw DomainError("material validity range is empty");
  validate();
}

MaterialModel MaterialModel::constant(double n, std::string name) {
  return MaterialModel(ConstantIndex{n}, 0.0, std::numeric_limits<double>::infinity(),
                       std::move(name));
}

MaterialModel MaterialModel::oscillator(OscillatorIndex fit, double lambda_min, double lambda_max,
                                        std::string name) {
  if (!(fit.e0 > fit.e_gap) || !(fit.ed > 0.0) || !(fit.e_gap > 0.0))
    throw DomainError("oscillator fit requires 0 < e_gap < e0 and ed > 0");
  if (kHcEvMeters / lambda_min >= fit.e_gap)
    throw DomainError("oscillator validity range reaches above the band gap");
  return MaterialModel(fit, lambda_min, lambda_max, std::move(name));
}

MaterialModel MaterialModel::table(std::vector<std::pair<double, double>> points,
                                   Interpolation kind, std::string name) {
  if (points.size() < 2) throw DomainError("material table needs at least 2 entries");
  const double lo = points.front().first;
  const double hi = points.back().first;
  return MaterialModel(TableIndex{std::move(points), kind}, lo, hi, std::move(name));
}

void MaterialModel::validate() const {
  auto check = [this](double n) {
    if (!(n >= 1.0)) {
      std::ostringstream os;
      os << "material '" << name_ << "' has index " << n << " < 1";
      throw DomainError(os.str());
    }
  };
  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, ConstantIndex>) {
          check(m.n);
        } else if constexpr (std::is_same_v<T, TableIndex>) {
          for (const auto& [l, n] : m.points) check(n);
        } else {
          for (int i = 0; i <= 64; ++i)
            check(oscillator_index(m, lambda_min_ + (lambda_max_ - lambda_min_) * i / 64.0));
        }
      },
      model_);
}

double MaterialModel::index(double lambda_vac) const {
  if (!(lambda_vac >= lambda_min_ && lambda_vac <= lambda_max_)) {
    std::ostringstream os;
    os << "wavelength " << lambda_vac * 1e9 << " nm outside validity range of material '"
       << name_ << "' [" << lambda_min_ * 1e9 << ", " << lambda_max_ * 1e9 << "] nm";
    throw OutOfRange(os.str());
  }
  return std::visit(
      [&](const auto& m) -> double {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, ConstantIndex>)
          return m.n;
        else if constexpr (std::is_same_v<T, TableIndex>)
          return table_index(m, slopes_, lambda_vac);
        else
          return oscillator_index(m, lambda_vac);
      },
      model_);
}

namespace {

// Composition-dependent oscillator parameters for Al(x)Ga(1-x)As.
OscillatorIndex algaas_fit(double x) {
  OscillatorIndex fit;
  fit.e0 = 3.65 + 0.871 * x + 0.179 * x * x;
  fit.ed = 36.1 - 2.45 * x;
  fit.e_gap = 1.424 + 1.266 * x + 0.26 * x * x;
  return fit;
}

MaterialModel bbo_table(bool extraordinary) {
  // Sellmeier form (lambda in micrometers), tabulated so the preset stays a
  // plain Table model.
  std::vector<std::pair<double, double>> pts;
  for (int nm = 400; nm <= 1700; nm += 25) {
    const double l = nm * 1e-3;
    const double l2 = l * l;
    const double n2 = extraordinary ? 2.3730 + 0.0128 / (l2 - 0.0156) - 0.0044 * l2
                                    : 2.7405 + 0.0184 / (l2 - 0.0179) - 0.0155 * l2;
    pts.emplace_back(nm * 1e-9, std::sqrt(n2));
  }
  return MaterialModel::table(std::move(pts), Interpolation::MonotoneCubic,
                              extraordinary ? "bbo-extraordinary" : "bbo-ordinary");
}

}  // namespace

MaterialModel builtin_material(std::string_view name) {
  if (name == "air") return MaterialModel::constant(1.0, "air");
  if (name == "algaas-x0.4") {
    OscillatorIndex fit = algaas_fit(0.4);
    // Re-anchor so the pump-wavelength index is exactly 3.40.
    fit.index_offset = 3.40 - oscillator_index(fit, 750e-9);
    return MaterialModel::oscillator(fit, 680e-9, 2000e-9, "algaas-x0.4");
  }
  if (name == "bbo-ordinary") return bbo_table(false);
  if (name == "bbo-extraordinary") return bbo_table(true);
  throw UnknownMaterial("unknown material preset '" + std::string(name) + "'");
}

std::vector<std::string> builtin_material_names() {
  return {"air", "algaas-x0.4", "bbo-ordinary", "bbo-extraordinary"};
}

}  // namespace nlpc
