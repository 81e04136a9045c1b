#include "nlpc/bandstructure.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nlpc/errors.hpp"
#include "nlpc/parallel.hpp"

namespace nlpc {

std::string_view to_string(Polarization pol) { return pol == Polarization::TE ? "TE" : "TM"; }

Polarization parse_polarization(std::string_view text) {
  if (text == "TE" || text == "te" || text == "o") return Polarization::TE;
  if (text == "TM" || text == "tm" || text == "e") return Polarization::TM;
  throw ConfigError("unknown polarization '" + std::string(text) + "'");
}

LayeredStack::LayeredStack(MaterialModel material1, double thickness1, MaterialModel material2,
                           double thickness2)
    : material1_(std::move(material1)),
      material2_(std::move(material2)),
      a_(thickness1),
      b_(thickness2),
      period_(thickness1 + thickness2) {
  if (!(a_ > 0.0) || !(b_ > 0.0)) throw DomainError("layer thicknesses must be positive");
}

LayeredStack LayeredStack::from_period(MaterialModel material1, MaterialModel material2,
                                       double period, double fill) {
  if (!(period > 0.0)) throw DomainError("period must be positive");
  if (!(fill > 0.0 && fill < 1.0)) throw DomainError("fill fraction must lie in (0, 1)");
  const double a = fill * period;
  return LayeredStack(std::move(material1), a, std::move(material2), period - a);
}

std::pair<double, double> LayeredStack::indices(double omega) const {
  const double lambda = wavelength_from_omega(omega);
  return {material1_.index(lambda), material2_.index(lambda)};
}

std::complex<double> layer_kz(double n, double omega, double kpar) {
  const double k0n = n * omega / kSpeedOfLight;
  const double q = (k0n - kpar) * (k0n + kpar);
  if (q >= 0.0) return {std::sqrt(q), 0.0};
  return {0.0, std::sqrt(-q)};
}

Eigen::Matrix2d layer_matrix(double kz_squared, double thickness, double weight) {
  const double q = kz_squared;
  const double d = thickness;
  const double x = std::sqrt(std::abs(q)) * d;
  double c, s;  // cos(kd) and sin(kd)/k, continued to imaginary k
  if (x < 1e-6) {
    const double u = q * d * d;
    c = 1.0 - u / 2.0 + u * u / 24.0;
    s = d * (1.0 - u / 6.0 + u * u / 120.0);
  } else if (q > 0.0) {
    const double k = std::sqrt(q);
    c = std::cos(k * d);
    s = std::sin(k * d) / k;
  } else {
    const double kappa = std::sqrt(-q);
    c = std::cosh(kappa * d);
    s = std::sinh(kappa * d) / kappa;
  }
  Eigen::Matrix2d m;
  m << c, s * weight, -q * s / weight, c;
  return m;
}

namespace {

struct CellSetup {
  double n1, n2;
  double q1, q2;  // k_z^2 per layer
  double w1, w2;
};

CellSetup setup(const LayeredStack& stack, double omega, double kpar, Polarization pol) {
  const auto [n1, n2] = stack.indices(omega);
  const double k0 = omega / kSpeedOfLight;
  CellSetup s;
  s.n1 = n1;
  s.n2 = n2;
  s.q1 = (n1 * k0 - kpar) * (n1 * k0 + kpar);
  s.q2 = (n2 * k0 - kpar) * (n2 * k0 + kpar);
  s.w1 = pol == Polarization::TE ? 1.0 : n1 * n1;
  s.w2 = pol == Polarization::TE ? 1.0 : n2 * n2;
  return s;
}

}  // namespace

Eigen::Matrix2d unit_cell_matrix(const LayeredStack& stack, double omega, double kpar,
                                 Polarization pol) {
  const CellSetup s = setup(stack, omega, kpar, pol);
  return layer_matrix(s.q2, stack.thickness2(), s.w2) *
         layer_matrix(s.q1, stack.thickness1(), s.w1);
}

double half_trace(const LayeredStack& stack, double omega, double kpar, Polarization pol) {
  return 0.5 * unit_cell_matrix(stack, omega, kpar, pol).trace();
}

double half_trace_closed_form(const LayeredStack& stack, double omega, double kpar,
                              Polarization pol, CouplingSign sign) {
  const auto [n1, n2] = stack.indices(omega);
  const std::complex<double> k1 = layer_kz(n1, omega, kpar);
  const std::complex<double> k2 = layer_kz(n2, omega, kpar);
  const double period = stack.period();
  if (std::abs(k1) * period < 1e-12 || std::abs(k2) * period < 1e-12)
    throw DegenerateLayer("layer k_z vanishes (grazing resonance); closed form is singular");
  const std::complex<double> ratio =
      pol == Polarization::TE ? k1 / k2 : (n2 * n2 * k1) / (n1 * n1 * k2);
  const double shift = sign == CouplingSign::Minus ? -2.0 : 2.0;
  const double a = stack.thickness1(), b = stack.thickness2();
  const std::complex<double> v =
      std::cos(k1 * a + k2 * b) - 0.5 * (ratio + 1.0 / ratio + shift) * std::sin(k1 * a) * std::sin(k2 * b);
  return v.real();
}

BlochKz bloch_kz(const LayeredStack& stack, double omega, double kpar, Polarization pol) {
  const Eigen::Matrix2d t = unit_cell_matrix(stack, omega, kpar, pol);
  const double period = stack.period();
  BlochKz out;
  out.omega = omega;
  out.kpar = kpar;
  out.pol = pol;
  out.half_trace = 0.5 * t.trace();
  // With det(t) = 1 this equals 1 - half_trace^2 but keeps precision near band edges.
  const double diff = 0.5 * (t(0, 0) - t(1, 1));
  const double sin2 = -t(0, 1) * t(1, 0) - diff * diff;
  const double ht = out.half_trace;
  out.propagating = std::abs(ht) <= 1.0;
  if (out.propagating) {
    out.kz_reduced = std::atan2(std::sqrt(std::max(0.0, sin2)), ht) / period;
    out.attenuation = 0.0;
  } else {
    const double a = std::abs(ht);
    const double sh = sin2 < 0.0 ? std::sqrt(-sin2) : std::sqrt((a - 1.0) * (a + 1.0));
    out.attenuation = std::log(a + sh) / period;
    if (!(out.attenuation > 0.0)) out.attenuation = std::acosh(a) / period;
    out.kz_reduced = ht > 0.0 ? 0.0 : kPi / period;
  }
  return out;
}

std::vector<FrequencyInterval> stopbands_normal(const LayeredStack& stack, Polarization pol,
                                                double omega_lo, double omega_hi,
                                                int samples_per_fsr) {
  if (!(omega_lo > 0.0) || !(omega_hi > omega_lo))
    throw DomainError("stopband frequency range must satisfy 0 < lo < hi");
  if (samples_per_fsr < 100) throw DomainError("stopband resolution must be >= 100 per FSR");
  const auto [a1, a2] = stack.indices(omega_lo);
  const auto [b1, b2] = stack.indices(omega_hi);
  const double n_max = std::max({a1, a2, b1, b2});
  const double fsr = kPi * kSpeedOfLight / (n_max * stack.period());
  const auto samples = static_cast<std::size_t>(
      std::ceil((omega_hi - omega_lo) / fsr * samples_per_fsr)) + 1;
  const std::size_t n = std::max<std::size_t>(samples, 2);

  auto stop = [&](double w) { return std::abs(half_trace(stack, w, 0.0, pol)) > 1.0; };
  auto refine = [&](double pass_w, double stop_w) {
    // Keep the invariant stop(stop_w) && !stop(pass_w) and return the stop-side edge.
    while (std::abs(stop_w - pass_w) > 1e-10 * std::abs(stop_w)) {
      const double mid = 0.5 * (pass_w + stop_w);
      (stop(mid) ? stop_w : pass_w) = mid;
    }
    return stop_w;
  };

  std::vector<FrequencyInterval> out;
  double prev_w = omega_lo;
  bool prev_stop = stop(prev_w);
  double start = omega_lo;
  for (std::size_t i = 1; i < n; ++i) {
    const double w = omega_lo + (omega_hi - omega_lo) * static_cast<double>(i) / (n - 1);
    const bool s = stop(w);
    if (s && !prev_stop) start = refine(prev_w, w);
    if (!s && prev_stop) out.push_back({start, refine(w, prev_w)});
    prev_w = w;
    prev_stop = s;
  }
  if (prev_stop) out.push_back({start, omega_hi});
  return out;
}

EffectiveIndices effective_indices(double n1, double n2, double fill) {
  if (!(fill > 0.0 && fill < 1.0)) throw DomainError("fill fraction must lie in (0, 1)");
  EffectiveIndices e;
  e.n_o = std::sqrt(fill * n1 * n1 + (1.0 - fill) * n2 * n2);
  e.n_e = 1.0 / std::sqrt(fill / (n1 * n1) + (1.0 - fill) / (n2 * n2));
  return e;
}

double optimal_fill(double n1, double n2) {
  if (n1 == n2) throw NoBirefringence("equal layer indices give no form birefringence");
  auto objective = [&](double f) {
    const double no = std::sqrt(f * n1 * n1 + (1.0 - f) * n2 * n2);
    const double ne = 1.0 / std::sqrt(f / (n1 * n1) + (1.0 - f) / (n2 * n2));
    return no - ne;
  };
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = 0.0, hi = 1.0;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = objective(x1), f2 = objective(x2);
  while (hi - lo > 1e-7) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = objective(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = objective(x1);
    }
  }
  return 0.5 * (lo + hi);
}

BandDiagram band_diagram(const LayeredStack& stack, std::vector<double> omega_grid,
                         std::vector<double> kpar_grid, Polarization pol, unsigned threads) {
  if (omega_grid.empty() || kpar_grid.empty()) throw DomainError("band diagram grids are empty");
  if (!std::is_sorted(omega_grid.begin(), omega_grid.end()) ||
      !std::is_sorted(kpar_grid.begin(), kpar_grid.end()))
    throw DomainError("band diagram grids must be ascending");
  BandDiagram d;
  d.omega_grid = std::move(omega_grid);
  d.kpar_grid = std::move(kpar_grid);
  d.pol = pol;
  const std::size_t nk = d.kpar_grid.size();
  d.cells.resize(d.omega_grid.size() * nk);
  parallel_for(d.cells.size(), threads, [&](std::size_t idx) {
    const double w = d.omega_grid[idx / nk];
    const double k = d.kpar_grid[idx % nk];
    const BlochKz b = bloch_kz(stack, w, k, pol);
    d.cells[idx] = {b.propagating, b.attenuation, w > kSpeedOfLight * std::abs(k)};
  });
  return d;
}

}  // namespace nlpc
