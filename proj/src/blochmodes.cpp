#include "nlpc/blochmodes.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nlpc/errors.hpp"

namespace nlpc {

namespace {

constexpr cplx I{0.0, 1.0};

// (exp(x d) - 1) / x, continuous at x = 0.
cplx expm1_over(cplx x, double d) {
  const cplx xd = x * d;
  if (std::abs(xd) < 1e-5) return d * (1.0 + xd / 2.0 + xd * xd / 6.0 + xd * xd * xd / 24.0);
  return (std::exp(xd) - 1.0) / x;
}

cplx layer_field(const LayerWaves& l, double s) {
  return l.forward * std::exp(-I * l.kz * s) + l.backward * std::exp(I * l.kz * s);
}

cplx layer_scaled_derivative(const LayerWaves& l, double s) {
  return (-I * l.kz * l.forward * std::exp(-I * l.kz * s) +
          I * l.kz * l.backward * std::exp(I * l.kz * s)) /
         l.weight;
}

// Eigenvector of the real unimodular matrix t for eigenvalue lambda.
Eigen::Vector2cd eigenvector(const Eigen::Matrix2d& t, cplx lambda) {
  Eigen::Vector2cd u(t(0, 1), lambda - t(0, 0));
  Eigen::Vector2cd v(lambda - t(1, 1), t(1, 0));
  Eigen::Vector2cd best = u.norm() >= v.norm() ? u : v;
  return best / best.norm();
}

double state_flux(const Eigen::Vector2cd& s) { return -(std::conj(s(0)) * s(1)).imag(); }

// Flux relative to |f| |f'/w|: the sine of the phase lag between the two
// state components, zero for a standing wave.
double relative_flux(const Eigen::Vector2cd& s) {
  const double scale = std::abs(s(0)) * std::abs(s(1));
  return scale > 0.0 ? state_flux(s) / scale : 0.0;
}

// Phase the field accumulates across one cell. For a mode with nonzero flux
// arg(field) decreases monotonically, so each small step's principal phase
// difference is mapped into (-2 pi, 0].
double accumulated_phase(const std::array<LayerWaves, 2>& layers, bool monotone) {
  double total = 0.0;
  cplx prev = layer_field(layers[0], 0.0);
  for (const auto& l : layers) {
    const double kr = std::abs(l.kz.real());
    const auto steps =
        std::max<std::size_t>(16, static_cast<std::size_t>(std::ceil(kr * l.thickness / 0.25)));
    for (std::size_t i = 1; i <= steps; ++i) {
      const cplx cur = layer_field(l, l.thickness * static_cast<double>(i) / steps);
      double d = std::arg(cur / prev);
      if (monotone && d > 0.0) d -= 2.0 * kPi;
      total += d;
      prev = cur;
    }
  }
  return total;
}

int floor_band(double kz_ext, double period) {
  return static_cast<int>(std::floor(kz_ext * period / kPi + 1e-12));
}

double extended_from_band(int band, double theta, double period) {
  return band % 2 == 0 ? (band * kPi + theta) / period : ((band + 1) * kPi - theta) / period;
}

}  // namespace

cplx FieldProfile::field(double zz) const {
  const double m = std::floor(zz / period);
  const double local = zz - m * period;
  const LayerWaves& l = local < layers[1].z0 ? layers[0] : layers[1];
  return std::exp(-I * kz_extended * period * m) * layer_field(l, local - l.z0);
}

cplx FieldProfile::scaled_derivative(double zz) const {
  const double m = std::floor(zz / period);
  const double local = zz - m * period;
  const LayerWaves& l = local < layers[1].z0 ? layers[0] : layers[1];
  return std::exp(-I * kz_extended * period * m) * layer_scaled_derivative(l, local - l.z0);
}

cplx FieldProfile::periodic_part(double zz) const {
  return field(zz) * std::exp(I * kz_extended * zz);
}

double FieldProfile::flux() const {
  return -(std::conj(field(0.0)) * scaled_derivative(0.0)).imag();
}

double FieldProfile::mean_square() const {
  double sum = 0.0;
  for (const auto& l : layers) {
    const cplx k = l.kz, kb = std::conj(k);
    const cplx a = l.forward, b = l.backward;
    const double d = l.thickness;
    const cplx v = std::norm(a) * expm1_over(I * (kb - k), d) +
                   a * std::conj(b) * expm1_over(-I * (k + kb), d) +
                   b * std::conj(a) * expm1_over(I * (k + kb), d) +
                   std::norm(b) * expm1_over(I * (k - kb), d);
    sum += v.real();
  }
  return sum / period;
}

FieldProfile FieldProfile::with_phase(double phase) const {
  FieldProfile out = *this;
  const cplx r = std::polar(1.0, phase);
  for (auto& l : out.layers) {
    l.forward *= r;
    l.backward *= r;
  }
  for (auto& v : out.values) v *= r;
  return out;
}

FieldProfile mode_profile(const LayeredStack& stack, double omega, double kpar, Polarization pol,
                          std::optional<int> band, std::size_t samples) {
  const BlochKz b = bloch_kz(stack, omega, kpar, pol);
  if (!b.propagating) {
    std::ostringstream os;
    os << "no propagating Bloch mode at omega_norm=" << stack.omega_norm(omega)
       << " kpar_norm=" << stack.k_norm(kpar) << " (" << to_string(pol)
       << "), half trace " << b.half_trace;
    throw EvanescentMode(os.str());
  }
  const double period = stack.period();
  const double theta = b.kz_reduced * period;
  const Eigen::Matrix2d t = unit_cell_matrix(stack, omega, kpar, pol);

  const auto [n1, n2] = stack.indices(omega);
  const cplx k1 = layer_kz(n1, omega, kpar);
  const cplx k2 = layer_kz(n2, omega, kpar);
  if (std::abs(k1) * period < 1e-12 || std::abs(k2) * period < 1e-12)
    throw DegenerateLayer("layer k_z vanishes; plane-wave decomposition undefined");
  const double w1 = pol == Polarization::TE ? 1.0 : n1 * n1;
  const double w2 = pol == Polarization::TE ? 1.0 : n2 * n2;

  // Candidate eigenvalues e^{-i theta} (even bands) and e^{+i theta} (odd bands).
  const cplx lam_even = std::polar(1.0, -theta);
  const cplx lam_odd = std::polar(1.0, theta);
  Eigen::Vector2cd v_even = eigenvector(t, lam_even);
  Eigen::Vector2cd v_odd = eigenvector(t, lam_odd);
  if (!(v_even.norm() > 0.5)) v_even = Eigen::Vector2cd(1.0, -I * k1 / w1).normalized();
  if (!(v_odd.norm() > 0.5)) v_odd = Eigen::Vector2cd(1.0, -I * k1 / w1).normalized();
  const double f_even = relative_flux(v_even);
  const double f_odd = relative_flux(v_odd);
  const bool standing = std::max(std::abs(f_even), std::abs(f_odd)) < 1e-9;
  bool even_parity = standing ? true : f_even >= f_odd;
  Eigen::Vector2cd state = even_parity ? v_even : v_odd;

  FieldProfile p;
  p.omega = omega;
  p.kpar = kpar;
  p.pol = pol;
  p.period = period;
  const double thick[2] = {stack.thickness1(), stack.thickness2()};
  const cplx ks[2] = {k1, k2};
  const double ws[2] = {w1, w2};
  const double qs[2] = {(ks[0] * ks[0]).real(), (ks[1] * ks[1]).real()};
  double z0 = 0.0;
  for (int j = 0; j < 2; ++j) {
    LayerWaves& l = p.layers[static_cast<std::size_t>(j)];
    l.z0 = z0;
    l.thickness = thick[j];
    l.kz = ks[j];
    l.weight = ws[j];
    const cplx f = state(0);
    const cplx fp = state(1) * ws[j];
    l.forward = 0.5 * (f + I * fp / ks[j]);
    l.backward = 0.5 * (f - I * fp / ks[j]);
    state = layer_matrix(qs[j], thick[j], ws[j]).cast<cplx>() * state;
    z0 += thick[j];
  }

  const double base = even_parity ? theta : 2.0 * kPi - theta;  // K mod 2 pi, in [0, 2 pi]
  const double acc = -accumulated_phase(p.layers, !standing);
  const double turns = std::round((acc - base) / (2.0 * kPi));
  double kz_ext = (base + 2.0 * kPi * turns) / period;
  int natural = floor_band(kz_ext, period);
  // Keep the band label consistent with the eigenvalue parity at zone edges.
  if ((natural % 2 == 0) != even_parity) natural += (kz_ext * period / kPi - natural > 0.5) ? 1 : -1;
  natural = std::max(natural, 0);

  if (band) {
    if (*band < 0) throw DomainError("band index must be non-negative");
    if (!standing && ((*band % 2 == 0) != even_parity)) {
      std::ostringstream os;
      os << "band " << *band << " does not carry forward energy flow at omega_norm="
         << stack.omega_norm(omega) << " (natural band " << natural << ")";
      throw DomainError(os.str());
    }
    p.band = *band;
    p.kz_extended = extended_from_band(*band, theta, period);
  } else {
    p.band = natural;
    p.kz_extended = extended_from_band(natural, theta, period);
  }

  p.z.resize(samples);
  p.values.resize(samples);
  for (std::size_t i = 0; i < samples; ++i) {
    p.z[i] = period * static_cast<double>(i) / static_cast<double>(samples);
    p.values[i] = p.field(p.z[i]);
  }
  return p;
}

int natural_band(const LayeredStack& stack, double omega, double kpar, Polarization pol) {
  return mode_profile(stack, omega, kpar, pol, std::nullopt, 0).band;
}

HarmonicSpectrum fourier_coefficients(const FieldProfile& profile, int g_max) {
  if (g_max < 8) throw DomainError("g_max must be at least 8");
  HarmonicSpectrum s;
  s.g_max = g_max;
  s.harmonics.reserve(static_cast<std::size_t>(2 * g_max + 1));
  double power = 0.0;
  for (int g = -g_max; g <= g_max; ++g) {
    const double q = profile.kz_extended + 2.0 * kPi * g / profile.period;
    cplx e{0.0, 0.0};
    for (const auto& l : profile.layers) {
      e += std::exp(I * q * l.z0) * (l.forward * expm1_over(I * (q - l.kz), l.thickness) +
                                     l.backward * expm1_over(I * (q + l.kz), l.thickness));
    }
    e /= profile.period;
    power += std::norm(e);
    s.harmonics.push_back({g, e, 0.0});
  }
  s.norm = std::sqrt(power);
  for (auto& h : s.harmonics) {
    h.e /= s.norm;
    h.abs = std::abs(h.e);
  }
  return s;
}

LeadingHarmonic leading_fraction(const HarmonicSpectrum& spectrum) {
  double total = 0.0;
  for (const auto& h : spectrum.harmonics) total += h.abs * h.abs;
  const Harmonic* best = nullptr;
  for (const auto& h : spectrum.harmonics) {
    if (!best) {
      best = &h;
      continue;
    }
    const double tie = 1e-12 * std::max(h.abs, best->abs);
    if (h.abs > best->abs + tie) {
      best = &h;
    } else if (std::abs(h.abs - best->abs) <= tie) {
      const int ah = std::abs(h.g), ab = std::abs(best->g);
      if (ah < ab || (ah == ab && h.g > best->g)) best = &h;
    }
  }
  if (!best) return {};
  return {best->g, best->abs / std::sqrt(total)};
}

cplx reconstruct_periodic_part(const FieldProfile& profile, const HarmonicSpectrum& spectrum,
                               double z) {
  cplx sum{0.0, 0.0};
  for (const auto& h : spectrum.harmonics)
    sum += h.e * std::exp(-I * (2.0 * kPi * h.g / profile.period) * z);
  return sum * spectrum.norm;
}

}  // namespace nlpc
