#include "nlpc/surfaces.hpp"

#include <algorithm>
#include <cmath>

#include "nlpc/errors.hpp"
#include "nlpc/parallel.hpp"

namespace nlpc {

double unfold_kz(int band, double kz_reduced, double period) {
  if (band < 0) throw DomainError("band index must be non-negative");
  const double k = kz_reduced * period;
  return band % 2 == 0 ? (band * kPi + k) / period : ((band + 1) * kPi - k) / period;
}

double fold_kz(double kz, double period) {
  const double g = 2.0 * kPi / period;
  double r = std::fmod(kz, g);
  if (r < 0.0) r += g;
  return r > 0.5 * g ? g - r : r;
}

std::optional<double> kz_extended(const LayeredStack& stack, double omega, double kpar,
                                  Polarization pol, int band) {
  if (band < 0) throw DomainError("band index must be non-negative");
  const BlochKz b = bloch_kz(stack, omega, kpar, pol);
  if (!b.propagating) return std::nullopt;
  return unfold_kz(band, b.kz_reduced, stack.period());
}

DispersionSurface surface(const LayeredStack& stack, double omega, Polarization pol,
                          double kpar_max, std::size_t n_samples, ZoneScheme zone, int band,
                          unsigned threads) {
  if (n_samples < 64) throw DomainError("surface needs at least 64 samples");
  const auto [n1, n2] = stack.indices(omega);
  const double k_limit = std::max(n1, n2) * omega / kSpeedOfLight;
  if (!(kpar_max > 0.0) || kpar_max > k_limit * (1.0 + 1e-12))
    throw DomainError("kpar_max must lie in (0, max(n) omega / c]");
  if (band < 0) throw DomainError("band index must be non-negative");

  DispersionSurface s;
  s.omega = omega;
  s.pol = pol;
  s.zone = zone;
  s.band = zone == ZoneScheme::Extended ? band : 0;
  s.period = stack.period();
  s.samples.resize(n_samples);
  parallel_for(n_samples, threads, [&](std::size_t i) {
    const double k = kpar_max * static_cast<double>(i) / static_cast<double>(n_samples - 1);
    const BlochKz b = bloch_kz(stack, omega, k, pol);
    SurfaceSample& smp = s.samples[i];
    smp.kpar = k;
    smp.above_light_line = omega > kSpeedOfLight * k;
    if (b.propagating)
      smp.kz = zone == ZoneScheme::Reduced ? b.kz_reduced : unfold_kz(band, b.kz_reduced, s.period);
  });

  auto in_gap = [&](double k) { return !bloch_kz(stack, omega, k, pol).propagating; };
  auto refine = [&](double pass_k, double gap_k) {
    while (std::abs(gap_k - pass_k) > 1e-10 * std::max(std::abs(gap_k), std::abs(pass_k))) {
      const double mid = 0.5 * (pass_k + gap_k);
      (in_gap(mid) ? gap_k : pass_k) = mid;
    }
    return gap_k;
  };
  bool open = false;
  double start = 0.0;
  for (std::size_t i = 0; i < n_samples; ++i) {
    const bool gap = !s.samples[i].kz.has_value();
    if (gap && !open) {
      start = i == 0 ? 0.0 : refine(s.samples[i - 1].kpar, s.samples[i].kpar);
      open = true;
    } else if (!gap && open) {
      s.gaps.push_back({start, refine(s.samples[i].kpar, s.samples[i - 1].kpar)});
      open = false;
    }
  }
  if (open) s.gaps.push_back({start, kpar_max});
  return s;
}

}  // namespace nlpc
