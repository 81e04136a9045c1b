#pragma once

#include <optional>
#include <vector>

#include "nlpc/bandstructure.hpp"

namespace nlpc {

enum class ZoneScheme { Reduced, Extended };

/// Repeated-zone unfolding of a reduced Bloch wavevector: even bands map to
/// band*pi/period + K, odd bands to (band+1)*pi/period - K. Band 0 of a
/// homogeneous medium reproduces its free-space k_z.
double unfold_kz(int band, double kz_reduced, double period);

/// Folds any wavevector into the reduced zone [0, pi/period].
double fold_kz(double kz, double period);

/// Extended-zone K_z for `band` at (omega, k_par), or nullopt inside a gap.
std::optional<double> kz_extended(const LayeredStack& stack, double omega, double kpar,
                                  Polarization pol, int band);

struct SurfaceSample {
  double kpar = 0.0;
  std::optional<double> kz;  // nullopt marks a gap (evanescent) sample
  bool above_light_line = false;
};

struct KparInterval {
  double lo = 0.0;
  double hi = 0.0;
};

/// K_z(k_par) at fixed omega, sampled on [0, kpar_max].
struct DispersionSurface {
  double omega = 0.0;
  Polarization pol = Polarization::TE;
  ZoneScheme zone = ZoneScheme::Reduced;
  int band = 0;
  double period = 0.0;
  std::vector<SurfaceSample> samples;
  std::vector<KparInterval> gaps;  // edges bisected to 1e-10 relative
};

/// Requires kpar_max <= max_layer n omega / c and n_samples >= 64.
DispersionSurface surface(const LayeredStack& stack, double omega, Polarization pol,
                          double kpar_max, std::size_t n_samples,
                          ZoneScheme zone = ZoneScheme::Reduced, int band = 0,
                          unsigned threads = 1);

}  // namespace nlpc
