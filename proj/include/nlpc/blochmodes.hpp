#pragma once

#include <array>
#include <complex>
#include <optional>
#include <vector>

#include "nlpc/bandstructure.hpp"

namespace nlpc {

using cplx = std::complex<double>;

/// Plane-wave content of one layer: f(z) = forward e^{-i kz (z - z0)} + backward e^{+i kz (z - z0)}.
struct LayerWaves {
  double z0 = 0.0;
  double thickness = 0.0;
  cplx kz;              // principal branch (real >= 0 or positive imaginary)
  double weight = 1.0;  // 1 for TE, n^2 for TM
  cplx forward;
  cplx backward;
};

/// Bloch mode over one period. Time dependence e^{+i omega t}; the principal
/// field (E_y for TE, H_y for TM) satisfies field(z + period) = e^{-i K period} field(z).
struct FieldProfile {
  double omega = 0.0;
  double kpar = 0.0;
  Polarization pol = Polarization::TE;
  double period = 0.0;
  double kz_extended = 0.0;  // rad/m, forward (positive group velocity)
  int band = 0;              // extended-zone index: K in [band pi, (band+1) pi] / period
  std::array<LayerWaves, 2> layers;
  std::vector<double> z;  // uniform samples in [0, period)
  std::vector<cplx> values;

  /// Principal field at any z, extended beyond the cell with the Bloch condition.
  cplx field(double z) const;
  /// Derivative divided by the layer weight (continuous across interfaces).
  cplx scaled_derivative(double z) const;
  /// Lattice-periodic part u(z) = field(z) e^{+i K z}.
  cplx periodic_part(double z) const;
  /// Proportional to the z energy flow; positive for forward modes. Constant in z.
  double flux() const;
  /// (1/period) * integral of |field|^2 over one cell, in closed form.
  double mean_square() const;
  /// Same mode multiplied by e^{i phase}.
  FieldProfile with_phase(double phase) const;
};

struct Harmonic {
  int g = 0;  // reciprocal lattice vector in units of 2 pi / period
  cplx e;
  double abs = 0.0;
};

/// Fourier coefficients of the periodic part, unit-normalized over the
/// retained range g in [-g_max, g_max].
struct HarmonicSpectrum {
  int g_max = 0;
  double norm = 1.0;  // root of the retained power before normalization
  std::vector<Harmonic> harmonics;  // ascending g

  const Harmonic& at(int g) const { return harmonics[static_cast<std::size_t>(g + g_max)]; }
};

struct LeadingHarmonic {
  int g_star = 0;
  double fraction = 0.0;
};

/// Forward Bloch mode at (omega, k_par, pol). With `band` unset the natural
/// extended-zone band is used; a band of the wrong parity for forward
/// propagation throws DomainError. Throws EvanescentMode inside a stopband.
FieldProfile mode_profile(const LayeredStack& stack, double omega, double kpar, Polarization pol,
                          std::optional<int> band = std::nullopt, std::size_t samples = 256);

/// Extended-zone band of the forward mode, found from the phase the field
/// accumulates across one cell.
int natural_band(const LayeredStack& stack, double omega, double kpar, Polarization pol);

HarmonicSpectrum fourier_coefficients(const FieldProfile& profile, int g_max);

/// Largest |e_g| (ties go to the smaller |g|, then to g >= 0) and its amplitude fraction.
LeadingHarmonic leading_fraction(const HarmonicSpectrum& spectrum);

/// Partial Fourier sum of the normalized spectrum at z, rescaled to the
/// profile's amplitude; used to check reconstruction.
cplx reconstruct_periodic_part(const FieldProfile& profile, const HarmonicSpectrum& spectrum,
                               double z);

}  // namespace nlpc
