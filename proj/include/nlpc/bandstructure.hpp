#pragma once

#include <Eigen/Core>
#include <complex>
#include <string_view>
#include <utility>
#include <vector>

#include "nlpc/materials.hpp"
#include "nlpc/units.hpp"

namespace nlpc {

/// TE has the electric field in the layer plane (ordinary); TM has the
/// magnetic field in the layer plane (extraordinary).
enum class Polarization { TE, TM };

std::string_view to_string(Polarization pol);
/// Accepts "TE"/"te"/"o" and "TM"/"tm"/"e".
Polarization parse_polarization(std::string_view text);

/// Periodic two-layer unit cell: layer 1 occupies [0, a), layer 2 [a, a+b).
class LayeredStack {
 public:
  LayeredStack(MaterialModel material1, double thickness1, MaterialModel material2,
               double thickness2);
  static LayeredStack from_period(MaterialModel material1, MaterialModel material2,
                                  double period, double fill);

  const MaterialModel& material1() const { return material1_; }
  const MaterialModel& material2() const { return material2_; }
  double thickness1() const { return a_; }
  double thickness2() const { return b_; }
  double period() const { return period_; }
  double fill() const { return a_ / period_; }

  /// Layer indices (n1, n2) at angular frequency omega.
  std::pair<double, double> indices(double omega) const;

  double omega_norm(double omega) const { return omega_to_norm(omega, period_); }
  double omega_si(double omega_norm) const { return omega_from_norm(omega_norm, period_); }
  double k_norm(double k) const { return k_to_norm(k, period_); }
  double k_si(double k_norm) const { return k_from_norm(k_norm, period_); }

 private:
  MaterialModel material1_;
  MaterialModel material2_;
  double a_;
  double b_;
  double period_;
};

/// Solution of the Bloch dispersion relation at (omega, k_par, pol).
struct BlochKz {
  double half_trace = 0.0;
  bool propagating = false;
  double kz_reduced = 0.0;   // rad/m, in [0, pi/period]
  double attenuation = 0.0;  // rad/m, zero when propagating
  double omega = 0.0;
  double kpar = 0.0;
  Polarization pol = Polarization::TE;
};

/// Perpendicular wavevector sqrt((n omega/c)^2 - k_par^2) on the principal
/// branch: non-negative real, or positive imaginary when evanescent.
std::complex<double> layer_kz(double n, double omega, double kpar);

/// State-vector transfer matrix of one homogeneous layer. The state is
/// (f, f'/w) where f is the principal field (E_y for TE, H_y for TM) and
/// w = 1 (TE) or n^2 (TM). `kz_squared` = (n omega/c)^2 - k_par^2 may be of
/// either sign; kz = 0 uses the sinc limit.
Eigen::Matrix2d layer_matrix(double kz_squared, double thickness, double weight);

/// Unit-cell transfer matrix M2 * M1 mapping the state at z = 0 to z = period.
Eigen::Matrix2d unit_cell_matrix(const LayeredStack& stack, double omega, double kpar,
                                 Polarization pol);

/// Half trace of the unit-cell transfer matrix; equals cos(K_z period) for a
/// propagating Bloch mode. Depends on k_par only through k_par^2.
double half_trace(const LayeredStack& stack, double omega, double kpar, Polarization pol);

enum class CouplingSign {
  Minus,  // cos(k1 a + k2 b) - (k1 - k2)^2/(2 k1 k2) sin sin : matches the trace
  Plus    // same with (k1 + k2)^2, as sometimes printed; does not match
};

/// Closed-form two-layer half trace, kept as an independent cross-check of the
/// matrix route. Throws DegenerateLayer when either layer has |k_z| period < 1e-12.
double half_trace_closed_form(const LayeredStack& stack, double omega, double kpar,
                              Polarization pol, CouplingSign sign = CouplingSign::Minus);

BlochKz bloch_kz(const LayeredStack& stack, double omega, double kpar, Polarization pol);

struct FrequencyInterval {
  double lo = 0.0;
  double hi = 0.0;
};

/// Stopbands at normal incidence inside [omega_lo, omega_hi], sorted and
/// disjoint, with edges bisected to 1e-10 relative. `samples_per_fsr` counts
/// samples per free spectral range pi c / (n_max period) and must be >= 100.
std::vector<FrequencyInterval> stopbands_normal(const LayeredStack& stack, Polarization pol,
                                                double omega_lo, double omega_hi,
                                                int samples_per_fsr = 200);

struct EffectiveIndices {
  double n_o = 0.0;
  double n_e = 0.0;
};

/// Form-birefringent uniaxial medium equivalent to a subwavelength stack
/// (optic axis along the stack normal).
EffectiveIndices effective_indices(double n1, double n2, double fill);

/// Fill fraction of layer 1 maximizing n_o - n_e, by golden-section search
/// to |d alpha| < 1e-6. Throws NoBirefringence when n1 == n2.
double optimal_fill(double n1, double n2);

struct BandCell {
  bool propagating = false;
  double attenuation = 0.0;  // rad/m
  bool above_light_line = false;
};

/// Row-major grid: cell (i, j) at omega_grid[i], kpar_grid[j].
struct BandDiagram {
  std::vector<double> omega_grid;
  std::vector<double> kpar_grid;
  Polarization pol = Polarization::TE;
  std::vector<BandCell> cells;

  const BandCell& at(std::size_t i, std::size_t j) const { return cells[i * kpar_grid.size() + j]; }
};

BandDiagram band_diagram(const LayeredStack& stack, std::vector<double> omega_grid,
                         std::vector<double> kpar_grid, Polarization pol, unsigned threads = 1);

}  // namespace nlpc
