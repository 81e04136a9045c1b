#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <optional>
#include <vector>

#include "nlpc/bandstructure.hpp"
#include "nlpc/errors.hpp"

namespace nlpc {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;

/// Pump Bloch mode. `g_p` selects the space harmonic (units of 2 pi / period
/// along z) whose wavevector K_zp + g_p 2 pi / period enters the matching condition.
struct PumpSpec {
  double omega = 0.0;
  Polarization pol = Polarization::TM;
  Vec2 kpar = Vec2::Zero();
  int band = 0;
  int g_p = 0;
};

/// Validates that the pump propagates and fills in the defaults: the natural
/// band of the forward mode and the mode's dominant harmonic for g_p.
/// Throws EvanescentMode when the pump sits in a stopband.
PumpSpec make_pump(const LayeredStack& stack, double omega, Polarization pol, const Vec2& kpar,
                   std::optional<int> band = std::nullopt, std::optional<int> g_p = std::nullopt,
                   int g_max = 32);

/// Extended-zone K_z of the pump in its configured band.
double pump_kz(const LayeredStack& stack, const PumpSpec& pump);

/// Wavevector of the pump harmonic that takes part in the matching.
Vec3 pump_harmonic_wavevector(const LayeredStack& stack, const PumpSpec& pump);

/// Type0: all three photons share one polarization; TypeI: both
/// down-converted photons orthogonal to the pump; TypeII: mixed pair.
enum class MatchType { Type0, TypeI, TypeII };

MatchType classify(Polarization pump, Polarization pol1, Polarization pol2);
const char* to_string(MatchType type);

/// Down-conversion channel: polarizations, frequency split omega1/omega_p,
/// Bloch bands of the photons and the reciprocal vector g_dc they absorb.
struct Conversion {
  Polarization pol1 = Polarization::TE;
  Polarization pol2 = Polarization::TE;
  double split = 0.5;
  int g_dc = 0;
  int band1 = 0;
  int band2 = 0;
};

/// Propagation direction along z of each photon: +1 forward, -1 backward.
struct Signs {
  int s1 = 1;
  int s2 = 1;
  friend bool operator==(const Signs&, const Signs&) = default;
};

/// z-momentum mismatch
///   [K_zp + g_p 2pi/period] - [s1 K_z1 + s2 K_z2 + g_dc 2pi/period]
/// with photon 2 completed by k_par2 = k_par_pump - k_par1 and
/// omega2 = omega_p - omega1. nullopt when either photon is evanescent.
std::optional<double> mismatch(const LayeredStack& stack, const PumpSpec& pump,
                               const Conversion& conv, const Vec2& kpar1, Signs signs);

struct Photon {
  double omega = 0.0;
  Vec2 kpar = Vec2::Zero();
  double kz = 0.0;  // extended-zone value with the propagation sign applied
  Polarization pol = Polarization::TE;
  int band = 0;
  bool backward = false;

  Vec3 wavevector() const { return {kpar.x(), kpar.y(), kz}; }
};

struct MatchSolution {
  Photon photon1;
  Photon photon2;
  int g_p = 0;
  int g_dc = 0;
  double residual = 0.0;         // rad/m
  double scan_coordinate = 0.0;  // photon-1 k_par along the pump transverse direction
  Signs signs;
  MatchType type = MatchType::TypeI;
};

struct ScanOptions {
  std::optional<double> lo;  // scan coordinate bounds (rad/m); default: propagating range
  std::optional<double> hi;
  std::size_t brackets = 2048;
  bool include_backward = true;
};

/// In-plane solutions (photons in the plane of the pump and z), every sign
/// combination examined, residuals below 1e-9 pi/period, sorted by scan
/// coordinate. Throws EmptyScan when no scan sample is propagating.
std::vector<MatchSolution> find_matches(const LayeredStack& stack, const PumpSpec& pump,
                                        const Conversion& conv, const ScanOptions& options = {});

struct ConeSample {
  double phi = 0.0;  // azimuth about the cone center, from the pump transverse direction
  Vec3 k1 = Vec3::Zero();
  Vec3 k2 = Vec3::Zero();
  double residual = 0.0;
};

/// Physical origin of a cone; absent for synthetic curves.
struct ConeSource {
  LayeredStack stack;
  PumpSpec pump;
  Conversion conv;
  Signs signs;
};

struct EmissionCone {
  std::optional<ConeSource> source;
  MatchType type = MatchType::TypeI;
  Polarization pol1 = Polarization::TE;
  Polarization pol2 = Polarization::TE;
  Vec2 center = Vec2::Zero();
  std::vector<ConeSample> samples;
  bool closed = false;

  /// Photon-1 transverse curve.
  std::vector<Vec2> curve() const;
  /// Area centroid of the photon-1 transverse curve.
  Vec2 centroid() const;
};

class OpenCurve : public DomainError {
 public:
  OpenCurve(const std::string& what, EmissionCone partial)
      : DomainError(what), partial_(std::move(partial)) {}
  const EmissionCone& partial() const { return partial_; }

 private:
  EmissionCone partial_;
};

struct ConeOptions {
  std::size_t n_azimuth = 256;
  std::size_t radial_steps = 512;
  std::optional<Signs> signs;  // default: forward pair
  unsigned threads = 1;
};

/// Closed curve of photon-1 transverse wavevectors satisfying the matching
/// condition, traced ray by ray about the curve's centroid. Throws OpenCurve
/// (carrying the partial curve) when a ray finds no root.
EmissionCone emission_cone(const LayeredStack& stack, const PumpSpec& pump, const Conversion& conv,
                           const ConeOptions& options = {});

/// Mismatch of a cone's channel at photon-1 transverse wavevector kpar1.
std::optional<double> cone_mismatch(const ConeSource& source, const Vec2& kpar1);

struct EntangledPair {
  Vec2 kpar1 = Vec2::Zero();
  Vec3 k1_a = Vec3::Zero();  // photon wavevectors under cone a's polarization assignment
  Vec3 k2_a = Vec3::Zero();
  Vec3 k1_b = Vec3::Zero();  // and under cone b's
  Vec3 k2_b = Vec3::Zero();
  double residual_a = 0.0;
  double residual_b = 0.0;
};

struct EntanglementDirections {
  std::vector<EntangledPair> pairs;
  double crossing_separation = 0.0;  // angle between photon-1 directions of the first two pairs (rad)
};

/// Crossings of two cones in the photon-1 transverse plane, refined on both
/// matching conditions when the cones carry their source. Throws
/// DegenerateOverlap for coincident cones and NoIntersection when disjoint.
EntanglementDirections cone_intersections(const EmissionCone& cone_a, const EmissionCone& cone_b);

/// Angle (rad) between two wavevectors.
double angle_between(const Vec3& a, const Vec3& b);

}  // namespace nlpc
