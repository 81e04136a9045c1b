#pragma once

#include <Eigen/Core>
#include <vector>

#include "nlpc/phasematch.hpp"

namespace nlpc {

using Mat3 = Eigen::Matrix3d;

/// Unit electric-field direction of a mode with wavevector k. TE lies in the
/// layer plane perpendicular to the transverse wavevector (y when k_par = 0);
/// TM lies in the plane of k and z, perpendicular to k. Throws ZeroVector.
Vec3 polarization_vector(const Vec3& k, Polarization pol);

/// Rotation taking lab coordinates to crystal coordinates for a (100) cut:
/// lab z -> [100], lab x -> [010], lab y -> [001].
Mat3 default_crystal_frame();

/// |sum_ijk d_ijk e_p,i e_1,j e_2,k| for the d14-normalized 4-bar-3m tensor
/// (d_ijk = 1 when i, j, k are pairwise distinct). Vectors are given in the
/// lab frame and mapped by `crystal_frame`. Throws NotUnit for non-unit
/// vectors and DomainError for a non-orthonormal frame. Range [0, 2/sqrt(3)].
double deff_factor(const Vec3& e_p, const Vec3& e_1, const Vec3& e_2,
                   const Mat3& crystal_frame = Mat3::Identity());

/// The 24 elements of the 4-bar-3m point group as signed permutation matrices.
std::vector<Mat3> td_point_group();

struct EfficiencyFactors {
  double chi2_ratio = 1.0;
  double fill = 1.0;
  double fourier = 1.0;
  double tensor = 1.0;
};

struct EfficiencyReport {
  EfficiencyFactors factors;
  double amplitude = 0.0;
  double efficiency = 0.0;
};

/// amplitude = product of the factors, efficiency = amplitude^2. Throws
/// DomainError when a factor is negative or non-finite, or fourier > 1.
EfficiencyReport relative_efficiency(const EfficiencyFactors& factors);

/// Tensor factor for a solved geometry: the pump enters through its matched
/// harmonic wavevector, the photons through their Bloch wavevectors.
double solution_tensor_factor(const LayeredStack& stack, const PumpSpec& pump,
                              const MatchSolution& solution,
                              const Mat3& crystal_frame = default_crystal_frame());

}  // namespace nlpc
