#include "nlpc/efficiency.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace nlpc {

Vec3 polarization_vector(const Vec3& k, Polarization pol) {
  const double kn = k.norm();
  if (!(kn > 0.0) || !std::isfinite(kn)) throw ZeroVector("wavevector must be nonzero");
  const Vec2 kt(k.x(), k.y());
  const double kt_n = kt.norm();
  const Vec3 te = kt_n > 1e-14 * kn ? Vec3(-k.y() / kt_n, k.x() / kt_n, 0.0) : Vec3(0.0, 1.0, 0.0);
  if (pol == Polarization::TE) return te;
  return te.cross(k / kn).normalized();
}

Mat3 default_crystal_frame() {
  Mat3 r;
  // columns are the crystal-frame images of lab x, y, z
  r << 0.0, 0.0, 1.0,
       1.0, 0.0, 0.0,
       0.0, 1.0, 0.0;
  return r;
}

double deff_factor(const Vec3& e_p, const Vec3& e_1, const Vec3& e_2, const Mat3& crystal_frame) {
  for (const Vec3* v : {&e_p, &e_1, &e_2})
    if (!(std::abs(v->norm() - 1.0) <= 1e-9)) throw NotUnit("polarization vectors must be unit");
  if (!((crystal_frame.transpose() * crystal_frame - Mat3::Identity()).cwiseAbs().maxCoeff() <= 1e-9))
    throw DomainError("crystal frame must be orthonormal");
  const Vec3 p = crystal_frame * e_p;
  const Vec3 a = crystal_frame * e_1;
  const Vec3 b = crystal_frame * e_2;
  return std::abs(p.x() * (a.y() * b.z() + a.z() * b.y()) + p.y() * (a.x() * b.z() + a.z() * b.x()) +
                  p.z() * (a.x() * b.y() + a.y() * b.x()));
}

std::vector<Mat3> td_point_group() {
  // Signed permutations whose signs multiply to +1 preserve x*y*z and hence
  // the tensor; these are exactly the 24 operations of T_d.
  std::array<int, 3> perm{0, 1, 2};
  std::vector<Mat3> out;
  do {
    for (int mask = 0; mask < 8; ++mask) {
      const std::array<double, 3> s{mask & 1 ? -1.0 : 1.0, mask & 2 ? -1.0 : 1.0,
                                    mask & 4 ? -1.0 : 1.0};
      if (s[0] * s[1] * s[2] < 0.0) continue;
      Mat3 m = Mat3::Zero();
      for (int i = 0; i < 3; ++i) m(i, perm[static_cast<std::size_t>(i)]) = s[static_cast<std::size_t>(i)];
      out.push_back(m);
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

EfficiencyReport relative_efficiency(const EfficiencyFactors& f) {
  for (double v : {f.chi2_ratio, f.fill, f.fourier, f.tensor})
    if (!std::isfinite(v) || v < 0.0) throw DomainError("efficiency factors must be finite and non-negative");
  if (f.fourier > 1.0) throw DomainError("Fourier factor cannot exceed 1");
  EfficiencyReport r;
  r.factors = f;
  r.amplitude = f.chi2_ratio * f.fill * f.fourier * f.tensor;
  r.efficiency = r.amplitude * r.amplitude;
  return r;
}

double solution_tensor_factor(const LayeredStack& stack, const PumpSpec& pump,
                              const MatchSolution& solution, const Mat3& crystal_frame) {
  const Vec3 kp = pump_harmonic_wavevector(stack, pump);
  const Vec3 ep = polarization_vector(kp, pump.pol);
  const Vec3 e1 = polarization_vector(solution.photon1.wavevector(), solution.photon1.pol);
  const Vec3 e2 = polarization_vector(solution.photon2.wavevector(), solution.photon2.pol);
  return deff_factor(ep, e1, e2, crystal_frame);
}

}  // namespace nlpc
