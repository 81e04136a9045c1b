#pragma once

// Independent reference calculations. Nothing here calls into the library's
// solvers; only plain numbers go in.

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <optional>
#include <vector>

namespace nlpc::oracle {

constexpr double c0 = 299792458.0;
constexpr double pi = 3.14159265358979323846;

struct Uniaxial {
  double n_o, n_e;
};

inline Uniaxial effective_medium(double n1, double n2, double fill) {
  const double eo = fill * n1 * n1 + (1 - fill) * n2 * n2;
  const double inv_e = fill / (n1 * n1) + (1 - fill) / (n2 * n2);
  return {std::sqrt(eo), 1.0 / std::sqrt(inv_e)};
}

/// z-wavevector in a uniaxial medium with optic axis along z. ordinary = TE.
inline double uniaxial_kz(Uniaxial m, double k0, double kpar, bool ordinary) {
  if (ordinary) return std::sqrt(m.n_o * m.n_o * k0 * k0 - kpar * kpar);
  return m.n_o * std::sqrt(k0 * k0 - kpar * kpar / (m.n_e * m.n_e));
}

/// Half trace of the two-layer characteristic matrix in (E, H) form,
/// [[cos d, i sin d / y], [i y sin d, cos d]] with d = kz t, y = kz / w.
inline double characteristic_half_trace(double n1, double a, double n2, double b, double omega,
                                        double kpar, bool te) {
  using C = std::complex<double>;
  auto layer = [&](double n, double t) {
    const C kz = std::sqrt(C(n * n * omega * omega / (c0 * c0) - kpar * kpar, 0.0));
    const double w = te ? 1.0 : n * n;
    const C y = kz / w;
    const C d = kz * t;
    const C i(0, 1);
    std::array<C, 4> m;
    if (std::abs(kz) < 1e-300) {
      m = {C(1), i * t * w, C(0), C(1)};  // unused for the random stacks
    } else {
      m = {std::cos(d), i * std::sin(d) / y, i * y * std::sin(d), std::cos(d)};
    }
    return m;
  };
  const auto m1 = layer(n1, a);
  const auto m2 = layer(n2, b);
  const C t00 = m2[0] * m1[0] + m2[1] * m1[2];
  const C t11 = m2[2] * m1[1] + m2[3] * m1[3];
  return 0.5 * (t00 + t11).real();
}

/// Root of f on [lo, hi] by bisection; f(lo) and f(hi) must differ in sign.
inline double bisect(const std::function<double(double)>& f, double lo, double hi) {
  double flo = f(lo);
  for (int i = 0; i < 300; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    const double fm = f(mid);
    if ((fm > 0) == (flo > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// All sign changes of f on a uniform grid, refined by bisection.
inline std::vector<double> roots(const std::function<double(double)>& f, double lo, double hi, int n) {
  std::vector<double> out;
  double x0 = lo, f0 = f(lo);
  for (int i = 1; i <= n; ++i) {
    const double x1 = lo + (hi - lo) * i / n;
    const double f1 = f(x1);
    if (std::isfinite(f0) && std::isfinite(f1) && (f0 > 0) != (f1 > 0)) out.push_back(bisect(f, x0, x1));
    x0 = x1;
    f0 = f1;
  }
  return out;
}

/// Half-angle between each photon and the pump for degenerate type-I
/// conversion into ordinary photons: two spheres of radius R = n_o k0/2
/// centred at the origin and at the pump tip intersect on a circle.
inline double type_i_half_angle(double pump_length, double photon_radius) {
  return std::acos(0.5 * pump_length / photon_radius);
}

}  // namespace nlpc::oracle
