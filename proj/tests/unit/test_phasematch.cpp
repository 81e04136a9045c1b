#include <cmath>

#include "doctest.h"
#include "nlpc/errors.hpp"
#include "nlpc/phasematch.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace nlpc;

namespace {

PumpSpec fig2_pump(const LayeredStack& s, double azimuth = 0.0) {
  const double k = s.k_si(0.055);
  return make_pump(s, omega_from_wavelength(750e-9), Polarization::TM,
                   Vec2(k * std::cos(azimuth), k * std::sin(azimuth)));
}

Conversion channel(Polarization a, Polarization b) {
  Conversion c;
  c.pol1 = a;
  c.pol2 = b;
  return c;
}

double tolerance(const LayeredStack& s) { return 1e-9 * kPi / s.period(); }

// Band-0 Bloch K_z from the independent characteristic-matrix half trace.
double oracle_kz(const LayeredStack& s, double omega, double kpar, Polarization pol) {
  const auto [n1, n2] = s.indices(omega);
  const double ht = oracle::characteristic_half_trace(n1, s.thickness1(), n2, s.thickness2(), omega, kpar,
                                                      pol == Polarization::TE);
  return std::acos(ht) / s.period();
}

double distance_to_curve(const Vec2& p, const std::vector<Vec2>& c) {
  double best = 1e300;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const Vec2 a = c[i], b = c[(i + 1) % c.size()];
    const double t = std::clamp((p - a).dot(b - a) / (b - a).squaredNorm(), 0.0, 1.0);
    best = std::min(best, (a + t * (b - a) - p).norm());
  }
  return best;
}

}  // namespace

TEST_CASE("match type classification") {
  CHECK(classify(Polarization::TM, Polarization::TE, Polarization::TE) == MatchType::TypeI);
  CHECK(classify(Polarization::TE, Polarization::TM, Polarization::TM) == MatchType::TypeI);
  CHECK(classify(Polarization::TM, Polarization::TE, Polarization::TM) == MatchType::TypeII);
  CHECK(classify(Polarization::TM, Polarization::TM, Polarization::TE) == MatchType::TypeII);
  CHECK(classify(Polarization::TM, Polarization::TM, Polarization::TM) == MatchType::Type0);
}

TEST_CASE("pump defaults: natural band and dominant harmonic") {
  const auto s2 = test::fig2_stack();
  const auto p2 = fig2_pump(s2);
  CHECK(p2.band == 0);
  CHECK(p2.g_p == 0);
  const auto s3 = test::fig3_stack();
  const auto p3 = make_pump(s3, omega_from_wavelength(750e-9), Polarization::TM, Vec2(s3.k_si(0.1), 0.0));
  CHECK(p3.band == 1);
  CHECK(p3.g_p == 0);
  const Vec3 kh = pump_harmonic_wavevector(s3, p3);
  CHECK(kh.z() == doctest::Approx(pump_kz(s3, p3)));

  const auto bragg = test::constant_stack(2.0, 1e-6 / 8.0, 1.0, 1e-6 / 4.0);
  CHECK_THROWS_AS(make_pump(bragg, omega_from_wavelength(1e-6), Polarization::TE, Vec2::Zero()), EvanescentMode);
}

TEST_CASE("frequency split must lie strictly inside (0, 1)") {
  const auto s = test::fig2_stack();
  const auto p = fig2_pump(s);
  for (double split : {0.0, 1.0, -0.2, 1.5}) {
    auto c = channel(Polarization::TE, Polarization::TE);
    c.split = split;
    CHECK_THROWS_AS(find_matches(s, p, c), DomainError);
  }
}

TEST_CASE("fig2 planar solutions agree with independent oracles") {
  const auto s = test::fig2_stack();
  const auto pump = fig2_pump(s);
  const double omega1 = 0.5 * pump.omega;
  const double p = pump.kpar.norm();
  const double kp = oracle_kz(s, pump.omega, p, Polarization::TM);
  const auto [n1, n2] = s.indices(omega1);
  const auto emt = oracle::effective_medium(n1, n2, s.fill());
  const auto [np1, np2] = s.indices(pump.omega);
  const auto emt_p = oracle::effective_medium(np1, np2, s.fill());
  const double k01 = omega1 / kSpeedOfLight;

  for (auto [a, b] : {std::pair{Polarization::TE, Polarization::TE}, std::pair{Polarization::TE, Polarization::TM},
                      std::pair{Polarization::TM, Polarization::TE}}) {
    CAPTURE(to_string(a));
    CAPTURE(to_string(b));
    const auto sols = find_matches(s, pump, channel(a, b));
    std::vector<double> forward;
    for (const auto& m : sols) {
      CHECK(std::abs(m.residual) < tolerance(s));
      const auto mm = mismatch(s, pump, channel(a, b), m.photon1.kpar, m.signs);
      REQUIRE(mm.has_value());
      CHECK(std::abs(*mm) < tolerance(s));
      CHECK((m.photon1.kpar + m.photon2.kpar - pump.kpar).norm() < 1e-12 * p);
      if (m.signs == Signs{1, 1}) forward.push_back(m.scan_coordinate);
    }
    // Bloch oracle: same physics, independent matrices and root finder.
    auto f = [&](double x) {
      return kp - oracle_kz(s, omega1, std::abs(x), a) - oracle_kz(s, omega1, std::abs(p - x), b);
    };
    const double lim = 0.9999 * std::max(n1, n2) * k01;  // NaN outside the propagating range
    const auto expect = oracle::roots(f, -lim, lim, 8000);
    REQUIRE(forward.size() == expect.size());
    for (std::size_t i = 0; i < expect.size(); ++i)
      CHECK(forward[i] == doctest::Approx(expect[i]).scale(p).epsilon(1e-8));

    // Effective-medium crystal: the same roots to within the homogenization error.
    auto g = [&](double x) {
      return oracle::uniaxial_kz(emt_p, 2.0 * k01, p, false) -
             oracle::uniaxial_kz(emt, k01, std::abs(x), a == Polarization::TE) -
             oracle::uniaxial_kz(emt, k01, std::abs(p - x), b == Polarization::TE);
    };
    const auto approx = oracle::roots(g, -lim, lim, 8000);
    REQUIRE(approx.size() == forward.size());
    for (std::size_t i = 0; i < approx.size(); ++i) CHECK(std::abs(forward[i] - approx[i]) < 0.02 * lim);
  }
  CHECK(find_matches(s, pump, channel(Polarization::TM, Polarization::TM)).empty());
}

TEST_CASE("Type-I cone is symmetric about half the pump transverse vector") {
  const auto s = test::fig2_stack();
  const auto pump = fig2_pump(s);
  const auto cone = emission_cone(s, pump, channel(Polarization::TE, Polarization::TE));
  CHECK(cone.closed);
  CHECK(cone.type == MatchType::TypeI);
  const auto curve = cone.curve();
  const std::size_t n = curve.size();
  REQUIRE(n % 2 == 0);
  double worst = 0.0;
  for (std::size_t i = 0; i < n / 2; ++i) {
    const Vec2 mid = 0.5 * (curve[i] + curve[i + n / 2]);
    worst = std::max(worst, (mid - 0.5 * pump.kpar).norm());
  }
  CHECK(worst < tolerance(s));
  for (const auto& smp : cone.samples) {
    CHECK(std::abs(smp.residual) < tolerance(s));
    CHECK((smp.k1.head<2>() + smp.k2.head<2>() - pump.kpar).norm() < 1e-9 * pump.kpar.norm());
  }
}

TEST_CASE("Type-I opening angle matches the two-sphere construction") {
  // Anomalous dispersion in a homogeneous medium gives a circular cone.
  const auto m = MaterialModel::table({{700e-9, 1.9}, {800e-9, 1.9}, {1400e-9, 2.0}, {1600e-9, 2.0}},
                                      Interpolation::Linear);
  const LayeredStack s(m, 12e-9, m, 8e-9);
  const double omega = omega_from_wavelength(750e-9);
  const auto pump = make_pump(s, omega, Polarization::TM, Vec2::Zero());
  const auto cone = emission_cone(s, pump, channel(Polarization::TE, Polarization::TE));
  const double theta = oracle::type_i_half_angle(1.9 * omega / kSpeedOfLight, 2.0 * 0.5 * omega / kSpeedOfLight);
  for (const auto& smp : cone.samples) CHECK(angle_between(smp.k1, Vec3::UnitZ()) == doctest::Approx(theta).epsilon(1e-3));
}

TEST_CASE("rotating the pump azimuth rotates the cone") {
  const auto s = test::fig2_stack();
  const double beta = 0.7;
  const auto a = emission_cone(s, fig2_pump(s), channel(Polarization::TE, Polarization::TM));
  const auto b = emission_cone(s, fig2_pump(s, beta), channel(Polarization::TE, Polarization::TM));
  REQUIRE(a.samples.size() == b.samples.size());
  const Eigen::Rotation2Dd r(beta);
  const double scale = s.k_si(0.055);
  for (std::size_t i = 0; i < a.samples.size(); ++i)
    CHECK((r * Vec2(a.samples[i].k1.head<2>()) - Vec2(b.samples[i].k1.head<2>())).norm() < 1e-6 * scale);
}

TEST_CASE("exchanging the photon polarizations exchanges the photons") {
  const auto s = test::fig2_stack();
  const auto pump = fig2_pump(s);
  const auto a = emission_cone(s, pump, channel(Polarization::TE, Polarization::TM));
  const auto b = emission_cone(s, pump, channel(Polarization::TM, Polarization::TE));
  const auto cb = b.curve();
  double radius = 0.0;
  for (const auto& p : cb) radius = std::max(radius, (p - b.centroid()).norm());
  for (const auto& smp : a.samples) CHECK(distance_to_curve(smp.k2.head<2>(), cb) < 1e-3 * radius);
  // the two type-II cones have distinct centres
  CHECK((a.centroid() - b.centroid()).norm() > 0.1 * radius);
}

TEST_CASE("fig2 type-II cones cross in two pairs") {
  const auto s = test::fig2_stack();
  const auto pump = fig2_pump(s);
  const auto a = emission_cone(s, pump, channel(Polarization::TE, Polarization::TM));
  const auto b = emission_cone(s, pump, channel(Polarization::TM, Polarization::TE));
  const auto d = cone_intersections(a, b);
  REQUIRE(d.pairs.size() == 2);
  for (const auto& pr : d.pairs) {
    CHECK(std::abs(pr.residual_a) < tolerance(s));
    CHECK(std::abs(pr.residual_b) < tolerance(s));
    CHECK(pr.kpar1.x() == doctest::Approx(0.5 * pump.kpar.x()).epsilon(1e-6));
  }
  CHECK(d.pairs[0].kpar1.y() == doctest::Approx(-d.pairs[1].kpar1.y()).epsilon(1e-6));
  CHECK(d.crossing_separation > 0.0);
  CHECK_THROWS_AS(cone_intersections(a, a), DegenerateOverlap);
}

namespace {

EmissionCone circle(Vec2 c, double r, std::size_t n = 720) {
  EmissionCone e;
  e.center = c;
  e.closed = true;
  for (std::size_t i = 0; i < n; ++i) {
    const double phi = 2.0 * kPi * i / n;
    ConeSample smp;
    smp.phi = phi;
    smp.k1 = Vec3(c.x() + r * std::cos(phi), c.y() + r * std::sin(phi), 1.0);
    smp.k2 = Vec3(-smp.k1.x(), -smp.k1.y(), 1.0);
    e.samples.push_back(smp);
  }
  return e;
}

}  // namespace

TEST_CASE("synthetic circles: crossings, disjoint and coincident curves") {
  const auto d = cone_intersections(circle({0, 0}, 1.0), circle({1, 0}, 1.0));
  REQUIRE(d.pairs.size() == 2);
  CHECK(d.pairs[0].kpar1.x() == doctest::Approx(0.5).epsilon(1e-4));
  CHECK(d.pairs[0].kpar1.y() == doctest::Approx(-std::sqrt(3.0) / 2.0).epsilon(1e-4));
  CHECK(d.pairs[1].kpar1.y() == doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-4));
  CHECK_THROWS_AS(cone_intersections(circle({0, 0}, 1.0), circle({0, 0}, 0.5)), NoIntersection);
  CHECK_THROWS_AS(cone_intersections(circle({0, 0}, 1.0), circle({0, 0}, 1.0)), DegenerateOverlap);
}

TEST_CASE("cones do not depend on the thread count") {
  const auto s = test::fig2_stack();
  const auto pump = fig2_pump(s);
  ConeOptions one, four;
  four.threads = 4;
  const auto a = emission_cone(s, pump, channel(Polarization::TE, Polarization::TM), one);
  const auto b = emission_cone(s, pump, channel(Polarization::TE, Polarization::TM), four);
  REQUIRE(a.samples.size() == b.samples.size());
  for (std::size_t i = 0; i < a.samples.size(); ++i) CHECK(a.samples[i].k1 == b.samples[i].k1);
}

TEST_CASE("fig3 with the dominant pump harmonic has type-I and type-II solutions") {
  const auto s = test::fig3_stack();
  const auto pump = make_pump(s, omega_from_wavelength(750e-9), Polarization::TM, Vec2(s.k_si(0.1), 0.0));
  bool type1 = false, type2 = false;
  for (auto [a, b] : {std::pair{Polarization::TE, Polarization::TE}, std::pair{Polarization::TE, Polarization::TM}}) {
    auto c = channel(a, b);
    c.band1 = c.band2 = 0;
    for (const auto& m : find_matches(s, pump, c)) {
      CHECK(std::abs(m.residual) < tolerance(s));
      (m.type == MatchType::TypeI ? type1 : type2) = true;
    }
  }
  CHECK(type1);
  CHECK(type2);
}
