#include <cmath>

#include "doctest.h"
#include "nlpc/bandstructure.hpp"
#include "nlpc/errors.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace nlpc;
using test::constant_stack;
using test::uniform;

namespace {

// Quarter-wave stack for n1 = 2, n2 = 1 at vacuum wavelength 1 um.
LayeredStack quarter_wave() { return constant_stack(2.0, 1e-6 / 8.0, 1.0, 1e-6 / 4.0); }

}  // namespace

TEST_CASE("layer_kz branches") {
  const double omega = 5.0 * kSpeedOfLight;  // n omega / c = 5 rad/m for n = 1
  CHECK(layer_kz(1.0, omega, 3.0).real() == doctest::Approx(4.0));
  CHECK(layer_kz(1.0, omega, 3.0).imag() == 0.0);
  const auto ev = layer_kz(1.0, 3.0 * kSpeedOfLight, 5.0);
  CHECK(ev.real() == 0.0);
  CHECK(ev.imag() == doctest::Approx(4.0));
  CHECK(std::abs(layer_kz(1.0, omega, 5.0)) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("polarization names") {
  CHECK(parse_polarization("o") == Polarization::TE);
  CHECK(parse_polarization("TM") == Polarization::TM);
  CHECK(parse_polarization("e") == Polarization::TM);
  CHECK(to_string(Polarization::TE) == "TE");
  CHECK_THROWS_AS(parse_polarization("x"), ConfigError);
}

TEST_CASE("stack geometry") {
  const auto s = LayeredStack::from_period(MaterialModel::constant(3.4), MaterialModel::constant(1.0),
                                           187.5e-9, 0.656);
  CHECK(s.period() == doctest::Approx(187.5e-9));
  CHECK(s.fill() == doctest::Approx(0.656));
  CHECK(s.thickness1() + s.thickness2() == doctest::Approx(s.period()));
  CHECK(s.omega_norm(s.omega_si(0.37)) == doctest::Approx(0.37));
  CHECK(s.omega_norm(omega_from_wavelength(750e-9)) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK_THROWS_AS(LayeredStack::from_period(MaterialModel::constant(3.4), MaterialModel::constant(1.0), 1e-7, 1.2),
                  DomainError);
  CHECK_THROWS_AS(constant_stack(3.4, -1e-9, 1.0, 1e-9), DomainError);
}

TEST_CASE("homogeneous half trace is cos(kz period)") {
  for (int i = 0; i < 20; ++i) {
    const double n = uniform(1.0, 4.0);
    const auto s = constant_stack(n, uniform(10e-9, 200e-9), n, uniform(10e-9, 200e-9));
    const double omega = omega_from_wavelength(uniform(500e-9, 2000e-9));
    const double kpar = uniform(0.0, 0.99) * n * omega / kSpeedOfLight;
    const double kz = layer_kz(n, omega, kpar).real();
    for (auto pol : {Polarization::TE, Polarization::TM})
      CHECK(half_trace(s, omega, kpar, pol) == doctest::Approx(std::cos(kz * s.period())).epsilon(1e-12));
  }
}

TEST_CASE("quarter-wave stack sits mid-gap") {
  const auto s = quarter_wave();
  const double omega = omega_from_wavelength(1e-6);
  CHECK(half_trace(s, omega, 0.0, Polarization::TE) == doctest::Approx(-1.25).epsilon(1e-12));
  const BlochKz b = bloch_kz(s, omega, 0.0, Polarization::TE);
  CHECK_FALSE(b.propagating);
  CHECK(b.kz_reduced == doctest::Approx(kPi / s.period()));
  CHECK(b.attenuation == doctest::Approx(std::acosh(1.25) / s.period()).epsilon(1e-12));
}

TEST_CASE("closed form with the minus coupling matches the matrix trace; plus does not") {
  const auto s = quarter_wave();
  const double omega = omega_from_wavelength(1.3e-6);
  const double kpar = 0.3 * omega / kSpeedOfLight;
  for (auto pol : {Polarization::TE, Polarization::TM}) {
    const double m = half_trace(s, omega, kpar, pol);
    CHECK(half_trace_closed_form(s, omega, kpar, pol) == doctest::Approx(m).epsilon(1e-12));
    CHECK(std::abs(half_trace_closed_form(s, omega, kpar, pol, CouplingSign::Plus) - m) > 1e-3);
  }
}

TEST_CASE("closed form rejects a grazing layer; the matrix route takes the sinc limit") {
  const auto s = constant_stack(2.0, 50e-9, 1.0, 80e-9);
  const double omega = omega_from_wavelength(1e-6);
  const double kpar = omega / kSpeedOfLight;  // exactly grazing in layer 2
  CHECK_THROWS_AS(half_trace_closed_form(s, omega, kpar, Polarization::TE), DegenerateLayer);
  const double at = half_trace(s, omega, kpar, Polarization::TE);
  const double near = half_trace(s, omega, kpar * (1.0 - 1e-9), Polarization::TE);
  CHECK(at == doctest::Approx(near).epsilon(1e-6));
}

TEST_CASE("matrix trace agrees with an independent characteristic-matrix product") {
  for (int i = 0; i < 50; ++i) {
    const double n1 = uniform(1.0, 4.0), n2 = uniform(1.0, 4.0);
    const double a = uniform(5e-9, 300e-9), b = uniform(5e-9, 300e-9);
    const double omega = omega_from_wavelength(uniform(400e-9, 2000e-9));
    const double kpar = uniform(0.0, 0.98) * std::max(n1, n2) * omega / kSpeedOfLight;
    const auto s = constant_stack(n1, a, n2, b);
    for (bool te : {true, false}) {
      const double ref = oracle::characteristic_half_trace(n1, a, n2, b, omega, kpar, te);
      const double got = half_trace(s, omega, kpar, te ? Polarization::TE : Polarization::TM);
      CHECK(std::abs(got - ref) <= 1e-10 * std::max(1.0, std::abs(ref)));
    }
  }
}

TEST_CASE("bloch_kz invariants") {
  const auto s = test::fig3_stack();
  for (int i = 0; i < 200; ++i) {
    const double omega = s.omega_si(uniform(0.2, 0.55));
    const double kpar = uniform(0.0, 3.4) * omega / kSpeedOfLight;
    for (auto pol : {Polarization::TE, Polarization::TM}) {
      const BlochKz b = bloch_kz(s, omega, kpar, pol);
      CHECK(b.propagating == (std::abs(b.half_trace) <= 1.0));
      if (b.propagating) {
        CHECK(b.attenuation == 0.0);
        CHECK(b.kz_reduced >= 0.0);
        CHECK(b.kz_reduced <= kPi / s.period() * (1 + 1e-15));
        CHECK(std::cos(b.kz_reduced * s.period()) == doctest::Approx(b.half_trace).epsilon(1e-9));
      } else {
        CHECK(b.attenuation > 0.0);
        CHECK((b.kz_reduced == 0.0 || b.kz_reduced == doctest::Approx(kPi / s.period())));
      }
    }
  }
}

TEST_CASE("homogeneous bloch_kz equals 0.3 pi / period") {
  const double n = 1.5, period = 100e-9;
  const auto s = constant_stack(n, 40e-9, n, 60e-9);
  const double omega = 0.3 * kPi / period * kSpeedOfLight / n;
  const BlochKz b = bloch_kz(s, omega, 0.0, Polarization::TE);
  CHECK(b.propagating);
  CHECK(b.kz_reduced == doctest::Approx(0.3 * kPi / period).epsilon(1e-12));
}

TEST_CASE("depends on k_par only through its magnitude, TE = TM at normal incidence") {
  const auto s = test::fig3_stack();
  for (int i = 0; i < 100; ++i) {
    const double omega = s.omega_si(uniform(0.2, 0.55));
    const double kpar = uniform(0.0, 3.0) * omega / kSpeedOfLight;
    for (auto pol : {Polarization::TE, Polarization::TM})
      CHECK(half_trace(s, omega, -kpar, pol) == half_trace(s, omega, kpar, pol));
    CHECK(std::abs(half_trace(s, omega, 0.0, Polarization::TE) - half_trace(s, omega, 0.0, Polarization::TM)) <= 1e-12);
  }
}

TEST_CASE("18.75 nm stack long-wavelength TE limit") {
  const auto s = test::fig2_stack();
  const double omega = omega_from_wavelength(1500e-9);
  const auto [n1, n2] = s.indices(omega);
  const auto em = effective_indices(n1, n2, s.fill());
  const BlochKz b = bloch_kz(s, omega, 0.0, Polarization::TE);
  CHECK(test::rel_err(b.kz_reduced, em.n_o * omega / kSpeedOfLight) < 1e-3);
}

TEST_CASE("stopbands") {
  SUBCASE("homogeneous medium has none") {
    const auto s = constant_stack(1.5, 50e-9, 1.5, 50e-9);
    CHECK(stopbands_normal(s, Polarization::TE, s.omega_si(0.05), s.omega_si(2.0)).empty());
  }
  SUBCASE("quarter-wave centre lies in the first gap") {
    const auto s = quarter_wave();
    const double centre = omega_from_wavelength(1e-6);
    const auto gaps = stopbands_normal(s, Polarization::TE, 0.2 * centre, 1.5 * centre);
    REQUIRE(!gaps.empty());
    CHECK(gaps.front().lo < centre);
    CHECK(gaps.front().hi > centre);
    for (const auto& g : gaps) {
      CHECK(std::abs(half_trace(s, g.lo, 0.0, Polarization::TE)) == doctest::Approx(1.0).epsilon(1e-8));
      CHECK(std::abs(half_trace(s, g.hi, 0.0, Polarization::TE)) == doctest::Approx(1.0).epsilon(1e-8));
    }
  }
  SUBCASE("187.5 nm stack: first gap entirely below 0.5") {
    const auto s = test::fig3_stack();
    const auto gaps = stopbands_normal(s, Polarization::TE, s.omega_si(0.19), s.omega_si(0.55));
    REQUIRE(!gaps.empty());
    CHECK(s.omega_norm(gaps.front().hi) < 0.5);
    for (std::size_t i = 1; i < gaps.size(); ++i) CHECK(gaps[i].lo > gaps[i - 1].hi);
  }
  SUBCASE("resolution and range checks") {
    const auto s = quarter_wave();
    CHECK_THROWS_AS(stopbands_normal(s, Polarization::TE, 1e15, 2e15, 50), DomainError);
    CHECK_THROWS_AS(stopbands_normal(s, Polarization::TE, 2e15, 1e15), DomainError);
  }
}

TEST_CASE("effective indices") {
  const auto e = effective_indices(3.4, 1.0, 0.656);
  CHECK(e.n_o == doctest::Approx(2.8156).epsilon(1e-4 / 2.8156));
  CHECK(e.n_e == doctest::Approx(1.5797).epsilon(1e-4 / 1.5797));
  const auto same = effective_indices(2.0, 2.0, 0.3);
  CHECK(same.n_o == doctest::Approx(2.0));
  CHECK(same.n_e == doctest::Approx(2.0));
  const auto thin = effective_indices(3.0, 1.3, 1e-12);
  CHECK(thin.n_o == doctest::Approx(1.3));
  CHECK(thin.n_e == doctest::Approx(1.3));
  for (int i = 0; i < 100; ++i) {
    const auto r = effective_indices(uniform(1, 4), uniform(1, 4), uniform(0.01, 0.99));
    CHECK(r.n_o >= r.n_e - 1e-15);
  }
}

TEST_CASE("optimal fill") {
  const double a = optimal_fill(3.4, 1.0);
  CHECK(std::abs(a - 0.656) <= 0.01);
  CHECK(optimal_fill(1.0, 3.4) == doctest::Approx(1.0 - a).epsilon(1e-5));
  CHECK_THROWS_AS(optimal_fill(2.0, 2.0), NoBirefringence);
  // dense-grid oracle
  double best = 0.0, best_dn = -1.0;
  for (int i = 1; i < 10000; ++i) {
    const double f = i / 10000.0;
    const auto e = oracle::effective_medium(2.0, 1.0, f);
    if (e.n_o - e.n_e > best_dn) {
      best_dn = e.n_o - e.n_e;
      best = f;
    }
  }
  const double a2 = optimal_fill(2.0, 1.0);
  CHECK(a2 > 0.5);
  CHECK(a2 < 1.0);
  CHECK(std::abs(a2 - best) <= 2e-4);
}

TEST_CASE("band diagram") {
  SUBCASE("homogeneous medium propagates wherever omega >= c k / n") {
    const double n = 1.5;
    const auto s = constant_stack(n, 50e-9, n, 50e-9);
    std::vector<double> w, k;
    for (int i = 1; i <= 20; ++i) w.push_back(s.omega_si(0.05 * i));
    for (int j = 0; j < 20; ++j) k.push_back(s.k_si(0.08 * j));
    const auto d = band_diagram(s, w, k, Polarization::TM, 3);
    for (std::size_t i = 0; i < w.size(); ++i)
      for (std::size_t j = 0; j < k.size(); ++j) {
        if (n * w[i] / kSpeedOfLight > k[j] * (1 + 1e-12)) CHECK(d.at(i, j).propagating);
        CHECK(d.at(i, j).above_light_line == (w[i] > kSpeedOfLight * k[j]));
      }
  }
  SUBCASE("k_par = 0 column matches stopbands, TE = TM, thread count irrelevant") {
    const auto s = test::fig3_stack();
    std::vector<double> w, k{0.0, s.k_si(0.3)};
    for (int i = 0; i < 80; ++i) w.push_back(s.omega_si(0.19 + 0.36 * (i + 0.5) / 80));
    const auto te = band_diagram(s, w, k, Polarization::TE, 1);
    const auto tm = band_diagram(s, w, k, Polarization::TM, 4);
    const auto te4 = band_diagram(s, w, k, Polarization::TE, 4);
    const auto gaps = stopbands_normal(s, Polarization::TE, w.front(), w.back());
    for (std::size_t i = 0; i < w.size(); ++i) {
      bool in_gap = false;
      for (const auto& g : gaps) in_gap = in_gap || (w[i] >= g.lo && w[i] <= g.hi);
      CHECK(te.at(i, 0).propagating == !in_gap);
      CHECK(te.at(i, 0).propagating == tm.at(i, 0).propagating);
      CHECK(te.at(i, 1).propagating == te4.at(i, 1).propagating);
      CHECK(te.at(i, 1).attenuation == te4.at(i, 1).attenuation);
    }
  }
}
