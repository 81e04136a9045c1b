#include "nlpc/phasematch.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include "nlpc/blochmodes.hpp"
#include "nlpc/parallel.hpp"
#include "nlpc/surfaces.hpp"

namespace nlpc {

PumpSpec make_pump(const LayeredStack& stack, double omega, Polarization pol, const Vec2& kpar,
                   std::optional<int> band, std::optional<int> g_p, int g_max) {
  const FieldProfile mode = mode_profile(stack, omega, kpar.norm(), pol, band, 0);
  PumpSpec p;
  p.omega = omega;
  p.pol = pol;
  p.kpar = kpar;
  p.band = mode.band;
  p.g_p = g_p ? *g_p : leading_fraction(fourier_coefficients(mode, g_max)).g_star;
  return p;
}

double pump_kz(const LayeredStack& stack, const PumpSpec& pump) {
  const auto k = kz_extended(stack, pump.omega, pump.kpar.norm(), pump.pol, pump.band);
  if (!k) {
    std::ostringstream os;
    os << "pump at omega_norm=" << stack.omega_norm(pump.omega) << " lies in a stopband";
    throw EvanescentMode(os.str());
  }
  return *k;
}

Vec3 pump_harmonic_wavevector(const LayeredStack& stack, const PumpSpec& pump) {
  const double kz = pump_kz(stack, pump) + pump.g_p * 2.0 * kPi / stack.period();
  return {pump.kpar.x(), pump.kpar.y(), kz};
}

MatchType classify(Polarization pump, Polarization pol1, Polarization pol2) {
  if (pol1 != pol2) return MatchType::TypeII;
  return pol1 == pump ? MatchType::Type0 : MatchType::TypeI;
}

const char* to_string(MatchType type) {
  switch (type) {
    case MatchType::Type0:
      return "type-0";
    case MatchType::TypeI:
      return "type-I";
    case MatchType::TypeII:
      return "type-II";
  }
  return "?";
}

double angle_between(const Vec3& a, const Vec3& b) {
  return std::atan2(a.cross(b).norm(), a.dot(b));
}

namespace {

constexpr std::array<Signs, 4> kAllSigns{{{1, 1}, {1, -1}, {-1, 1}, {-1, -1}}};

// Everything about a (stack, pump, channel) triple that does not depend on the
// photon wavevectors.
class Matcher {
 public:
  Matcher(const LayeredStack& stack, const PumpSpec& pump, const Conversion& conv)
      : stack_(stack), pump_(pump), conv_(conv) {
    if (!(conv.split > 0.0 && conv.split < 1.0))
      throw DomainError("frequency split must lie in (0, 1)");
    omega1_ = conv.split * pump.omega;
    omega2_ = pump.omega - omega1_;
    const double g = 2.0 * kPi / stack.period();
    target_ = pump_kz(stack, pump) + pump.g_p * g - conv.g_dc * g;
    const auto [a1, a2] = stack.indices(omega1_);
    const auto [b1, b2] = stack.indices(omega2_);
    kmax1_ = std::max(a1, a2) * omega1_ / kSpeedOfLight;
    kmax2_ = std::max(b1, b2) * omega2_ / kSpeedOfLight;
  }

  std::optional<double> kz1(const Vec2& k1) const {
    return kz_extended(stack_, omega1_, k1.norm(), conv_.pol1, conv_.band1);
  }
  std::optional<double> kz2(const Vec2& k1) const {
    return kz_extended(stack_, omega2_, (pump_.kpar - k1).norm(), conv_.pol2, conv_.band2);
  }
  std::optional<double> operator()(const Vec2& k1, Signs s) const {
    const auto a = kz1(k1);
    if (!a) return std::nullopt;
    const auto b = kz2(k1);
    if (!b) return std::nullopt;
    return target_ - (s.s1 * *a + s.s2 * *b);
  }

  std::optional<MatchSolution> solution(const Vec2& k1, Signs s, double coordinate) const {
    const auto a = kz1(k1);
    const auto b = kz2(k1);
    if (!a || !b) return std::nullopt;
    MatchSolution m;
    m.photon1 = {omega1_, k1, s.s1 * *a, conv_.pol1, conv_.band1, s.s1 < 0};
    m.photon2 = {omega2_, pump_.kpar - k1, s.s2 * *b, conv_.pol2, conv_.band2, s.s2 < 0};
    m.g_p = pump_.g_p;
    m.g_dc = conv_.g_dc;
    m.residual = target_ - (s.s1 * *a + s.s2 * *b);
    m.scan_coordinate = coordinate;
    m.signs = s;
    m.type = classify(pump_.pol, conv_.pol1, conv_.pol2);
    return m;
  }

  double tolerance() const { return 1e-9 * kPi / stack_.period(); }
  double kmax1() const { return kmax1_; }
  double kmax2() const { return kmax2_; }

 private:
  const LayeredStack& stack_;
  const PumpSpec& pump_;
  const Conversion& conv_;
  double omega1_ = 0.0, omega2_ = 0.0;
  double target_ = 0.0;
  double kmax1_ = 0.0, kmax2_ = 0.0;
};

// Bisection on a scalar function with a sign change on [lo, hi]; runs to
// floating-point resolution. Returns nullopt when the function is undefined
// somewhere on the way or the bracket straddles a discontinuity.
template <class F>
std::optional<double> bisect(F&& f, double lo, double flo, double hi, double tol) {
  double best = lo, fbest = flo;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= std::min(lo, hi) || mid >= std::max(lo, hi)) break;
    const auto fm = f(mid);
    if (!fm) return std::nullopt;
    if (std::abs(*fm) < std::abs(fbest)) {
      best = mid;
      fbest = *fm;
    }
    if (*fm == 0.0) break;
    if ((*fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = *fm;
    } else {
      hi = mid;
    }
  }
  if (std::abs(fbest) >= tol) return std::nullopt;
  return best;
}

Vec2 transverse_direction(const PumpSpec& pump) {
  const double n = pump.kpar.norm();
  return n > 0.0 ? Vec2(pump.kpar / n) : Vec2(1.0, 0.0);
}

}  // namespace

std::optional<double> mismatch(const LayeredStack& stack, const PumpSpec& pump,
                               const Conversion& conv, const Vec2& kpar1, Signs signs) {
  return Matcher(stack, pump, conv)(kpar1, signs);
}

std::vector<MatchSolution> find_matches(const LayeredStack& stack, const PumpSpec& pump,
                                        const Conversion& conv, const ScanOptions& options) {
  const Matcher match(stack, pump, conv);
  const Vec2 u = transverse_direction(pump);
  const double p = pump.kpar.norm();
  const double lo = options.lo.value_or(std::max(-match.kmax1(), p - match.kmax2()));
  const double hi = options.hi.value_or(std::min(match.kmax1(), p + match.kmax2()));
  if (!(hi > lo) || options.brackets < 2) throw EmptyScan("phase-matching scan range is empty");

  const std::size_t n = options.brackets + 1;
  std::vector<double> xs(n);
  std::vector<std::optional<double>> k1(n), k2(n);
  bool any = false;
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    k1[i] = match.kz1(xs[i] * u);
    k2[i] = match.kz2(xs[i] * u);
    any = any || (k1[i] && k2[i]);
  }
  if (!any) throw EmptyScan("no propagating down-converted modes in the scan range");

  const double tol = match.tolerance();
  std::vector<MatchSolution> out;
  for (const Signs s : kAllSigns) {
    if (!options.include_backward && !(s == Signs{1, 1})) continue;
    auto f = [&](double x) { return match(x * u, s); };
    std::vector<std::optional<double>> m(n);
    for (std::size_t i = 0; i < n; ++i) {
      // Reuses the grid evaluation; equals f(xs[i]).
      if (k1[i] && k2[i]) m[i] = f(xs[i]);
    }
    std::vector<double> roots;
    for (std::size_t i = 0; i < n; ++i) {
      if (m[i] && *m[i] == 0.0) roots.push_back(xs[i]);
      if (i + 1 < n && m[i] && m[i + 1] && (*m[i] > 0.0) != (*m[i + 1] > 0.0) && *m[i] != 0.0 &&
          *m[i + 1] != 0.0) {
        if (auto r = bisect(f, xs[i], *m[i], xs[i + 1], tol)) roots.push_back(*r);
      }
    }
    for (double x : roots)
      if (auto sol = match.solution(x * u, s, x)) out.push_back(*sol);
  }
  std::sort(out.begin(), out.end(), [](const MatchSolution& a, const MatchSolution& b) {
    if (a.scan_coordinate != b.scan_coordinate) return a.scan_coordinate < b.scan_coordinate;
    if (a.signs.s1 != b.signs.s1) return a.signs.s1 > b.signs.s1;
    return a.signs.s2 > b.signs.s2;
  });
  const double dedupe = 1e-12 * std::max({std::abs(lo), std::abs(hi), 1e-300});
  out.erase(std::unique(out.begin(), out.end(),
                        [&](const MatchSolution& a, const MatchSolution& b) {
                          return a.signs == b.signs &&
                                 std::abs(a.scan_coordinate - b.scan_coordinate) <= dedupe;
                        }),
            out.end());
  return out;
}

std::vector<Vec2> EmissionCone::curve() const {
  std::vector<Vec2> c;
  c.reserve(samples.size());
  for (const auto& s : samples) c.emplace_back(s.k1.x(), s.k1.y());
  return c;
}

namespace {

Vec2 polygon_centroid(const std::vector<Vec2>& pts) {
  if (pts.empty()) return Vec2::Zero();
  Vec2 mean = Vec2::Zero();
  for (const auto& p : pts) mean += p;
  mean /= static_cast<double>(pts.size());
  double area = 0.0;
  Vec2 c = Vec2::Zero();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const Vec2 a = pts[i] - mean;
    const Vec2 b = pts[(i + 1) % pts.size()] - mean;
    const double cr = a.x() * b.y() - b.x() * a.y();
    area += cr;
    c += (a + b) * cr;
  }
  double scale = 0.0;
  for (const auto& p : pts) scale = std::max(scale, (p - mean).norm());
  if (std::abs(area) <= 1e-14 * scale * scale) return mean;
  return mean + c / (3.0 * area);
}

}  // namespace

Vec2 EmissionCone::centroid() const { return polygon_centroid(curve()); }

std::optional<double> cone_mismatch(const ConeSource& source, const Vec2& kpar1) {
  return mismatch(source.stack, source.pump, source.conv, kpar1, source.signs);
}

EmissionCone emission_cone(const LayeredStack& stack, const PumpSpec& pump, const Conversion& conv,
                           const ConeOptions& options) {
  if (options.n_azimuth < 8) throw DomainError("emission cone needs at least 8 azimuths");
  const Matcher match(stack, pump, conv);
  const double tol = match.tolerance();
  const Vec2 u = transverse_direction(pump);
  const Vec2 v(-u.y(), u.x());

  ScanOptions scan;
  const std::vector<MatchSolution> planar = find_matches(stack, pump, conv, scan);
  Signs signs{1, 1};
  if (options.signs) {
    signs = *options.signs;
  } else if (std::none_of(planar.begin(), planar.end(),
                          [](const MatchSolution& m) { return m.signs == Signs{1, 1}; }) &&
             !planar.empty()) {
    signs = planar.front().signs;
  }
  std::vector<double> seeds;
  for (const auto& m : planar)
    if (m.signs == signs) seeds.push_back(m.scan_coordinate);

  EmissionCone cone;
  cone.source = ConeSource{stack, pump, conv, signs};
  cone.type = classify(pump.pol, conv.pol1, conv.pol2);
  cone.pol1 = conv.pol1;
  cone.pol2 = conv.pol2;

  auto make_sample = [&](double phi, const Vec2& k1) -> std::optional<ConeSample> {
    const auto sol = match.solution(k1, signs, 0.0);
    if (!sol) return std::nullopt;
    return ConeSample{phi, sol->photon1.wavevector(), sol->photon2.wavevector(), sol->residual};
  };

  if (seeds.empty()) {
    // A tangent (double) root has no sign change; accept it as a cone of zero opening.
    const double p = pump.kpar.norm();
    const double lo = std::max(-match.kmax1(), p - match.kmax2());
    const double hi = std::min(match.kmax1(), p + match.kmax2());
    auto absm = [&](double x) {
      const auto m = match(x * u, signs);
      return m ? std::abs(*m) : std::numeric_limits<double>::infinity();
    };
    const std::size_t n = 4096;
    double best_x = lo, best = absm(lo);
    for (std::size_t i = 1; i <= n; ++i) {
      const double x = lo + (hi - lo) * static_cast<double>(i) / n;
      const double val = absm(x);
      if (val < best) {
        best = val;
        best_x = x;
      }
    }
    double a = best_x - (hi - lo) / n, b = best_x + (hi - lo) / n;
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    for (int it = 0; it < 200 && b - a > 0.0; ++it) {
      const double x1 = b - inv_phi * (b - a), x2 = a + inv_phi * (b - a);
      if (absm(x1) < absm(x2))
        b = x2;
      else
        a = x1;
    }
    const double x0 = 0.5 * (a + b);
    if (!(absm(x0) < tol)) throw DomainError("no planar phase-matching solution to seed the cone");
    cone.center = x0 * u;
    for (std::size_t j = 0; j < options.n_azimuth; ++j) {
      const double phi = 2.0 * kPi * static_cast<double>(j) / options.n_azimuth;
      if (auto s = make_sample(phi, cone.center)) cone.samples.push_back(*s);
    }
    cone.closed = cone.samples.size() == options.n_azimuth;
    return cone;
  }
  if (seeds.size() < 2) {
    cone.center = seeds.front() * u;
    throw OpenCurve("only one planar crossing; the solution curve does not close inside the scan",
                    cone);
  }

  const double r_max = match.kmax1() + match.kmax2();
  auto trace = [&](const Vec2& center) {
    std::vector<std::optional<ConeSample>> out(options.n_azimuth);
    const auto m0 = match(center, signs);
    if (!m0 || *m0 == 0.0) return out;
    parallel_for(options.n_azimuth, options.threads, [&](std::size_t j) {
      const double phi = 2.0 * kPi * static_cast<double>(j) / options.n_azimuth;
      const Vec2 dir = std::cos(phi) * u + std::sin(phi) * v;
      auto f = [&](double r) { return match(center + r * dir, signs); };
      const double dr = r_max / static_cast<double>(options.radial_steps);
      double prev_r = 0.0, prev_m = *m0;
      for (std::size_t i = 1; i <= options.radial_steps; ++i) {
        const double r = dr * static_cast<double>(i);
        const auto m = f(r);
        if (!m) return;
        if (*m == 0.0 || (*m > 0.0) != (prev_m > 0.0)) {
          const auto root = *m == 0.0 ? std::optional<double>(r) : bisect(f, prev_r, prev_m, r, tol);
          if (root) out[j] = make_sample(phi, center + *root * dir);
          return;
        }
        prev_r = r;
        prev_m = *m;
      }
    });
    return out;
  };

  auto collect = [&](const std::vector<std::optional<ConeSample>>& rays, std::vector<ConeSample>& dst) {
    dst.clear();
    bool complete = true;
    for (const auto& r : rays) {
      if (r)
        dst.push_back(*r);
      else
        complete = false;
    }
    return complete;
  };

  const Vec2 seed_center = 0.5 * (seeds.front() + seeds.back()) * u;
  cone.center = seed_center;
  bool complete = collect(trace(seed_center), cone.samples);
  if (complete) {
    const Vec2 c = cone.centroid();
    const auto m_seed = match(seed_center, signs);
    const auto m_c = match(c, signs);
    if (m_seed && m_c && (*m_c > 0.0) == (*m_seed > 0.0) && *m_c != 0.0) {
      std::vector<ConeSample> retraced;
      if (collect(trace(c), retraced)) {
        cone.center = c;
        cone.samples = std::move(retraced);
      }
    }
  }
  if (!complete) {
    std::ostringstream os;
    os << "emission cone traced " << cone.samples.size() << " of " << options.n_azimuth
       << " rays";
    throw OpenCurve(os.str(), cone);
  }
  const auto pts = cone.curve();
  double max_step = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) max_step = std::max(max_step, (pts[i + 1] - pts[i]).norm());
  cone.closed = (pts.back() - pts.front()).norm() <= 3.0 * max_step + tol;
  if (!cone.closed) throw OpenCurve("emission cone does not close", cone);
  return cone;
}

namespace {

bool same_channel(const ConeSource& a, const ConeSource& b) {
  return a.pump.omega == b.pump.omega && a.pump.pol == b.pump.pol && a.pump.kpar == b.pump.kpar &&
         a.pump.band == b.pump.band && a.pump.g_p == b.pump.g_p && a.conv.pol1 == b.conv.pol1 &&
         a.conv.pol2 == b.conv.pol2 && a.conv.split == b.conv.split && a.conv.g_dc == b.conv.g_dc &&
         a.conv.band1 == b.conv.band1 && a.conv.band2 == b.conv.band2 && a.signs == b.signs;
}

double distance_to_polyline(const Vec2& p, const std::vector<Vec2>& poly) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[(i + 1) % poly.size()];
    const Vec2 ab = b - a;
    const double len2 = ab.squaredNorm();
    const double t = len2 > 0.0 ? std::clamp((p - a).dot(ab) / len2, 0.0, 1.0) : 0.0;
    best = std::min(best, (a + t * ab - p).norm());
  }
  return best;
}

double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

struct Crossing {
  Vec2 point;
  std::size_t seg_a, seg_b;
  double t_a, t_b;
};

// Newton iteration on both matching conditions with a central-difference Jacobian.
std::optional<Vec2> refine_crossing(const ConeSource& a, const ConeSource& b, Vec2 x, double scale) {
  const double tiny = 1e-13 * kPi / a.stack.period();
  for (int it = 0; it < 60; ++it) {
    const auto fa = cone_mismatch(a, x);
    const auto fb = cone_mismatch(b, x);
    if (!fa || !fb) return std::nullopt;
    const Vec2 fx(*fa, *fb);
    if (fx.cwiseAbs().maxCoeff() < tiny) return x;
    const double h = 1e-7 * scale;
    Eigen::Matrix2d j;
    for (int c = 0; c < 2; ++c) {
      Vec2 e = Vec2::Zero();
      e(c) = h;
      const auto pa = cone_mismatch(a, x + e), ma = cone_mismatch(a, x - e);
      const auto pb = cone_mismatch(b, x + e), mb = cone_mismatch(b, x - e);
      if (!pa || !ma || !pb || !mb) return std::nullopt;
      j(0, c) = (*pa - *ma) / (2.0 * h);
      j(1, c) = (*pb - *mb) / (2.0 * h);
    }
    if (std::abs(j.determinant()) == 0.0) return std::nullopt;
    const Vec2 step = j.partialPivLu().solve(fx);
    x -= step;
    if (step.norm() <= 1e-16 * scale) break;
  }
  return x;
}

}  // namespace

EntanglementDirections cone_intersections(const EmissionCone& cone_a, const EmissionCone& cone_b) {
  const auto pa = cone_a.curve();
  const auto pb = cone_b.curve();
  if (pa.size() < 3 || pb.size() < 3) throw DomainError("cone curves need at least 3 samples");
  double scale = 0.0;
  for (const auto& p : pa) scale = std::max(scale, p.norm());
  for (const auto& p : pb) scale = std::max(scale, p.norm());
  if (scale == 0.0) scale = 1.0;

  if (cone_a.source && cone_b.source && same_channel(*cone_a.source, *cone_b.source))
    throw DegenerateOverlap("both cones describe the same channel");
  {
    double worst = 0.0;
    for (const auto& p : pa) worst = std::max(worst, distance_to_polyline(p, pb));
    for (const auto& p : pb) worst = std::max(worst, distance_to_polyline(p, pa));
    if (worst <= 1e-9 * scale) throw DegenerateOverlap("cone curves coincide");
  }

  std::vector<Crossing> hits;
  for (std::size_t i = 0; i < pa.size(); ++i) {
    const Vec2& p = pa[i];
    const Vec2 r = pa[(i + 1) % pa.size()] - p;
    for (std::size_t j = 0; j < pb.size(); ++j) {
      const Vec2& q = pb[j];
      const Vec2 s = pb[(j + 1) % pb.size()] - q;
      const double denom = cross2(r, s);
      if (denom == 0.0) continue;
      const double t = cross2(q - p, s) / denom;
      const double w = cross2(q - p, r) / denom;
      if (t >= 0.0 && t < 1.0 && w >= 0.0 && w < 1.0) hits.push_back({p + t * r, i, j, t, w});
    }
  }

  const bool physical = cone_a.source && cone_b.source;
  std::vector<EntangledPair> pairs;
  for (const auto& h : hits) {
    Vec2 x = h.point;
    if (physical) {
      if (auto refined = refine_crossing(*cone_a.source, *cone_b.source, x, scale)) {
        if ((*refined - x).norm() < 0.05 * scale) x = *refined;
      }
    }
    bool duplicate = false;
    for (const auto& q : pairs) duplicate = duplicate || (q.kpar1 - x).norm() <= 1e-9 * scale;
    if (duplicate) continue;

    EntangledPair pair;
    pair.kpar1 = x;
    auto lerp = [](const EmissionCone& c, std::size_t seg, double t, bool first) {
      const auto& s0 = c.samples[seg];
      const auto& s1 = c.samples[(seg + 1) % c.samples.size()];
      return first ? Vec3((1.0 - t) * s0.k1 + t * s1.k1) : Vec3((1.0 - t) * s0.k2 + t * s1.k2);
    };
    pair.k1_a = lerp(cone_a, h.seg_a, h.t_a, true);
    pair.k2_a = lerp(cone_a, h.seg_a, h.t_a, false);
    pair.k1_b = lerp(cone_b, h.seg_b, h.t_b, true);
    pair.k2_b = lerp(cone_b, h.seg_b, h.t_b, false);
    if (physical) {
      auto fill = [&](const ConeSource& src, Vec3& k1, Vec3& k2, double& residual) {
        const Matcher m(src.stack, src.pump, src.conv);
        if (auto sol = m.solution(x, src.signs, 0.0)) {
          k1 = sol->photon1.wavevector();
          k2 = sol->photon2.wavevector();
          residual = sol->residual;
        }
      };
      fill(*cone_a.source, pair.k1_a, pair.k2_a, pair.residual_a);
      fill(*cone_b.source, pair.k1_b, pair.k2_b, pair.residual_b);
    }
    pairs.push_back(pair);
  }
  if (pairs.empty()) throw NoIntersection("the two cones do not intersect");
  std::sort(pairs.begin(), pairs.end(), [](const EntangledPair& a, const EntangledPair& b) {
    return a.kpar1.y() != b.kpar1.y() ? a.kpar1.y() < b.kpar1.y() : a.kpar1.x() < b.kpar1.x();
  });
  EntanglementDirections out;
  out.pairs = std::move(pairs);
  if (out.pairs.size() >= 2)
    out.crossing_separation = angle_between(out.pairs[0].k1_a, out.pairs[1].k1_a);
  return out;
}

}  // namespace nlpc
