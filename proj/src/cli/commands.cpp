#include "nlpc/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>

#include "nlpc/blochmodes.hpp"
#include "nlpc/cli/svg.hpp"
#include "nlpc/cli/writers.hpp"

namespace nlpc::cli {

namespace {

using Points = std::vector<std::pair<double, double>>;

const char* kColorTE = "#1f77b4";
const char* kColorTM = "#d62728";

const char* pol_color(Polarization p) { return p == Polarization::TE ? kColorTE : kColorTM; }

std::string channel_name(Polarization a, Polarization b) {
  return std::string(to_string(a)) + "-" + std::string(to_string(b));
}

class Context {
 public:
  Context(std::string name, const RunConfig& cfg, const Flags& flags, std::ostream& log)
      : name_(std::move(name)), cfg_(cfg), flags_(flags), log_(log) {
    formats_ = !flags.formats.empty()         ? flags.formats
               : !cfg.output.formats.empty() ? cfg.output.formats
                                              : std::vector<std::string>{"csv", "json", "svg"};
    for (const auto& f : formats_)
      if (f != "csv" && f != "json" && f != "svg") throw ConfigError("unknown format '" + f + "'");
  }

  const RunConfig& cfg() const { return cfg_; }
  unsigned threads() const { return flags_.threads; }
  bool wants(const std::string& fmt) const {
    return std::find(formats_.begin(), formats_.end(), fmt) != formats_.end();
  }

  void emit(const std::string& suffix, const std::string& text) {
    const std::string stem = cfg_.output.prefix.empty() ? name_ : cfg_.output.prefix + "_" + name_;
    const auto path = flags_.out / (stem + suffix);
    write_text(path, text);
    note("wrote " + path.string());
  }
  void note(const std::string& msg) {
    if (!flags_.quiet) log_ << msg << '\n';
  }

 private:
  std::string name_;
  const RunConfig& cfg_;
  const Flags& flags_;
  std::ostream& log_;
  std::vector<std::string> formats_;
};

std::string dump(const json& j) { return j.dump(2) + "\n"; }

// The configured normalized frequency window, narrowed to where both materials are defined.
std::pair<double, double> valid_window(Context& ctx, const LayeredStack& stack) {
  const ScanConfig& s = ctx.cfg().scan;
  const double lmin = std::max(stack.material1().lambda_min(), stack.material2().lambda_min());
  const double lmax = std::min(stack.material1().lambda_max(), stack.material2().lambda_max());
  double lo = s.omega_min, hi = s.omega_max;
  if (std::isfinite(lmax)) lo = std::max(lo, stack.omega_norm(omega_from_wavelength(lmax)) * (1.0 + 1e-12));
  if (lmin > 0.0) hi = std::min(hi, stack.omega_norm(omega_from_wavelength(lmin)) * (1.0 - 1e-12));
  if (!(hi > lo)) throw DomainError("frequency window lies outside the materials' validity ranges");
  if (lo != s.omega_min || hi != s.omega_max)
    ctx.note("frequency window narrowed to material validity: [" + fmt(lo) + ", " + fmt(hi) + "]");
  return {lo, hi};
}

void cmd_bands(Context& ctx) {
  const LayeredStack stack = ctx.cfg().stack();
  const ScanConfig& s = ctx.cfg().scan;
  const auto [w_lo, w_hi] = valid_window(ctx, stack);
  std::vector<double> omegas(s.omega_samples), kpars(s.kpar_samples);
  const double dw = (w_hi - w_lo) / static_cast<double>(s.omega_samples);
  for (std::size_t i = 0; i < omegas.size(); ++i)
    omegas[i] = stack.omega_si(w_lo + (static_cast<double>(i) + 0.5) * dw);
  for (std::size_t j = 0; j < kpars.size(); ++j)
    kpars[j] = kpars.size() == 1 ? 0.0
                                 : stack.k_si(s.kpar_max * static_cast<double>(j) /
                                              static_cast<double>(kpars.size() - 1));
  std::vector<BandDiagram> diagrams;
  for (auto pol : {Polarization::TE, Polarization::TM})
    diagrams.push_back(band_diagram(stack, omegas, kpars, pol, ctx.threads()));

  if (ctx.wants("csv")) ctx.emit(".csv", bands_csv(stack, diagrams).str());
  if (ctx.wants("svg")) {
    // TM on the negative k_par side, TE on the positive side.
    SvgPlot plot("Propagating Bloch modes (TM left, TE right)", "k_par period / pi",
                 "omega period / (pi c)", {-s.kpar_max, s.kpar_max}, {w_lo, w_hi});
    const double dk = kpars.size() > 1 ? s.kpar_max / static_cast<double>(kpars.size() - 1) : s.kpar_max;
    for (const auto& d : diagrams) {
      const double sign = d.pol == Polarization::TE ? 1.0 : -1.0;
      for (std::size_t i = 0; i < d.omega_grid.size(); ++i) {
        const double w = w_lo + (static_cast<double>(i) + 0.5) * dw;
        std::size_t j = 0;
        while (j < d.kpar_grid.size()) {
          if (!d.at(i, j).propagating) {
            ++j;
            continue;
          }
          const std::size_t start = j;
          while (j < d.kpar_grid.size() && d.at(i, j).propagating) ++j;
          const double k0 = std::max(0.0, (static_cast<double>(start) - 0.5) * dk);
          const double k1 = std::min(s.kpar_max, (static_cast<double>(j) - 0.5) * dk);
          plot.cell(sign * k0, w - 0.5 * dw, sign * k1, w + 0.5 * dw, "#b0b0b0");
        }
      }
    }
    plot.polyline({{-s.kpar_max, s.kpar_max}, {0.0, 0.0}, {s.kpar_max, s.kpar_max}}, "black");
    ctx.emit(".svg", plot.str());
  }
  std::size_t open = 0;
  for (const auto& d : diagrams)
    for (const auto& c : d.cells) open += c.propagating;
  ctx.note("bands: " + std::to_string(open) + " of " + std::to_string(2 * omegas.size() * kpars.size()) +
           " cells propagating");
}

void cmd_stopbands(Context& ctx) {
  const LayeredStack stack = ctx.cfg().stack();
  const ScanConfig& s = ctx.cfg().scan;
  const auto [w_lo, w_hi] = valid_window(ctx, stack);
  const double lo = stack.omega_si(w_lo > 0.0 ? w_lo : 1e-6 * w_hi);
  const double hi = stack.omega_si(w_hi);
  json j;
  j["period"] = stack.period();
  j["omega_min_norm"] = stack.omega_norm(lo);
  j["omega_max_norm"] = stack.omega_norm(hi);
  std::size_t count = 0;
  for (auto pol : {Polarization::TE, Polarization::TM}) {
    const auto bands = stopbands_normal(stack, pol, lo, hi, s.samples_per_fsr);
    j[std::string(to_string(pol))] = stopbands_json(stack, pol, bands);
    count += bands.size();
  }
  if (ctx.wants("json")) ctx.emit(".json", dump(j));
  ctx.note("stopbands: " + std::to_string(count / 2) + " per polarization");
}

void cmd_surface(Context& ctx) {
  const RunConfig& cfg = ctx.cfg();
  const LayeredStack stack = cfg.stack();
  const ScanConfig& s = cfg.scan;
  const double omega = s.surface_omega_norm ? stack.omega_si(*s.surface_omega_norm)
                                            : s.split * cfg.pump_omega();
  const auto [n1, n2] = stack.indices(omega);
  const double k_limit = std::max(n1, n2) * omega / kSpeedOfLight;
  const double kmax = s.surface_kpar_max_norm ? stack.k_si(*s.surface_kpar_max_norm) : k_limit;
  std::vector<DispersionSurface> surfaces;
  for (auto pol : {Polarization::TE, Polarization::TM})
    surfaces.push_back(surface(stack, omega, pol, kmax, s.surface_samples, s.zone, s.band1, ctx.threads()));
  if (ctx.wants("csv")) ctx.emit(".csv", surface_csv(stack, surfaces).str());

  if (ctx.wants("svg")) {
    const double km = stack.k_norm(kmax);
    double top = 0.0;
    Points curves[2];
    for (std::size_t p = 0; p < 2; ++p) {
      const auto& samples = surfaces[p].samples;
      for (auto it = samples.rbegin(); it != samples.rend(); ++it)
        curves[p].emplace_back(-stack.k_norm(it->kpar), it->kz ? stack.k_norm(*it->kz) : NAN);
      for (const auto& smp : samples)
        curves[p].emplace_back(stack.k_norm(smp.kpar), smp.kz ? stack.k_norm(*smp.kz) : NAN);
      for (const auto& [x, y] : curves[p])
        if (!std::isnan(y)) top = std::max(top, y);
    }
    // Partner surfaces hung from the tip of the pump harmonic, along the pump transverse direction.
    Points partners[2];
    std::optional<Vec3> kp;
    if (cfg.pump_config && !s.surface_omega_norm) {
      const PumpSpec pump = cfg.pump();
      kp = pump_harmonic_wavevector(stack, pump);
      const double p = pump.kpar.norm();
      const double omega2 = pump.omega - omega;
      const double target = kp->z() - s.g_dc * 2.0 * kPi / stack.period();
      for (std::size_t pi = 0; pi < 2; ++pi) {
        const Polarization pol = pi == 0 ? Polarization::TE : Polarization::TM;
        for (std::size_t i = 0; i <= 2 * s.surface_samples; ++i) {
          const double x = -kmax + 2.0 * kmax * static_cast<double>(i) / (2.0 * s.surface_samples);
          const auto k2 = kz_extended(stack, omega2, std::abs(p - x), pol, s.band2);
          partners[pi].emplace_back(stack.k_norm(x), k2 ? stack.k_norm(target - *k2) : NAN);
        }
      }
      top = std::max(top, stack.k_norm(kp->z()));
    }
    SvgPlot plot("Dispersion surfaces at omega period/(pi c) = " + fmt(stack.omega_norm(omega)),
                 "k_par period / pi", "K_z period / pi", {-km, km}, {0.0, 1.05 * top});
    for (std::size_t p = 0; p < 2; ++p) {
      const Polarization pol = p == 0 ? Polarization::TE : Polarization::TM;
      plot.polyline(curves[p], pol_color(pol));
      if (!partners[p].empty()) plot.polyline(partners[p], pol_color(pol), 0.8);
      plot.legend(std::string(to_string(pol)), pol_color(pol));
    }
    if (kp) plot.polyline({{0.0, 0.0}, {stack.k_norm(kp->x()), stack.k_norm(kp->z())}}, "black", 2.0);
    ctx.emit(".svg", plot.str());
  }
  std::size_t gaps = 0;
  for (const auto& sf : surfaces) gaps += sf.gaps.size();
  ctx.note("surface: " + std::to_string(gaps) + " k_par gap(s) across TE and TM");
}

void cmd_modes(Context& ctx) {
  const RunConfig& cfg = ctx.cfg();
  const LayeredStack stack = cfg.stack();
  const PumpSpec pump = cfg.pump();
  const FieldProfile profile =
      mode_profile(stack, pump.omega, pump.kpar.norm(), pump.pol, pump.band, 256);
  const HarmonicSpectrum spectrum = fourier_coefficients(profile, cfg.scan.modes_g_max);
  const LeadingHarmonic lead = leading_fraction(spectrum);
  if (ctx.wants("csv")) ctx.emit(".csv", harmonics_csv(spectrum).str());
  if (ctx.wants("json")) {
    json j;
    j["g_star"] = lead.g_star;
    j["fraction"] = lead.fraction;
    j["band"] = profile.band;
    j["pol"] = to_string(profile.pol);
    j["omega_norm"] = stack.omega_norm(profile.omega);
    j["kpar_norm"] = stack.k_norm(profile.kpar);
    j["kz_extended_norm"] = stack.k_norm(profile.kz_extended);
    j["g_max"] = spectrum.g_max;
    ctx.emit(".json", dump(j));
  }
  if (ctx.wants("svg")) {
    Points re, im, mag;
    double top = 0.0;
    for (std::size_t i = 0; i < profile.z.size(); ++i) top = std::max(top, std::abs(profile.values[i]));
    if (top == 0.0) top = 1.0;
    for (std::size_t i = 0; i < profile.z.size(); ++i) {
      const double z = profile.z[i] / profile.period;
      const cplx u = profile.periodic_part(profile.z[i]) / top;
      re.emplace_back(z, u.real());
      im.emplace_back(z, u.imag());
      mag.emplace_back(z, std::abs(u));
    }
    SvgPlot plot("Periodic part of the pump Bloch mode", "z / period", "u(z) / max|u|", {0.0, 1.0},
                 {-1.05, 1.05});
    plot.cell(stack.fill(), -1.05, 1.0, 1.05, "#f0f0f0");
    plot.polyline(re, kColorTE);
    plot.polyline(im, kColorTM);
    plot.polyline(mag, "black");
    plot.legend("Re", kColorTE);
    plot.legend("Im", kColorTM);
    plot.legend("|u|", "black");
    ctx.emit(".svg", plot.str());
  }
  ctx.note("modes: g* = " + std::to_string(lead.g_star) + ", fraction " + fmt(lead.fraction));
}

ScanOptions scan_options(const ScanConfig& s) {
  ScanOptions o;
  o.brackets = s.brackets;
  o.include_backward = s.backward;
  return o;
}

void cmd_match(Context& ctx) {
  const RunConfig& cfg = ctx.cfg();
  const LayeredStack stack = cfg.stack();
  const PumpSpec pump = cfg.pump();
  json arr = json::array();
  for (const auto& [p1, p2] : cfg.scan.channels) {
    const auto sols = find_matches(stack, pump, cfg.conversion(p1, p2), scan_options(cfg.scan));
    for (const auto& m : sols) arr.push_back(solution_json(stack, m));
    ctx.note("match " + channel_name(p1, p2) + ": " + std::to_string(sols.size()) + " solution(s)");
  }
  if (ctx.wants("json")) ctx.emit(".json", dump(arr));
}

void cmd_cones(Context& ctx) {
  const RunConfig& cfg = ctx.cfg();
  const LayeredStack stack = cfg.stack();
  const PumpSpec pump = cfg.pump();
  ConeOptions opt;
  opt.n_azimuth = cfg.scan.n_azimuth;
  opt.radial_steps = cfg.scan.radial_steps;
  opt.threads = ctx.threads();

  struct Traced {
    Polarization p1, p2;
    std::optional<EmissionCone> cone;
  };
  std::vector<Traced> traced;
  json cones = json::array();
  for (const auto& [p1, p2] : cfg.scan.channels) {
    json entry;
    entry["channel"] = std::string(to_string(p1)) + "/" + std::string(to_string(p2));
    Traced t{p1, p2, std::nullopt};
    try {
      t.cone = emission_cone(stack, pump, cfg.conversion(p1, p2), opt);
      entry["status"] = "closed";
      entry.update(cone_summary_json(stack, *t.cone));
      if (ctx.wants("csv")) ctx.emit("_" + channel_name(p1, p2) + ".csv", cone_csv(stack, *t.cone).str());
    } catch (const OpenCurve& e) {
      entry["status"] = "open";
      entry["message"] = e.what();
      if (!e.partial().samples.empty()) {
        entry.update(cone_summary_json(stack, e.partial()));
        if (ctx.wants("csv"))
          ctx.emit("_" + channel_name(p1, p2) + ".csv", cone_csv(stack, e.partial()).str());
      }
    } catch (const EmptyScan& e) {
      entry["status"] = "no_solution";
      entry["message"] = e.what();
    } catch (const DomainError& e) {
      entry["status"] = "no_solution";
      entry["message"] = e.what();
    }
    ctx.note("cones " + channel_name(p1, p2) + ": " + entry["status"].get<std::string>());
    cones.push_back(entry);
    traced.push_back(std::move(t));
  }

  json crossings = json::array();
  std::vector<std::pair<double, double>> marks;
  for (std::size_t i = 0; i < traced.size(); ++i) {
    for (std::size_t k = i + 1; k < traced.size(); ++k) {
      const Traced& a = traced[i];
      const Traced& b = traced[k];
      if (!a.cone || !b.cone || a.p1 == a.p2 || a.p1 != b.p2 || a.p2 != b.p1) continue;
      json entry;
      entry["cone_a"] = std::string(to_string(a.p1)) + "/" + std::string(to_string(a.p2));
      entry["cone_b"] = std::string(to_string(b.p1)) + "/" + std::string(to_string(b.p2));
      try {
        const auto dirs = cone_intersections(*a.cone, *b.cone);
        entry["status"] = "ok";
        entry.update(intersections_json(stack, dirs));
        for (const auto& p : dirs.pairs) marks.emplace_back(stack.k_norm(p.kpar1.x()), stack.k_norm(p.kpar1.y()));
      } catch (const DegenerateOverlap& e) {
        entry["status"] = "degenerate_overlap";
        entry["message"] = e.what();
      } catch (const NoIntersection& e) {
        entry["status"] = "no_intersection";
        entry["message"] = e.what();
      }
      ctx.note("intersections " + entry["cone_a"].get<std::string>() + " x " +
               entry["cone_b"].get<std::string>() + ": " + entry["status"].get<std::string>());
      crossings.push_back(entry);
    }
  }

  if (ctx.wants("json")) {
    json j;
    j["pump_kpar_norm"] = vec_json(Vec2(pump.kpar * stack.period() / kPi));
    j["pump_band"] = pump.band;
    j["g_p"] = pump.g_p;
    j["cones"] = cones;
    j["intersections"] = crossings;
    ctx.emit(".json", dump(j));
  }
  if (ctx.wants("svg")) {
    double ext = 0.0;
    std::vector<std::pair<Points, const char*>> lines;
    const char* palette[] = {"#2ca02c", kColorTE, kColorTM, "#9467bd"};
    for (std::size_t i = 0; i < traced.size(); ++i) {
      if (!traced[i].cone) continue;
      Points pts;
      for (const auto& v : traced[i].cone->curve()) {
        pts.emplace_back(stack.k_norm(v.x()), stack.k_norm(v.y()));
        ext = std::max({ext, std::abs(pts.back().first), std::abs(pts.back().second)});
      }
      if (!pts.empty()) pts.push_back(pts.front());
      lines.emplace_back(std::move(pts), palette[i % 4]);
    }
    if (ext == 0.0) ext = 1.0;
    SvgPlot plot("Photon-1 transverse wavevectors", "k1x period / pi", "k1y period / pi",
                 {-1.1 * ext, 1.1 * ext}, {-1.1 * ext, 1.1 * ext});
    std::size_t li = 0;
    for (std::size_t i = 0; i < traced.size(); ++i) {
      if (!traced[i].cone) continue;
      plot.polyline(lines[li].first, lines[li].second);
      plot.legend(channel_name(traced[i].p1, traced[i].p2), lines[li].second);
      ++li;
    }
    plot.markers(marks, "black");
    ctx.emit(".svg", plot.str());
  }
}

void cmd_efficiency(Context& ctx) {
  const RunConfig& cfg = ctx.cfg();
  const EfficiencyConfig& e = cfg.efficiency;
  json provenance, computed;

  std::optional<LayeredStack> stack;
  try {
    stack = cfg.stack();
  } catch (const ConfigError&) {
    if (!e.fill || !e.fourier || !e.tensor) throw;
  }
  std::optional<PumpSpec> pump;
  if (stack && cfg.pump_config) pump = cfg.pump();

  EfficiencyFactors f;
  const double chi2 = e.chi2.value_or(200.0);
  const double chi2_ref = e.chi2_ref.value_or(2.2);
  if (!(chi2_ref > 0.0)) throw ConfigError("[efficiency] chi2_ref must be positive");
  f.chi2_ratio = chi2 / chi2_ref;
  provenance["chi2_ratio"] = e.chi2 && e.chi2_ref ? "config" : "default";

  if (stack) computed["fill"] = stack->fill();
  f.fill = e.fill ? *e.fill : stack->fill();
  provenance["fill"] = e.fill ? "config" : "computed";

  if (pump) {
    const FieldProfile profile =
        mode_profile(*stack, pump->omega, pump->kpar.norm(), pump->pol, pump->band, 0);
    const LeadingHarmonic lead = leading_fraction(fourier_coefficients(profile, cfg.scan.modes_g_max));
    computed["fourier"] = lead.fraction;
    computed["g_star"] = lead.g_star;
  }
  if (!e.fourier && !pump) throw ConfigError("[efficiency] fourier needs a value or a [pump] section");
  f.fourier = e.fourier ? *e.fourier : computed["fourier"].get<double>();
  provenance["fourier"] = e.fourier ? "config" : "computed";

  if (pump) {
    const auto [p1, p2] = e.channel;
    const auto sols = find_matches(*stack, *pump, cfg.conversion(p1, p2), scan_options(cfg.scan));
    const auto fwd = std::find_if(sols.begin(), sols.end(),
                                  [](const MatchSolution& m) { return m.signs == Signs{1, 1}; });
    const MatchSolution* pick = fwd != sols.end() ? &*fwd : (sols.empty() ? nullptr : &sols.front());
    if (pick) {
      computed["tensor"] = solution_tensor_factor(*stack, *pump, *pick, e.crystal_frame);
      computed["tensor_channel"] = std::string(to_string(p1)) + "/" + std::string(to_string(p2));
      computed["tensor_solution"] = solution_json(*stack, *pick);
    }
  }
  if (!e.tensor && !computed.contains("tensor"))
    throw DomainError("no phase-matching solution to compute the tensor factor from");
  f.tensor = e.tensor ? *e.tensor : computed["tensor"].get<double>();
  provenance["tensor"] = e.tensor ? "config" : "computed";

  const EfficiencyReport r = relative_efficiency(f);
  json j;
  j["factors"] = {{"chi2_ratio", f.chi2_ratio}, {"fill", f.fill}, {"fourier", f.fourier}, {"tensor", f.tensor}};
  j["provenance"] = provenance;
  j["amplitude"] = r.amplitude;
  j["efficiency"] = r.efficiency;
  j["computed"] = computed;
  if (ctx.wants("json")) ctx.emit(".json", dump(j));
  ctx.note("efficiency: " + fmt(r.efficiency) + " relative to the reference crystal");
}

void cmd_optimize_fill(Context& ctx) {
  const RunConfig& cfg = ctx.cfg();
  if (!cfg.material1 || !cfg.material2) throw ConfigError("[stack] material1 and material2 are required");
  double n1 = 0.0, n2 = 0.0;
  json j;
  if (cfg.pump_config && cfg.pump_config->wavelength) {
    const double lambda = *cfg.pump_config->wavelength;
    n1 = cfg.material1->index(lambda);
    n2 = cfg.material2->index(lambda);
    j["wavelength"] = lambda;
  } else if (cfg.material1->is_constant() && cfg.material2->is_constant()) {
    n1 = std::get<ConstantIndex>(cfg.material1->model()).n;
    n2 = std::get<ConstantIndex>(cfg.material2->model()).n;
  } else {
    throw ConfigError("optimize-fill on dispersive materials needs [pump] wavelength");
  }
  const double alpha = optimal_fill(n1, n2);
  const EffectiveIndices eff = effective_indices(n1, n2, alpha);
  j["alpha_star"] = alpha;
  j["n1"] = n1;
  j["n2"] = n2;
  j["n_o"] = eff.n_o;
  j["n_e"] = eff.n_e;
  if (ctx.wants("json")) ctx.emit(".json", dump(j));
  ctx.note("optimize-fill: alpha* = " + fmt(alpha));
}

const std::map<std::string, std::function<void(Context&)>>& registry() {
  static const std::map<std::string, std::function<void(Context&)>> r{
      {"bands", cmd_bands},         {"stopbands", cmd_stopbands},   {"surface", cmd_surface},
      {"modes", cmd_modes},         {"match", cmd_match},           {"cones", cmd_cones},
      {"efficiency", cmd_efficiency}, {"optimize-fill", cmd_optimize_fill}};
  return r;
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"bands", "stopbands", "surface",    "modes",
                                              "match", "cones",     "efficiency", "optimize-fill"};
  return names;
}

void run_command(const std::string& name, const RunConfig& config, const Flags& flags,
                 std::ostream& log) {
  const auto it = registry().find(name);
  if (it == registry().end()) throw ConfigError("unknown subcommand '" + name + "'");
  std::filesystem::create_directories(flags.out);
  Context ctx(name, config, flags, log);
  it->second(ctx);
}

int exit_code(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e)) return 2;
  if (dynamic_cast<const DomainError*>(&e)) return 3;
  return 1;
}

}  // namespace nlpc::cli
