#include "nlpc/cli/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace nlpc::cli {

namespace pt = boost::property_tree;

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    const std::string item = trim(s.substr(start, pos == std::string_view::npos ? s.npos : pos - start));
    if (!item.empty()) out.push_back(item);
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double parse_number(std::string_view text, std::string_view what) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(v))
    throw ConfigError(std::string(what) + ": not a number: '" + t + "'");
  return v;
}

long parse_integer(std::string_view text, std::string_view what) {
  const std::string t = trim(text);
  long v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size())
    throw ConfigError(std::string(what) + ": not an integer: '" + t + "'");
  return v;
}

std::size_t parse_count(std::string_view text, std::string_view what) {
  const long v = parse_integer(text, what);
  if (v <= 0) throw ConfigError(std::string(what) + " must be positive");
  return static_cast<std::size_t>(v);
}

bool parse_bool(std::string_view text, std::string_view what) {
  const std::string t = trim(text);
  if (t == "true" || t == "yes" || t == "1" || t == "on") return true;
  if (t == "false" || t == "no" || t == "0" || t == "off") return false;
  throw ConfigError(std::string(what) + ": expected true/false, got '" + t + "'");
}

std::pair<Polarization, Polarization> parse_channel(std::string_view text) {
  const auto parts = split(text, '/');
  if (parts.size() != 2) throw ConfigError("channel must look like TE/TM, got '" + std::string(text) + "'");
  return {parse_polarization(parts[0]), parse_polarization(parts[1])};
}

// Section view that records which keys were read so leftovers can be reported.
class Section {
 public:
  Section(const pt::ptree* tree, std::string name) : tree_(tree), name_(std::move(name)) {}

  bool present() const { return tree_ != nullptr; }

  std::optional<std::string> get(const std::string& key) {
    used_.insert(key);
    if (!tree_) return std::nullopt;
    const auto it = tree_->find(key);
    if (it == tree_->not_found()) return std::nullopt;
    return trim(it->second.data());
  }
  std::string require(const std::string& key) {
    auto v = get(key);
    if (!v || v->empty()) throw ConfigError("[" + name_ + "] missing key '" + key + "'");
    return *v;
  }
  std::string where(const std::string& key) const { return "[" + name_ + "] " + key; }

  std::optional<double> number(const std::string& key) {
    const auto v = get(key);
    if (!v) return std::nullopt;
    return parse_number(*v, where(key));
  }
  template <class T>
  void read(const std::string& key, T& dst) {
    const auto v = get(key);
    if (!v) return;
    if constexpr (std::is_same_v<T, double>)
      dst = parse_number(*v, where(key));
    else if constexpr (std::is_same_v<T, bool>)
      dst = parse_bool(*v, where(key));
    else if constexpr (std::is_same_v<T, std::size_t>)
      dst = parse_count(*v, where(key));
    else if constexpr (std::is_same_v<T, int>)
      dst = static_cast<int>(parse_integer(*v, where(key)));
  }

  void reject_unknown() const {
    if (!tree_) return;
    for (const auto& [key, _] : *tree_)
      if (!used_.count(key)) throw ConfigError("[" + name_ + "] unknown key '" + key + "'");
  }

 private:
  const pt::ptree* tree_;
  std::string name_;
  std::set<std::string> used_;
};

MaterialModel parse_inline_material(Section& s, const std::string& label) {
  const std::string model = s.require("model");
  const std::string name = s.get("name").value_or(label);
  if (model == "constant") {
    const double n = parse_number(s.require("n"), s.where("n"));
    return MaterialModel::constant(n, name);
  }
  if (model == "oscillator") {
    OscillatorIndex fit;
    fit.e0 = parse_number(s.require("e0"), s.where("e0"));
    fit.ed = parse_number(s.require("ed"), s.where("ed"));
    fit.e_gap = parse_number(s.require("e_gap"), s.where("e_gap"));
    fit.index_offset = s.number("offset").value_or(0.0);
    const double lo = parse_length(s.require("lambda_min"));
    const double hi = parse_length(s.require("lambda_max"));
    return MaterialModel::oscillator(fit, lo, hi, name);
  }
  if (model == "table") {
    std::vector<std::pair<double, double>> points;
    for (const auto& item : split(s.require("points"), ',')) {
      const auto lv = split(item, ':');
      if (lv.size() != 2) throw ConfigError(s.where("points") + ": expected wavelength:index pairs");
      points.emplace_back(parse_length(lv[0]), parse_number(lv[1], s.where("points")));
    }
    Interpolation kind = Interpolation::MonotoneCubic;
    if (const auto k = s.get("interpolation")) {
      if (*k == "linear")
        kind = Interpolation::Linear;
      else if (*k != "pchip")
        throw ConfigError(s.where("interpolation") + ": expected linear or pchip");
    }
    return MaterialModel::table(std::move(points), kind, name);
  }
  throw ConfigError(s.where("model") + ": expected constant, oscillator or table");
}

}  // namespace

Quantity parse_quantity(std::string_view text) {
  const std::string t = trim(text);
  std::size_t end = 0;
  while (end < t.size() && (std::isdigit(static_cast<unsigned char>(t[end])) || t[end] == '.' ||
                            t[end] == '-' || t[end] == '+' ||
                            ((t[end] == 'e' || t[end] == 'E') && end + 1 < t.size() &&
                             (std::isdigit(static_cast<unsigned char>(t[end + 1])) ||
                              t[end + 1] == '-' || t[end + 1] == '+'))))
    ++end;
  if (end == 0) throw ConfigError("expected a number in '" + t + "'");
  return {parse_number(t.substr(0, end), t), trim(t.substr(end))};
}

double parse_length(std::string_view text, std::optional<double> period) {
  const Quantity q = parse_quantity(text);
  if (q.unit == "nm") return q.value * 1e-9;
  if (q.unit == "um") return q.value * 1e-6;
  if (q.unit == "m") return q.value;
  if (q.unit == "norm") {
    if (!period) throw ConfigError("normalized length '" + std::string(text) + "' needs a known period");
    return q.value * *period;
  }
  throw ConfigError("length '" + std::string(text) + "' needs a unit suffix: nm, um, m or norm");
}

LayeredStack RunConfig::stack() const {
  if (!material1 || !material2) throw ConfigError("[stack] material1 and material2 are required");
  const bool thick = geometry.a || geometry.b;
  const bool periodic = geometry.period || geometry.fill;
  if (thick == periodic)
    throw ConfigError("[stack] give exactly one of {a, b} or {period, fill}");
  if (thick) {
    if (!geometry.a || !geometry.b) throw ConfigError("[stack] both a and b are required");
    return LayeredStack(*material1, *geometry.a, *material2, *geometry.b);
  }
  if (!geometry.period || !geometry.fill) throw ConfigError("[stack] both period and fill are required");
  return LayeredStack::from_period(*material1, *material2, *geometry.period, *geometry.fill);
}

double RunConfig::pump_omega() const {
  if (!pump_config) throw ConfigError("[pump] section is required");
  const PumpConfig& p = *pump_config;
  if (p.wavelength.has_value() == p.omega_norm.has_value())
    throw ConfigError("[pump] give exactly one of wavelength or omega");
  if (p.wavelength) return omega_from_wavelength(*p.wavelength);
  return stack().omega_si(*p.omega_norm);
}

Vec2 RunConfig::pump_kpar() const {
  if (!pump_config) throw ConfigError("[pump] section is required");
  const PumpConfig& p = *pump_config;
  double k = 0.0;
  if (p.kpar_text) {
    const Quantity q = parse_quantity(*p.kpar_text);
    if (q.unit == "norm")
      k = stack().k_si(q.value);
    else if (q.unit == "rad/m")
      k = q.value;
    else if (q.unit == "deg")
      k = std::sin(q.value * kPi / 180.0) * pump_omega() / kSpeedOfLight;
    else
      throw ConfigError("[pump] kpar needs a unit suffix: norm, rad/m or deg");
  }
  return {k * std::cos(p.azimuth), k * std::sin(p.azimuth)};
}

PumpSpec RunConfig::pump() const {
  const PumpConfig& p = pump_config ? *pump_config : throw ConfigError("[pump] section is required");
  return make_pump(stack(), pump_omega(), p.pol, pump_kpar(), p.band, p.g_p, p.g_max);
}

Conversion RunConfig::conversion(Polarization pol1, Polarization pol2) const {
  Conversion c;
  c.pol1 = pol1;
  c.pol2 = pol2;
  c.split = scan.split;
  c.g_dc = scan.g_dc;
  c.band1 = scan.band1;
  c.band2 = scan.band2;
  return c;
}

RunConfig parse_config(std::istream& in) {
  // Strip comments (';' or '#' to end of line) before handing over to the INI reader.
  std::ostringstream cleaned;
  std::string line;
  while (std::getline(in, line)) {
    const auto pos = line.find_first_of(";#");
    cleaned << (pos == std::string::npos ? line : line.substr(0, pos)) << '\n';
  }
  pt::ptree tree;
  try {
    std::istringstream src(cleaned.str());
    pt::ini_parser::read_ini(src, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config syntax: ") + e.what());
  }

  static const std::set<std::string> known{"stack", "material1", "material2", "pump",
                                           "scan",  "efficiency", "output"};
  for (const auto& [name, sub] : tree) {
    if (!known.count(name)) throw ConfigError("unknown section [" + name + "]");
    if (sub.empty() && !sub.data().empty()) throw ConfigError("key '" + name + "' outside any section");
  }
  auto section = [&](const std::string& name) {
    const auto it = tree.find(name);
    return Section(it == tree.not_found() ? nullptr : &it->second, name);
  };

  RunConfig cfg;
  Section stack = section("stack");
  Section mat_sections[2] = {section("material1"), section("material2")};
  for (int i = 0; i < 2; ++i) {
    const std::string key = i == 0 ? "material1" : "material2";
    const auto name = stack.get(key);
    if (!name) {
      if (mat_sections[i].present()) throw ConfigError("[" + key + "] given but [stack] " + key + " is not 'inline'");
      continue;
    }
    std::optional<MaterialModel>& dst = i == 0 ? cfg.material1 : cfg.material2;
    if (*name == "inline") {
      if (!mat_sections[i].present()) throw ConfigError("[stack] " + key + " = inline needs a [" + key + "] section");
      dst = parse_inline_material(mat_sections[i], key);
      mat_sections[i].reject_unknown();
    } else {
      if (mat_sections[i].present()) throw ConfigError("[" + key + "] given but [stack] " + key + " is not 'inline'");
      dst = builtin_material(*name);
    }
  }
  if (const auto v = stack.get("period")) cfg.geometry.period = parse_length(*v);
  if (const auto v = stack.get("fill")) cfg.geometry.fill = parse_number(*v, stack.where("fill"));
  if (const auto v = stack.get("a")) cfg.geometry.a = parse_length(*v, cfg.geometry.period);
  if (const auto v = stack.get("b")) cfg.geometry.b = parse_length(*v, cfg.geometry.period);
  stack.reject_unknown();

  Section pump = section("pump");
  if (pump.present()) {
    PumpConfig p;
    if (const auto v = pump.get("wavelength")) p.wavelength = parse_length(*v);
    if (const auto v = pump.get("omega")) {
      const Quantity q = parse_quantity(*v);
      if (q.unit != "norm") throw ConfigError("[pump] omega takes the norm suffix (omega period / (pi c))");
      p.omega_norm = q.value;
    }
    if (const auto v = pump.get("pol")) p.pol = parse_polarization(*v);
    p.kpar_text = pump.get("kpar");
    if (const auto v = pump.get("azimuth")) {
      const Quantity q = parse_quantity(*v);
      if (q.unit != "deg") throw ConfigError("[pump] azimuth takes the deg suffix");
      p.azimuth = q.value * kPi / 180.0;
    }
    if (const auto v = pump.get("band")) p.band = static_cast<int>(parse_integer(*v, pump.where("band")));
    if (const auto v = pump.get("g_p")) p.g_p = static_cast<int>(parse_integer(*v, pump.where("g_p")));
    pump.read("g_max", p.g_max);
    pump.reject_unknown();
    cfg.pump_config = p;
  }

  Section scan = section("scan");
  ScanConfig& s = cfg.scan;
  scan.read("split", s.split);
  scan.read("g_dc", s.g_dc);
  scan.read("band1", s.band1);
  scan.read("band2", s.band2);
  if (const auto v = scan.get("channels")) {
    for (const auto& c : split(*v, ',')) s.channels.push_back(parse_channel(c));
  } else {
    s.channels = {{Polarization::TE, Polarization::TE},
                  {Polarization::TE, Polarization::TM},
                  {Polarization::TM, Polarization::TE},
                  {Polarization::TM, Polarization::TM}};
  }
  scan.read("brackets", s.brackets);
  scan.read("backward", s.backward);
  scan.read("n_azimuth", s.n_azimuth);
  scan.read("radial_steps", s.radial_steps);
  scan.read("omega_min", s.omega_min);
  scan.read("omega_max", s.omega_max);
  scan.read("omega_samples", s.omega_samples);
  scan.read("kpar_max", s.kpar_max);
  scan.read("kpar_samples", s.kpar_samples);
  scan.read("samples_per_fsr", s.samples_per_fsr);
  if (const auto v = scan.number("surface_omega")) s.surface_omega_norm = *v;
  if (const auto v = scan.number("surface_kpar_max")) s.surface_kpar_max_norm = *v;
  scan.read("surface_samples", s.surface_samples);
  if (const auto v = scan.get("zone")) {
    if (*v == "reduced")
      s.zone = ZoneScheme::Reduced;
    else if (*v == "extended")
      s.zone = ZoneScheme::Extended;
    else
      throw ConfigError("[scan] zone: expected reduced or extended");
  }
  scan.read("modes_g_max", s.modes_g_max);
  scan.reject_unknown();
  if (!(s.omega_max > s.omega_min) || s.omega_min < 0.0) throw ConfigError("[scan] need 0 <= omega_min < omega_max");
  if (!(s.kpar_max >= 0.0)) throw ConfigError("[scan] kpar_max must be non-negative");
  if (s.omega_samples < 2 || s.kpar_samples < 1) throw ConfigError("[scan] grid too small");

  Section eff = section("efficiency");
  EfficiencyConfig& e = cfg.efficiency;
  e.chi2 = eff.number("chi2");
  e.chi2_ref = eff.number("chi2_ref");
  e.fill = eff.number("fill");
  e.fourier = eff.number("fourier");
  e.tensor = eff.number("tensor");
  if (const auto v = eff.get("channel")) e.channel = parse_channel(*v);
  if (const auto v = eff.get("crystal_frame")) {
    const auto parts = split(*v, ' ');
    if (parts.size() != 9) throw ConfigError("[efficiency] crystal_frame needs 9 numbers (row-major)");
    for (int i = 0; i < 9; ++i) e.crystal_frame(i / 3, i % 3) = parse_number(parts[static_cast<std::size_t>(i)], eff.where("crystal_frame"));
  }
  eff.reject_unknown();

  Section out = section("output");
  cfg.output.prefix = out.get("prefix").value_or("");
  if (const auto v = out.get("formats")) cfg.output.formats = split(*v, ',');
  out.reject_unknown();
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
  return parse_config(in);
}

}  // namespace nlpc::cli
