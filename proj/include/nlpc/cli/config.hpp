#pragma once

#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nlpc/bandstructure.hpp"
#include "nlpc/efficiency.hpp"
#include "nlpc/phasematch.hpp"
#include "nlpc/surfaces.hpp"

namespace nlpc::cli {

/// A number with its unit suffix split off ("18.75nm" -> {18.75, "nm"}).
struct Quantity {
  double value = 0.0;
  std::string unit;
};

Quantity parse_quantity(std::string_view text);

/// Length in meters; accepts nm, um, m. "norm" is accepted when `period` is
/// known and scales by it.
double parse_length(std::string_view text, std::optional<double> period = std::nullopt);

struct GeometrySpec {
  std::optional<double> a, b;            // meters
  std::optional<double> period, fill;
};

struct PumpConfig {
  std::optional<double> wavelength;  // meters
  std::optional<double> omega_norm;
  Polarization pol = Polarization::TM;
  std::optional<std::string> kpar_text;  // resolved against the stack once known
  double azimuth = 0.0;                  // rad, direction of k_par in the layer plane
  std::optional<int> band;
  std::optional<int> g_p;
  int g_max = 32;
};

struct ScanConfig {
  double split = 0.5;
  int g_dc = 0;
  int band1 = 0;
  int band2 = 0;
  std::vector<std::pair<Polarization, Polarization>> channels;
  std::size_t brackets = 2048;
  bool backward = true;
  std::size_t n_azimuth = 256;
  std::size_t radial_steps = 512;

  double omega_min = 0.0;  // normalized
  double omega_max = 1.0;
  std::size_t omega_samples = 512;
  double kpar_max = 1.0;  // normalized
  std::size_t kpar_samples = 512;
  int samples_per_fsr = 200;

  std::optional<double> surface_omega_norm;
  std::optional<double> surface_kpar_max_norm;
  std::size_t surface_samples = 256;
  ZoneScheme zone = ZoneScheme::Extended;

  int modes_g_max = 32;
};

struct EfficiencyConfig {
  std::optional<double> chi2;      // pm/V
  std::optional<double> chi2_ref;  // pm/V
  std::optional<double> fill;
  std::optional<double> fourier;
  std::optional<double> tensor;
  std::pair<Polarization, Polarization> channel{Polarization::TE, Polarization::TM};
  Mat3 crystal_frame = default_crystal_frame();
};

struct OutputConfig {
  std::string prefix;
  std::vector<std::string> formats;
};

/// Parsed config file. Sections are optional at parse time; each command
/// asks for what it needs and gets a ConfigError when it is missing.
class RunConfig {
 public:
  std::optional<MaterialModel> material1, material2;
  GeometrySpec geometry;
  std::optional<PumpConfig> pump_config;
  ScanConfig scan;
  EfficiencyConfig efficiency;
  OutputConfig output;

  LayeredStack stack() const;
  /// Pump angular frequency (rad/s).
  double pump_omega() const;
  /// Pump transverse wavevector (rad/m).
  Vec2 pump_kpar() const;
  PumpSpec pump() const;
  Conversion conversion(Polarization pol1, Polarization pol2) const;
};

RunConfig parse_config(std::istream& in);
RunConfig load_config(const std::filesystem::path& path);

}  // namespace nlpc::cli
