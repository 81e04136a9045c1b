#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace nlpc {

/// Wavelength-independent index.
struct ConstantIndex {
  double n = 1.0;
};

/// Single-effective-oscillator fit of a III-V alloy (energies in eV):
///   n^2 - 1 = Ed/E0 + Ed E^2/E0^3 + (eta/pi) E^4 ln((2E0^2 - Eg^2 - E^2)/(Eg^2 - E^2))
/// with eta = pi Ed / (2 E0^3 (E0^2 - Eg^2)). `index_offset` is added to n.
struct OscillatorIndex {
  double e0 = 0.0;
  double ed = 0.0;
  double e_gap = 0.0;
  double index_offset = 0.0;
};

enum class Interpolation { Linear, MonotoneCubic };

/// Tabulated (vacuum wavelength [m], index) pairs, strictly increasing in wavelength.
struct TableIndex {
  std::vector<std::pair<double, double>> points;
  Interpolation kind = Interpolation::MonotoneCubic;
};

/// Lossless dielectric with a wavelength-dependent real index valid on
/// [lambda_min, lambda_max]. Immutable after construction.
class MaterialModel {
 public:
  using Model = std::variant<ConstantIndex, OscillatorIndex, TableIndex>;

  static MaterialModel constant(double n, std::string name = "constant");
  static MaterialModel oscillator(OscillatorIndex fit, double lambda_min, double lambda_max,
                                  std::string name = "oscillator");
  /// Validity range defaults to the table span.
  static MaterialModel table(std::vector<std::pair<double, double>> points,
                             Interpolation kind = Interpolation::MonotoneCubic,
                             std::string name = "table");

  /// Throws OutOfRange outside [lambda_min, lambda_max].
  double index(double lambda_vac) const;

  const std::string& name() const { return name_; }
  double lambda_min() const { return lambda_min_; }
  double lambda_max() const { return lambda_max_; }
  const Model& model() const { return model_; }
  bool is_constant() const { return std::holds_alternative<ConstantIndex>(model_); }

 private:
  MaterialModel(Model model, double lambda_min, double lambda_max, std::string name);
  void validate() const;

  Model model_;
  double lambda_min_;
  double lambda_max_;
  std::string name_;
  std::vector<double> slopes_;  // Hermite tangents for MonotoneCubic tables
};

inline double refractive_index(const MaterialModel& model, double lambda_vac) {
  return model.index(lambda_vac);
}

/// Registered presets: "air", "algaas-x0.4", "bbo-ordinary", "bbo-extraordinary".
/// Throws UnknownMaterial for any other name.
MaterialModel builtin_material(std::string_view name);

std::vector<std::string> builtin_material_names();

}  // namespace nlpc
