#pragma once

#include <random>
#include <string>

#include "nlpc/cli/config.hpp"

namespace nlpc::test {

inline std::string source_path(const std::string& rel) { return std::string(NLPC_SOURCE_DIR) + "/" + rel; }

inline cli::RunConfig figure_config(int fig) {
  return cli::load_config(source_path("configs/fig" + std::to_string(fig) + ".cfg"));
}

inline LayeredStack fig2_stack() {
  return LayeredStack::from_period(builtin_material("algaas-x0.4"), builtin_material("air"), 18.75e-9,
                                   0.656);
}

inline LayeredStack fig3_stack() {
  return LayeredStack::from_period(builtin_material("algaas-x0.4"), builtin_material("air"), 187.5e-9,
                                   0.656);
}

inline LayeredStack constant_stack(double n1, double a, double n2, double b) {
  return LayeredStack(MaterialModel::constant(n1), a, MaterialModel::constant(n2), b);
}

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

/// Reproducible random source for property-style tests.
inline std::mt19937_64& rng() {
  static std::mt19937_64 gen(20240611);
  return gen;
}

inline double uniform(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng());
}

}  // namespace nlpc::test
