// nlpc: batch front-end for the layered nonlinear photonic crystal library.
#include <iostream>

#include "CLI11.hpp"
#include "nlpc/cli/commands.hpp"

int main(int argc, char** argv) {
  using namespace nlpc::cli;
  CLI::App app{"Phase matching and band structure of 1D nonlinear photonic crystals"};
  app.require_subcommand(1, 1);
  app.fallthrough();

  std::string config_path;
  Flags flags;
  std::string out_dir = ".";
  app.add_option("--config", config_path, "Configuration file")->required();
  app.add_option("--out", out_dir, "Output directory");
  app.add_option("--format", flags.formats, "Output format: csv, json or svg (repeatable)")
      ->check(CLI::IsMember({"csv", "json", "svg"}))
      ->take_all();
  app.add_option("--threads", flags.threads, "Worker threads (0 = all cores)");
  app.add_flag("--quiet", flags.quiet, "Suppress progress messages");

  const std::map<std::string, std::string> help{
      {"bands", "Band diagram over (omega, k_par), CSV/SVG"},
      {"stopbands", "Normal-incidence stopbands, JSON"},
      {"surface", "Dispersion surfaces at the down-converted frequency, CSV/SVG"},
      {"modes", "Pump Bloch mode harmonics, CSV/JSON"},
      {"match", "In-plane phase-matching solutions, JSON"},
      {"cones", "Emission cones and their crossings, CSV/JSON/SVG"},
      {"efficiency", "Relative efficiency report, JSON"},
      {"optimize-fill", "Birefringence-maximizing fill fraction, JSON"}};
  for (const auto& name : command_names()) app.add_subcommand(name, help.at(name));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    flags.out = out_dir;
    const RunConfig cfg = load_config(config_path);
    run_command(app.get_subcommands().front()->get_name(), cfg, flags, std::cout);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(e);
  }
  return 0;
}
