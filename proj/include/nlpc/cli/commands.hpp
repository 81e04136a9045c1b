#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "nlpc/cli/config.hpp"

namespace nlpc::cli {

struct Flags {
  std::filesystem::path out = ".";
  std::vector<std::string> formats;  // empty: config [output] formats, else every format
  unsigned threads = 1;
  bool quiet = false;
};

const std::vector<std::string>& command_names();

/// Runs one subcommand and writes its artifacts under flags.out. Library
/// errors propagate; map them with exit_code().
void run_command(const std::string& name, const RunConfig& config, const Flags& flags,
                 std::ostream& log);

/// 2 for config errors, 3 for domain errors, 1 for anything else.
int exit_code(const std::exception& e);

}  // namespace nlpc::cli
