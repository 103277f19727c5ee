#pragma once

#include <string>
#include <vector>

#include "output.hpp"
#include "run_config.hpp"

namespace edgebraid::cli {

struct CommandContext {
  const RunConfig& cfg;
  OutputDir& out;
  Manifest& manifest;
  int threads = 1;
};

// Subcommand names in the order shown by --help.
const std::vector<std::string>& command_names();

// Runs one subcommand. Physics outcomes that are merely negative (no zero
// modes, a failed validity check) return 0 and are flagged in the manifest.
int run_command(const std::string& name, CommandContext& ctx);

int cmd_bands(CommandContext& ctx);
int cmd_phase_diagram(CommandContext& ctx);
int cmd_edge_modes(CommandContext& ctx);
int cmd_braid(CommandContext& ctx);
int cmd_drives(CommandContext& ctx);
int cmd_lindblad(CommandContext& ctx);
int cmd_chiral_center(CommandContext& ctx);

}  // namespace edgebraid::cli
