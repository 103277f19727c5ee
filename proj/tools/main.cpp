#include <chrono>
#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "edgebraid/error.hpp"
#include "edgebraid/units.hpp"

using namespace edgebraid;
using namespace edgebraid::cli;

int main(int argc, char** argv) {
  CLI::App app{"edgebraid: topological edge states of a polariton chain"};
  app.require_subcommand(1);
  std::string config_path, out_dir, format;
  std::vector<std::string> overrides;
  int threads = 1;
  bool seedless = false;
  app.add_option("--config", config_path, "JSON run configuration");
  app.add_option("--out", out_dir, "output directory (default: $EDGEBRAID_OUT or ./out)");
  app.add_option("--format", format, "table format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--threads", threads, "worker threads for sweeps")->check(CLI::PositiveNumber);
  app.add_flag("--seedless", seedless, "no-op: every computation is deterministic");
  app.add_option("--set", overrides, "override a config key, e.g. --set lindblad.gammas_khz=[0,5]");
  const char* help[] = {"band structure on a k grid", "winding-number phase diagram",
                        "zero modes, analytic vs numeric", "braiding order comparison",
                        "four-tone drive synthesis and RWA checks", "open-system edge detection",
                        "chiral center under decay"};
  for (std::size_t i = 0; i < command_names().size(); ++i) app.add_subcommand(command_names()[i], help[i])->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    RunConfig cfg = config_path.empty() ? RunConfig{} : load_config(config_path);
    for (const auto& s : overrides) apply_override(cfg, s);
    if (!format.empty()) cfg.output.format = format;
    if (!out_dir.empty()) {
      cfg.output.directory = out_dir;
    } else if (cfg.output.directory.empty()) {
      const char* env = std::getenv("EDGEBRAID_OUT");
      cfg.output.directory = env && *env ? env : "out";
    }
    cfg.validate();

    OutputDir out(cfg.output.directory, cfg.output.format);
    Manifest manifest;
    manifest.command = command;
    manifest.config_hash = config_hash(cfg);
    manifest.config = to_json(cfg);
    manifest.t0_hz = cfg.t0_mhz * 1e6;
    CommandContext ctx{cfg, out, manifest, threads};
    const auto start = std::chrono::steady_clock::now();
    int code = 0;
    try {
      code = run_command(command, ctx);
    } catch (const TrackingLoss& e) {
      manifest.status = "tracking_loss at step " + std::to_string(e.step());
      code = 3;
      std::cerr << "edgebraid " << command << ": " << e.what() << " (step " << e.step() << ")\n";
    } catch (const StepSizeError& e) {
      manifest.status = "step_size_error";
      code = 3;
      std::cerr << "edgebraid " << command << ": " << e.what() << "\n";
    }
    manifest.wall_clock_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_manifest(out, manifest);
    for (const auto& w : manifest.warnings) std::cerr << "warning: " << w << "\n";
    std::cout << out.path().string() << "/manifest.json\n";
    return code;
  } catch (const ConfigError& e) {
    std::cerr << "edgebraid " << command << ": config error: " << e.what() << "\n";
    return 2;
  } catch (const ContractViolation& e) {
    std::cerr << "edgebraid " << command << ": invalid input: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "edgebraid " << command << ": " << e.what() << "\n";
    return 1;
  }
}
