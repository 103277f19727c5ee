#pragma once

// Run configuration: one JSON document, every physical key carries its unit
// in the name. Frequencies are ordinary (cycles/s); the 2*pi is applied when
// converting to the internal t0 = 1 units.

#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "edgebraid/braiding.hpp"
#include "edgebraid/circuit_map.hpp"
#include "edgebraid/edge_modes.hpp"
#include "edgebraid/open_system.hpp"

namespace edgebraid::cli {

struct ModelSection {
  std::string dot;  // "", "A", "B", "C", "D"
  double t_z_mhz = 4.0;
  double delta0_mhz = 3.96;
  double h_z_mhz = 1.2;
  double phi_rad = 0.0;
  int n_cells = 16;
};

struct CircuitSection {
  double omega_r_mhz = 6000.0;
  double omega_b_mhz = 5840.0;
  double g_r_mhz = 200.0;
  double g_b_mhz = 120.0;
};

struct BandsSection {
  int k_samples = 1024;
};

struct PhaseDiagramSection {
  double t_z_min_mhz = -8.0;
  double t_z_max_mhz = 8.0;
  int t_z_points = 41;
  double h_z_min_mhz = -12.0;
  double h_z_max_mhz = 12.0;
  int h_z_points = 41;
  bool dynamical = false;
  int dynamical_stride = 5;          // every n-th grid point in each direction
  double dynamical_duration_t0inv = 200.0;
  int dynamical_steps = 2000;
  double dynamical_min_gap_mhz = 2.0;
};

struct EdgeModesSection {
  double zero_threshold_mhz = 4e-4;
};

struct ProtocolSection {
  std::vector<std::string> order{"O1", "O2"};  // empty list: identity protocol
  std::vector<double> durations_us{3.0};
  std::string ramp_shape = "cosine";
  std::string mode = "tracking";
  int steps_per_op = 250;
  double gap_floor_mhz = 4.0;
};

struct DrivesSection {
  bool cross_validation = false;
  double window_ns = 200.0;
  int steps_per_period = 64;
  double min_ratio = 20.0;
};

struct LindbladSection {
  std::vector<double> gammas_khz{0.0, 5.0, 20.0, 100.0};
  double duration_us = 1.5;
  double dt_ns = 0.5;
  std::string initial = "right";  // right | left | both
  std::string hamiltonian = "effective";
  int record_stride = 10;
};

struct OutputSection {
  std::string directory;  // empty: EDGEBRAID_OUT or ./out
  std::string format = "csv";
};

struct RunConfig {
  double t0_mhz = 4.0;
  ModelSection model;
  CircuitSection circuit;
  BandsSection bands;
  PhaseDiagramSection phase_diagram;
  EdgeModesSection edge_modes;
  ProtocolSection protocol;
  DrivesSection drives;
  LindbladSection lindblad;
  OutputSection output;
  std::set<std::string> explicit_keys;  // dotted paths set by file or --set

  double energy_unit() const;  // t0 in rad/s
  ChainParams chain_params() const;
  CircuitParams circuit_params() const;
  CompareOptions compare_options() const;
  LindbladConfig lindblad_config() const;
  std::vector<double> gammas_rad() const;
  void validate() const;
};

// Dotted path of every accepted key, in schema order.
std::vector<std::string> config_keys();

// Throws ConfigError on unknown keys or wrong value types.
void apply_json(RunConfig& cfg, const nlohmann::json& doc);
void apply_override(RunConfig& cfg, const std::string& assignment);  // "a.b=value"
RunConfig load_config(const std::string& path);

nlohmann::json to_json(const RunConfig& cfg);  // every key, canonical order
std::string canonical_text(const RunConfig& cfg);
std::string config_hash(const RunConfig& cfg);  // FNV-1a 64, hex

}  // namespace edgebraid::cli
