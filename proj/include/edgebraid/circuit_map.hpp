#pragma once

// JC-lattice implementation of the spin chain: dressed levels, four-tone
// drives per link, the rotating-frame effective Hamiltonian and checks of
// the rotating-wave reduction.
//
// Angular frequencies are in rad/s and times in seconds; the chain itself
// stays in t0 units, converted with CircuitParams::energy_unit.

#include <array>
#include <string>
#include <vector>

#include <json.hpp>

#include "edgebraid/spin_chain.hpp"
#include "edgebraid/units.hpp"

namespace edgebraid {

struct CircuitParams {
  double omega_r = units::ghz_to_rad(6.0);
  double omega_b = units::ghz_to_rad(5.84);
  double g_r = units::mhz_to_rad(200.0);
  double g_b = units::mhz_to_rad(120.0);
  int n_cells = 16;
  double energy_unit = units::kT0;  // t0 in rad/s

  // Throws ContractViolation unless frequencies are positive and g/omega < 0.1.
  void validate() const;
};

struct DressedLevels {
  std::vector<double> e_up;    // site l at index l-1
  std::vector<double> e_down;
  std::vector<char> cell_type;  // 'R' for odd sites, 'B' for even
};

DressedLevels dressed_energies(const CircuitParams& c);

struct HoppingGaps {
  std::array<double, 4> values{};  // |E_{1,a} - E_{2,a'}|, ascending
  double min_gap = 0.0;
  double min_separation = 0.0;
  bool collision = false;  // some gap or pairwise separation below ratio * t0
};

HoppingGaps hopping_gaps(const CircuitParams& c, double min_ratio = 20.0);

enum class ToneBranch { uu, dd, ud, du };
std::string to_string(ToneBranch b);
ToneBranch tone_branch_from_string(const std::string& s);

struct DriveTone {
  ToneBranch branch = ToneBranch::uu;
  double frequency = 0.0;  // signed omega^d, rad/s
  double amplitude = 0.0;  // non-negative, rad/s (4 |t|)
  double phase = 0.0;      // rad; a negative coefficient adds pi
};

struct LinkDrive {
  int link = 1;  // couples sites link and link+1
  std::vector<DriveTone> tones;
};

struct DrivePlan {
  std::vector<LinkDrive> links;
  std::vector<std::array<double, 2>> frame_offsets;  // p_{l,up}, p_{l,down} in rad/s
  double energy_unit = units::kT0;

  int n_cells() const { return static_cast<int>(frame_offsets.size()); }
};

DrivePlan synthesize_drives(const ChainParams& p, const CircuitParams& c);

// Rotating-frame matrix implied by the plan, in t0 units, without checks.
ComplexMatrix effective_from_plan(const DrivePlan& plan);

// Same matrix, verified entrywise against build_open_hamiltonian(p) to 1e-12
// and each tone's frequency against the resonance condition. Throws
// SynthesisMismatch naming the offending entry.
ComplexMatrix rwa_effective_hamiltonian(const DrivePlan& plan, const ChainParams& p, const CircuitParams& c);

struct RwaValidityReport {
  double min_abs_ratio = 0.0;       // min |omega_i| / t_max
  double min_pairwise_ratio = 0.0;  // min_{i != j} |omega_i +- omega_j| / t_max, same link; inf if vacuous
  double max_effective_hopping = 0.0;  // t_max = max amplitude / 4, rad/s
  double threshold = 20.0;
  bool pass = false;
};

RwaValidityReport rwa_validity(const DrivePlan& plan, double threshold = 20.0);

// Lab-frame matrix over {|G>, |up>_l, |down>_l}: index 0 is |G>, then
// 1 + basis_index(l, s). Entries in rad/s.
ComplexMatrix full_drive_hamiltonian(const DrivePlan& plan, const CircuitParams& c, double t);

struct CrossValidationOptions {
  int steps_per_period = 64;  // of the fastest interaction-picture frequency; >= 40
  double doubling_tol = 1e-3;
};

struct CrossValidationResult {
  double fidelity = 0.0;          // fine-grid result
  double fidelity_coarse = 0.0;   // half the steps
  double doubling_change = 0.0;   // 1 - |<psi_coarse|psi_fine>|^2
  double fastest_frequency = 0.0;  // rad/s
  long steps = 0;
};

// Propagates the effective left zero mode of p under the full four-tone
// drive (interaction picture with respect to the dressed levels, RK4) and
// under the effective Hamiltonian, and returns their squared overlap after
// the frame phases exp(i p_{l,a} t) are applied. Window at most 1 us.
// Throws StepSizeError when halving the step changes the state by more
// than doubling_tol.
CrossValidationResult rwa_cross_validation(const DrivePlan& plan, const ChainParams& p, const CircuitParams& c,
                                           double window, const CrossValidationOptions& opts = {});

// Same, from an explicit initial state of length 2N (dressed single-excitation basis).
CrossValidationResult rwa_cross_validation(const DrivePlan& plan, const CircuitParams& c, const StateVector& initial,
                                           double window, const CrossValidationOptions& opts = {});

// Frequencies and amplitudes in plain Hz (divide rad/s by 2 pi).
nlohmann::json to_json(const DrivePlan& plan);
DrivePlan drive_plan_from_json(const nlohmann::json& j);

}  // namespace edgebraid
