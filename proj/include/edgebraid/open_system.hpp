#pragma once

// Lindblad evolution of the JC chain in the vacuum + single-excitation
// subspace. Bare basis: index 0 is |G>, then |0e>_l at 1 + 2(l-1) and |1g>_l
// at 2 + 2(l-1). Times in seconds, rates and energies in rad/s.

#include <functional>
#include <vector>

#include "edgebraid/circuit_map.hpp"
#include "edgebraid/spin_chain.hpp"

namespace edgebraid {

inline int bare_ground() { return 0; }
inline int bare_qubit(int site) { return 1 + 2 * (site - 1); }   // |0e>_l
inline int bare_photon(int site) { return 2 + 2 * (site - 1); }  // |1g>_l

// (2N+1) x 2N isometry taking dressed amplitudes to the bare basis:
// |up> = (|0e> + |1g>)/sqrt2, |down> = (|0e> - |1g>)/sqrt2.
ComplexMatrix dressed_to_bare(int n_cells);

// Embeds a 2N x 2N dressed-basis operator; |G> is left decoupled.
ComplexMatrix embed_dressed_operator(const ComplexMatrix& op);

class DensityMatrix {
 public:
  // Throws ContractViolation unless Hermitian (1e-9), unit trace (1e-8) and
  // min eigenvalue >= -1e-8; dimension must be odd and >= 3.
  explicit DensityMatrix(ComplexMatrix rho);
  static DensityMatrix pure(const StateVector& bare_state);
  static DensityMatrix from_dressed(const StateVector& dressed_state);

  const ComplexMatrix& matrix() const { return rho_; }
  int n_cells() const { return static_cast<int>((rho_.rows() - 1) / 2); }

 private:
  ComplexMatrix rho_;
};

enum class HamiltonianMode { effective, full_drive };

struct LindbladConfig {
  double gamma = units::khz_to_rad(5.0);
  double duration = 1.5e-6;
  double dt = 0.5e-9;
  HamiltonianMode hamiltonian_mode = HamiltonianMode::effective;
  int record_stride = 10;  // record every this many steps (and the final time)
  bool check_positivity = true;

  void validate() const;
};

struct HamiltonianProvider {
  std::function<ComplexMatrix(double)> at;  // bare-basis matrix at time t
  bool constant = true;
};

// t0 * W H(p) W^H in the bare basis, constant in time.
HamiltonianProvider effective_provider(const ChainParams& p, double energy_unit = units::kT0);

// Lab-frame four-tone drive, converted to the bare basis.
HamiltonianProvider full_drive_provider(const DrivePlan& plan, const CircuitParams& c);

struct ObservableSeries {
  std::vector<double> times;                      // s
  std::vector<double> p1;                         // site-1 excitation
  std::vector<double> p2;                         // site-N excitation
  std::vector<std::vector<double>> site_density;  // <s+s- + a+a> per site
  std::vector<double> chiral_center;              // Tr[rho P_d]
  std::vector<double> trace_error;                // |Tr rho - 1|
  std::vector<double> hermiticity_error;          // max |rho - rho^H|
  std::vector<double> min_eigenvalue;             // NaN when positivity checks are off
  std::vector<double> total_excitation;
  double chiral_center_integral = 0.0;            // int_0^T Tr[rho P_d] dt over every step
  ComplexMatrix final_rho;
};

// a_l, sigma^-_l, sigma^z_l for l = 1..N, in that order per site.
std::vector<ComplexMatrix> collapse_operators(int n_cells);

// d rho / dt with equal rate gamma on every channel.
ComplexMatrix lindblad_rhs(const ComplexMatrix& h, const ComplexMatrix& rho, double gamma);

// RK4 integration. Throws StepSizeError if the trace drifts by more than 1e-6.
ObservableSeries lindblad_evolve(const DensityMatrix& rho0, const LindbladConfig& cfg,
                                 const HamiltonianProvider& h);

struct EdgePopulations {
  double p1 = 0.0;
  double p2 = 0.0;
};
EdgePopulations edge_populations(const DensityMatrix& rho);
EdgePopulations edge_populations(const ComplexMatrix& rho);

// P_d = sum_l l sigma_y^(l) in the bare basis.
ComplexMatrix chiral_displacement_bare(int n_cells);

enum class EdgeInitial { right, left };

// (|up>_N - i|down>_N)/sqrt2 or (|up>_1 + i|down>_1)/sqrt2 in the bare basis.
StateVector edge_initial_state(int n_cells, EdgeInitial side);

// Mid-chain spin-up polariton, (2/T) int Tr[rho P_d] dt, halved.
double chiral_center_under_decay(const ChainParams& p, const LindbladConfig& cfg, double duration,
                                 double energy_unit = units::kT0);

struct GammaSweepRow {
  double gamma = 0.0;
  double p1 = 0.0;
  double p2 = 0.0;
  double nu_half = 0.0;
};

// One edge-initial run and one chiral-center run per rate, at time tau.
// Rows are sorted by gamma; runs fan out over `threads` workers.
std::vector<GammaSweepRow> gamma_sweep(const ChainParams& p, std::vector<double> gammas, double tau,
                                       EdgeInitial initial, const LindbladConfig& base = {}, int threads = 1);

}  // namespace edgebraid
