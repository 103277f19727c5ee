#pragma once

// Real-space open chain and its Bloch Hamiltonian.
//
// Energies are in units of t0. The single-excitation basis is site-major,
// spin-minor: index(l, up) = 2(l-1), index(l, down) = 2(l-1)+1 for l = 1..N.

#include <utility>

#include "edgebraid/numkit.hpp"

namespace edgebraid {

enum class Spin { up = 0, down = 1 };

struct ChainParams {
  double t_z = 1.0;
  double delta0 = 0.99;
  double h_z = 0.3;
  double phi = 0.0;
  int n_cells = 16;

  friend bool operator==(const ChainParams&, const ChainParams&) = default;
};

// Operating point used throughout: t_z = 1, delta0 = 0.99, h_z = 0.3, phi = 0, N = 16.
inline ChainParams canonical_params() { return ChainParams{}; }

inline int basis_index(int site, Spin s) { return 2 * (site - 1) + static_cast<int>(s); }

// Normalized amplitude vector over (site, spin), length 2N.
class SpinorState {
 public:
  // Throws ContractViolation unless ||amplitudes|| = 1 within 1e-9.
  explicit SpinorState(StateVector amplitudes);
  static SpinorState normalized(StateVector amplitudes);

  const StateVector& amplitudes() const { return amps_; }
  int n_cells() const { return static_cast<int>(amps_.size() / 2); }
  Complex up(int site) const { return amps_(basis_index(site, Spin::up)); }
  Complex down(int site) const { return amps_(basis_index(site, Spin::down)); }

  // |amplitude|^2 summed over spin, per site (index 0 <-> site 1).
  std::vector<double> site_density() const;

 private:
  StateVector amps_;
};

namespace pauli {
ComplexMatrix x();
ComplexMatrix y();
ComplexMatrix z();
}  // namespace pauli

// phi_+ = (1, i)/sqrt2 and phi_- = (1, -i)/sqrt2, the sigma_y eigenspinors.
enum class Branch { plus, minus };
Eigen::Vector2cd spinor(Branch b);

ComplexMatrix build_open_hamiltonian(const ChainParams& p);

struct BlochMatrix {
  double k = 0.0;
  ComplexMatrix matrix;  // 2x2
};

// [h_z + 2 t_z cos k] sigma_z + 2 delta0 sin k sigma_x. Requires phi = 0.
BlochMatrix build_bloch(const ChainParams& p, double k);

struct BandPair {
  double lower;
  double upper;
};
BandPair band_energies(const ChainParams& p, double k);

inline constexpr int kDefaultKSamples = 1024;

// 2 min_k E_+(k): uniform grid on [-pi, pi) refined by golden-section search.
double minimum_gap(const ChainParams& p, int k_samples = kDefaultKSamples);

// max_k || sigma_y h(k) sigma_y + h(k) || over a uniform grid.
double chiral_symmetry_residual(const ChainParams& p, int k_samples = 256);

// Sum over sites of <sigma_y> for a state on the 2N-dimensional chain space.
double sigma_y_expectation(const StateVector& psi);

}  // namespace edgebraid
