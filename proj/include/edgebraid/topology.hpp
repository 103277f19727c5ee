#pragma once

#include <optional>
#include <span>
#include <vector>

#include "edgebraid/spin_chain.hpp"

namespace edgebraid {

// nu = +-(1/2)[sgn(2t_z + h_z) + sgn(2t_z - h_z)], sign following t_z.
// Empty when t_z = 0 or either sgn argument vanishes to within 1e-12 relative (gap closed).
std::optional<int> winding_number(double t_z, double h_z);

struct PhaseDiagram {
  std::vector<double> t_z_axis;
  std::vector<double> h_z_axis;
  std::vector<std::optional<int>> nu;  // row-major: nu[i * h_z_axis.size() + j]

  std::optional<int> at(std::size_t i_t, std::size_t j_h) const {
    return nu[i_t * h_z_axis.size() + j_h];
  }
};

// Axes are sorted ascending in the result.
PhaseDiagram phase_diagram(std::span<const double> t_z_grid, std::span<const double> h_z_grid);

struct ZeroModeRoots {
  Complex z1;
  Complex z2;
  bool exists_left = false;
};

// Roots of (t_z + d) z^2 + h_z z + (t_z - d) = 0 with d = +delta0 for phi_+
// and -delta0 for phi_-; a left-edge mode needs both roots inside the unit
// circle. When the leading coefficient vanishes the second root is at
// infinity (returned as an infinite real part) and exists_left is false.
ZeroModeRoots zero_mode_roots(const ChainParams& p, Branch branch);

struct ChiralCenterSeries {
  std::vector<double> times;                 // units of 1/t0
  std::vector<double> instantaneous_center;  // <psi(t)| P_d |psi(t)>
  std::vector<double> running_average;       // (2/t) int_0^t <P_d>, i.e. nu_dynamical(t)

  double nu_dynamical() const { return running_average.back(); }
  double nu_half() const { return 0.5 * running_average.back(); }
};

// P_d = sum_l l sigma_y^(l) on the 2N-dimensional chain space.
ComplexMatrix chiral_displacement_operator(int n_cells);

// Initial state: one polariton, spin up, at site ceil(N/2).
StateVector chiral_center_initial_state(int n_cells);

ChiralCenterSeries chiral_center_dynamics(const ChainParams& p, double duration, int steps);

}  // namespace edgebraid
