#include "edgebraid/topology.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "edgebraid/error.hpp"

namespace edgebraid {

namespace {
int sgn(double x) { return (x > 0.0) - (x < 0.0); }
}  // namespace

std::optional<int> winding_number(double t_z, double h_z) {
  const double a = 2.0 * t_z + h_z;
  const double b = 2.0 * t_z - h_z;
  // grid points a rounding error away from |h| = 2|t| count as on the boundary
  const double tol = 1e-12 * std::max(std::abs(t_z), std::abs(h_z));
  if (t_z == 0.0 || std::abs(a) <= tol || std::abs(b) <= tol) return std::nullopt;
  const int half_sum = (sgn(a) + sgn(b)) / 2;
  return t_z > 0.0 ? half_sum : -half_sum;
}

PhaseDiagram phase_diagram(std::span<const double> t_z_grid, std::span<const double> h_z_grid) {
  if (t_z_grid.empty() || h_z_grid.empty())
    throw ContractViolation("phase_diagram: grids must be non-empty");
  PhaseDiagram out;
  out.t_z_axis.assign(t_z_grid.begin(), t_z_grid.end());
  out.h_z_axis.assign(h_z_grid.begin(), h_z_grid.end());
  std::sort(out.t_z_axis.begin(), out.t_z_axis.end());
  std::sort(out.h_z_axis.begin(), out.h_z_axis.end());
  out.nu.reserve(out.t_z_axis.size() * out.h_z_axis.size());
  for (double t : out.t_z_axis)
    for (double h : out.h_z_axis) out.nu.push_back(winding_number(t, h));
  return out;
}

ZeroModeRoots zero_mode_roots(const ChainParams& p, Branch branch) {
  const double d = branch == Branch::plus ? p.delta0 : -p.delta0;
  const double a = p.t_z + d;
  const double b = p.h_z;
  const double c = p.t_z - d;
  const double inf = std::numeric_limits<double>::infinity();

  ZeroModeRoots out;
  if (a == 0.0) {
    out.z1 = b != 0.0 ? Complex(-c / b, 0.0) : Complex(inf, 0.0);
    out.z2 = Complex(inf, 0.0);
    out.exists_left = false;
    return out;
  }
  const Complex disc = std::sqrt(Complex(b * b - 4.0 * a * c, 0.0));
  // Stable pairing: compute the larger-magnitude root first, the other from the product c/a.
  const Complex q = -0.5 * (Complex(b, 0.0) + (b >= 0.0 ? disc : -disc));
  if (std::abs(q) == 0.0) {
    out.z1 = 0.0;
    out.z2 = 0.0;
  } else {
    const Complex big = q / a;
    const Complex small = c / q;
    out.z1 = small;
    out.z2 = big;
  }
  out.exists_left = std::abs(out.z1) < 1.0 && std::abs(out.z2) < 1.0;
  return out;
}

ComplexMatrix chiral_displacement_operator(int n_cells) {
  ComplexMatrix pd = ComplexMatrix::Zero(2 * n_cells, 2 * n_cells);
  const ComplexMatrix sy = pauli::y();
  for (int l = 1; l <= n_cells; ++l) pd.block(2 * (l - 1), 2 * (l - 1), 2, 2) = double(l) * sy;
  return pd;
}

StateVector chiral_center_initial_state(int n_cells) {
  StateVector psi = StateVector::Zero(2 * n_cells);
  const int mid = (n_cells + 1) / 2;
  psi(basis_index(mid, Spin::up)) = 1.0;
  return psi;
}

ChiralCenterSeries chiral_center_dynamics(const ChainParams& p, double duration, int steps) {
  if (p.n_cells < 4) throw ContractViolation("chiral_center_dynamics: n_cells must be >= 4");
  if (!(duration > 0.0) || steps < 1)
    throw ContractViolation("chiral_center_dynamics: duration and steps must be positive");

  const auto eig = herm_eig(build_open_hamiltonian(p));
  const ComplexMatrix pd = chiral_displacement_operator(p.n_cells);
  const StateVector coeff0 = eig.vectors.adjoint() * chiral_center_initial_state(p.n_cells);
  // <P_d>(t) = sum_jk c_j* c_k e^{i(E_j - E_k) t} (V^H P_d V)_jk
  const ComplexMatrix pd_eig = eig.vectors.adjoint() * pd * eig.vectors;

  ChiralCenterSeries out;
  const double dt = duration / steps;
  out.times.reserve(steps + 1);
  double integral = 0.0;
  for (int i = 0; i <= steps; ++i) {
    const double t = i * dt;
    StateVector c = coeff0;
    for (Eigen::Index k = 0; k < c.size(); ++k) c(k) *= std::exp(-kI * eig.values(k) * t);
    const double value = c.dot(pd_eig * c).real();
    if (i > 0) integral += 0.5 * dt * (out.instantaneous_center.back() + value);
    out.times.push_back(t);
    out.instantaneous_center.push_back(value);
    out.running_average.push_back(i == 0 ? 2.0 * value : 2.0 * integral / t);
  }
  return out;
}

}  // namespace edgebraid
