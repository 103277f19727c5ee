#include "edgebraid/spin_chain.hpp"

#include <cmath>
#include <numbers>

#include "edgebraid/error.hpp"

namespace edgebraid {

SpinorState::SpinorState(StateVector amplitudes) : amps_(std::move(amplitudes)) {
  if (amps_.size() < 2 || amps_.size() % 2 != 0)
    throw ContractViolation("SpinorState: length must be 2N");
  if (std::abs(amps_.norm() - 1.0) > 1e-9)
    throw ContractViolation("SpinorState: amplitudes are not normalized");
}

SpinorState SpinorState::normalized(StateVector amplitudes) {
  const double norm = amplitudes.norm();
  if (norm == 0.0) throw ContractViolation("SpinorState: zero vector");
  return SpinorState(amplitudes / norm);
}

std::vector<double> SpinorState::site_density() const {
  std::vector<double> out(n_cells());
  for (int l = 1; l <= n_cells(); ++l) out[l - 1] = std::norm(up(l)) + std::norm(down(l));
  return out;
}

namespace pauli {
ComplexMatrix x() {
  ComplexMatrix m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}
ComplexMatrix y() {
  ComplexMatrix m(2, 2);
  m << 0.0, -kI, kI, 0.0;
  return m;
}
ComplexMatrix z() {
  ComplexMatrix m(2, 2);
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}
}  // namespace pauli

Eigen::Vector2cd spinor(Branch b) {
  const double s = 1.0 / std::numbers::sqrt2;
  return b == Branch::plus ? Eigen::Vector2cd(s, kI * s) : Eigen::Vector2cd(s, -kI * s);
}

ComplexMatrix build_open_hamiltonian(const ChainParams& p) {
  if (p.n_cells < 2) throw ContractViolation("build_open_hamiltonian: n_cells must be >= 2");
  if (!std::isfinite(p.t_z) || !std::isfinite(p.delta0) || !std::isfinite(p.h_z) ||
      !std::isfinite(p.phi))
    throw ContractViolation("build_open_hamiltonian: parameters must be finite");

  const int n = p.n_cells;
  ComplexMatrix h = ComplexMatrix::Zero(2 * n, 2 * n);
  for (int l = 1; l <= n; ++l) {
    h(basis_index(l, Spin::up), basis_index(l, Spin::up)) = p.h_z;
    h(basis_index(l, Spin::down), basis_index(l, Spin::down)) = -p.h_z;
  }
  // -i delta0 e^{-i phi} (c+_{l,up} c_{l+1,down} - c+_{l+1,up} c_{l,down}) + H.c.
  const Complex pairing = -kI * p.delta0 * std::exp(-kI * p.phi);
  auto add = [&h](int row, int col, Complex value) {
    h(row, col) += value;
    h(col, row) += std::conj(value);
  };
  for (int l = 1; l < n; ++l) {
    add(basis_index(l, Spin::up), basis_index(l + 1, Spin::up), p.t_z);
    add(basis_index(l, Spin::down), basis_index(l + 1, Spin::down), -p.t_z);
    add(basis_index(l, Spin::up), basis_index(l + 1, Spin::down), pairing);
    add(basis_index(l + 1, Spin::up), basis_index(l, Spin::down), -pairing);
  }
  return h;
}

namespace {
void require_zero_phase(const ChainParams& p, const char* op) {
  if (p.phi != 0.0)
    throw UnsupportedParameter(std::string(op) + ": momentum-space form is defined only for phi = 0");
}
}  // namespace

BlochMatrix build_bloch(const ChainParams& p, double k) {
  require_zero_phase(p, "build_bloch");
  BlochMatrix out;
  out.k = k;
  out.matrix = (p.h_z + 2.0 * p.t_z * std::cos(k)) * pauli::z() +
               (2.0 * p.delta0 * std::sin(k)) * pauli::x();
  return out;
}

BandPair band_energies(const ChainParams& p, double k) {
  require_zero_phase(p, "band_energies");
  const double dz = p.h_z + 2.0 * p.t_z * std::cos(k);
  const double dx = 2.0 * p.delta0 * std::sin(k);
  const double e = std::hypot(dz, dx);
  return {-e, e};
}

double minimum_gap(const ChainParams& p, int k_samples) {
  require_zero_phase(p, "minimum_gap");
  if (k_samples < 64) throw ContractViolation("minimum_gap: k_samples must be >= 64");
  const double pi = std::numbers::pi;
  const double dk = 2.0 * pi / k_samples;
  auto upper = [&p](double k) { return band_energies(p, k).upper; };

  int best = 0;
  double best_e = upper(-pi);
  for (int i = 1; i < k_samples; ++i) {
    const double e = upper(-pi + i * dk);
    if (e < best_e) {
      best_e = e;
      best = i;
    }
  }

  // Golden-section on the bracket around the grid minimum.
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = -pi + (best - 1) * dk;
  double b = -pi + (best + 1) * dk;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = upper(c);
  double fd = upper(d);
  for (int it = 0; it < 200 && (b - a) > 1e-15; ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = upper(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = upper(d);
    }
  }
  const double refined = std::min({best_e, fc, fd, upper(0.5 * (a + b))});
  return 2.0 * refined;
}

double chiral_symmetry_residual(const ChainParams& p, int k_samples) {
  require_zero_phase(p, "chiral_symmetry_residual");
  const ComplexMatrix sy = pauli::y();
  double worst = 0.0;
  for (int i = 0; i < k_samples; ++i) {
    const double k = -std::numbers::pi + 2.0 * std::numbers::pi * i / k_samples;
    const ComplexMatrix h = build_bloch(p, k).matrix;
    worst = std::max(worst, (sy * h * sy + h).norm());
  }
  return worst;
}

double sigma_y_expectation(const StateVector& psi) {
  double total = 0.0;
  for (Eigen::Index i = 0; i + 1 < psi.size(); i += 2) {
    // <(a, b)| sigma_y |(a, b)> = 2 Im(conj(a) b)
    total += 2.0 * std::imag(std::conj(psi(i)) * psi(i + 1));
  }
  return total;
}

}  // namespace edgebraid
