#include "edgebraid/open_system.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <numbers>

#include "edgebraid/error.hpp"
#include "edgebraid/topology.hpp"

namespace edgebraid {

ComplexMatrix dressed_to_bare(int n_cells) {
  const double s = 1.0 / std::numbers::sqrt2;
  ComplexMatrix w = ComplexMatrix::Zero(2 * n_cells + 1, 2 * n_cells);
  for (int l = 1; l <= n_cells; ++l) {
    w(bare_qubit(l), basis_index(l, Spin::up)) = s;
    w(bare_photon(l), basis_index(l, Spin::up)) = s;
    w(bare_qubit(l), basis_index(l, Spin::down)) = s;
    w(bare_photon(l), basis_index(l, Spin::down)) = -s;
  }
  return w;
}

ComplexMatrix embed_dressed_operator(const ComplexMatrix& op) {
  if (op.rows() != op.cols() || op.rows() % 2 != 0)
    throw ContractViolation("embed_dressed_operator: expected a 2N x 2N matrix");
  const ComplexMatrix w = dressed_to_bare(static_cast<int>(op.rows() / 2));
  return w * op * w.adjoint();
}

DensityMatrix::DensityMatrix(ComplexMatrix rho) : rho_(std::move(rho)) {
  if (rho_.rows() != rho_.cols() || rho_.rows() < 3 || rho_.rows() % 2 == 0)
    throw ContractViolation("DensityMatrix: dimension must be 2N+1");
  if (max_abs(rho_ - rho_.adjoint()) > 1e-9) throw ContractViolation("DensityMatrix: not Hermitian");
  if (std::abs(rho_.trace() - 1.0) > 1e-8) throw ContractViolation("DensityMatrix: trace is not 1");
  const auto eig = herm_eig(0.5 * (rho_ + rho_.adjoint()));
  if (eig.values(0) < -1e-8) throw ContractViolation("DensityMatrix: not positive semidefinite");
}

DensityMatrix DensityMatrix::pure(const StateVector& bare_state) {
  const double norm = bare_state.norm();
  if (norm == 0.0) throw ContractViolation("DensityMatrix::pure: zero vector");
  const StateVector v = bare_state / norm;
  return DensityMatrix(v * v.adjoint());
}

DensityMatrix DensityMatrix::from_dressed(const StateVector& dressed_state) {
  if (dressed_state.size() % 2 != 0) throw ContractViolation("DensityMatrix::from_dressed: length must be 2N");
  return pure(dressed_to_bare(static_cast<int>(dressed_state.size() / 2)) * dressed_state);
}

void LindbladConfig::validate() const {
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw ContractViolation("LindbladConfig: gamma must be >= 0");
  if (!(duration > 0.0) || !(dt > 0.0)) throw ContractViolation("LindbladConfig: duration and dt must be positive");
  if (record_stride < 1) throw ContractViolation("LindbladConfig: record_stride must be >= 1");
}

HamiltonianProvider effective_provider(const ChainParams& p, double energy_unit) {
  const ComplexMatrix h = energy_unit * embed_dressed_operator(build_open_hamiltonian(p));
  return {[h](double) { return h; }, true};
}

HamiltonianProvider full_drive_provider(const DrivePlan& plan, const CircuitParams& c) {
  const int n = c.n_cells;
  ComplexMatrix b = ComplexMatrix::Zero(2 * n + 1, 2 * n + 1);
  b(0, 0) = 1.0;
  b.rightCols(2 * n) = dressed_to_bare(n);
  return {[plan, c, b](double t) { return ComplexMatrix(b * full_drive_hamiltonian(plan, c, t) * b.adjoint()); },
          false};
}

std::vector<ComplexMatrix> collapse_operators(int n_cells) {
  if (n_cells < 1) throw ContractViolation("collapse_operators: N must be >= 1");
  const int dim = 2 * n_cells + 1;
  std::vector<ComplexMatrix> ops;
  for (int l = 1; l <= n_cells; ++l) {
    ComplexMatrix a = ComplexMatrix::Zero(dim, dim);
    a(bare_ground(), bare_photon(l)) = 1.0;
    ComplexMatrix sm = ComplexMatrix::Zero(dim, dim);
    sm(bare_ground(), bare_qubit(l)) = 1.0;
    ComplexMatrix sz = -ComplexMatrix::Identity(dim, dim);
    sz(bare_qubit(l), bare_qubit(l)) = 1.0;
    ops.push_back(std::move(a));
    ops.push_back(std::move(sm));
    ops.push_back(std::move(sz));
  }
  return ops;
}

namespace {

// Jump terms in closed form: both loss channels move the site-l excitation
// to |G>; dephasing multiplies rho_ij by sum_l z^l_i z^l_j where z^l is +1
// only on |0e>_l.
struct DissipatorCache {
  int dim = 0;
  Eigen::MatrixXd dephase;  // sum_l z^l_i z^l_j - N
};

DissipatorCache make_cache(int dim) {
  const int n = (dim - 1) / 2;
  DissipatorCache c;
  c.dim = dim;
  c.dephase.resize(dim, dim);
  auto z = [](int l, int i) { return i == bare_qubit(l) ? 1.0 : -1.0; };
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      double s = 0.0;
      for (int l = 1; l <= n; ++l) s += z(l, i) * z(l, j);
      c.dephase(i, j) = s - n;
    }
  return c;
}

ComplexMatrix rhs_cached(const ComplexMatrix& h, const ComplexMatrix& rho, double gamma, const DissipatorCache& c) {
  ComplexMatrix out = -kI * (h * rho - rho * h);
  if (gamma == 0.0) return out;
  // -1/2 {P_exc, rho} with P_exc = I - |G><G|
  ComplexMatrix anti = 2.0 * rho;
  anti.row(0) -= rho.row(0);
  anti.col(0) -= rho.col(0);
  out -= 0.5 * gamma * anti;
  double excited = 0.0;
  for (int i = 1; i < c.dim; ++i) excited += rho(i, i).real();
  out(0, 0) += gamma * excited;
  out += gamma * c.dephase.cast<Complex>().cwiseProduct(rho);
  return out;
}

double site_population(const ComplexMatrix& rho, int site) {
  return rho(bare_qubit(site), bare_qubit(site)).real() + rho(bare_photon(site), bare_photon(site)).real();
}

}  // namespace

ComplexMatrix lindblad_rhs(const ComplexMatrix& h, const ComplexMatrix& rho, double gamma) {
  if (h.rows() != rho.rows() || rho.rows() % 2 == 0) throw ContractViolation("lindblad_rhs: dimension mismatch");
  return rhs_cached(h, rho, gamma, make_cache(static_cast<int>(rho.rows())));
}

EdgePopulations edge_populations(const ComplexMatrix& rho) {
  const int n = static_cast<int>((rho.rows() - 1) / 2);
  return {site_population(rho, 1), site_population(rho, n)};
}

EdgePopulations edge_populations(const DensityMatrix& rho) { return edge_populations(rho.matrix()); }

ComplexMatrix chiral_displacement_bare(int n_cells) {
  return embed_dressed_operator(chiral_displacement_operator(n_cells));
}

ObservableSeries lindblad_evolve(const DensityMatrix& rho0, const LindbladConfig& cfg, const HamiltonianProvider& h) {
  cfg.validate();
  const int n = rho0.n_cells();
  const int dim = 2 * n + 1;
  const DissipatorCache cache = make_cache(dim);
  const ComplexMatrix pd = chiral_displacement_bare(n);

  const ComplexMatrix h_start = h.at(0.0);
  if (h_start.rows() != dim) throw ContractViolation("lindblad_evolve: Hamiltonian dimension mismatch");
  const double stiffness = cfg.dt * (hermitian_norm(h_start) + 2.0 * n * cfg.gamma);
  if (stiffness >= 0.05)
    throw StepSizeError("lindblad_evolve: dt * ||H|| = " + std::to_string(stiffness) + " >= 0.05; reduce dt");

  const long steps = std::max(1L, std::lround(cfg.duration / cfg.dt));
  const double dt = cfg.duration / steps;

  ObservableSeries out;
  auto center = [&](const ComplexMatrix& r) { return (pd.cwiseProduct(r.transpose())).sum().real(); };
  auto record = [&](double t, const ComplexMatrix& r) {
    out.times.push_back(t);
    const auto e = edge_populations(r);
    out.p1.push_back(e.p1);
    out.p2.push_back(e.p2);
    std::vector<double> dens(n);
    double total = 0.0;
    for (int l = 1; l <= n; ++l) {
      dens[l - 1] = site_population(r, l);
      total += dens[l - 1];
    }
    out.site_density.push_back(std::move(dens));
    out.total_excitation.push_back(total);
    out.chiral_center.push_back(center(r));
    out.trace_error.push_back(std::abs(r.trace() - 1.0));
    out.hermiticity_error.push_back(max_abs(r - r.adjoint()));
    out.min_eigenvalue.push_back(cfg.check_positivity ? herm_eig(0.5 * (r + r.adjoint()), {1e-6}).values(0)
                                                      : std::numeric_limits<double>::quiet_NaN());
  };

  ComplexMatrix rho = rho0.matrix();
  record(0.0, rho);
  double prev_center = center(rho);
  for (long k = 0; k < steps; ++k) {
    const double t = k * dt;
    if (h.constant) {
      const Superoperator l = [&](const ComplexMatrix& r) { return rhs_cached(h_start, r, cfg.gamma, cache); };
      rho = rk4_superop_step(l, rho, dt);
    } else {
      const TimeDependentSuperoperator l = [&](double s, const ComplexMatrix& r) {
        return rhs_cached(h.at(s), r, cfg.gamma, cache);
      };
      rho = rk4_superop_step(l, t, rho, dt);
    }
    const double c = center(rho);
    out.chiral_center_integral += 0.5 * dt * (prev_center + c);
    prev_center = c;
    const double drift = std::abs(rho.trace() - 1.0);
    if (drift > 1e-6)
      throw StepSizeError("lindblad_evolve: trace drift " + std::to_string(drift) + " at t = " +
                          std::to_string((k + 1) * dt) + " s; reduce dt");
    if ((k + 1) % cfg.record_stride == 0 || k + 1 == steps) record((k + 1) * dt, rho);
  }
  out.final_rho = std::move(rho);
  return out;
}

StateVector edge_initial_state(int n_cells, EdgeInitial side) {
  StateVector dressed = StateVector::Zero(2 * n_cells);
  const double s = 1.0 / std::numbers::sqrt2;
  if (side == EdgeInitial::right) {
    dressed(basis_index(n_cells, Spin::up)) = s;
    dressed(basis_index(n_cells, Spin::down)) = -kI * s;
  } else {
    dressed(basis_index(1, Spin::up)) = s;
    dressed(basis_index(1, Spin::down)) = kI * s;
  }
  return dressed_to_bare(n_cells) * dressed;
}

double chiral_center_under_decay(const ChainParams& p, const LindbladConfig& cfg, double duration,
                                 double energy_unit) {
  if (p.n_cells < 4) throw ContractViolation("chiral_center_under_decay: N must be >= 4");
  LindbladConfig run = cfg;
  run.duration = duration;
  run.record_stride = std::max(cfg.record_stride, 1000000);
  run.check_positivity = false;
  const auto rho0 = DensityMatrix::from_dressed(chiral_center_initial_state(p.n_cells));
  const auto series = lindblad_evolve(rho0, run, effective_provider(p, energy_unit));
  const double nu = 2.0 * series.chiral_center_integral / duration;
  return 0.5 * nu;
}

std::vector<GammaSweepRow> gamma_sweep(const ChainParams& p, std::vector<double> gammas, double tau,
                                       EdgeInitial initial, const LindbladConfig& base, int threads) {
  std::sort(gammas.begin(), gammas.end());
  std::vector<GammaSweepRow> rows(gammas.size());
  auto work = [&](std::size_t i) {
    LindbladConfig cfg = base;
    cfg.gamma = gammas[i];
    cfg.duration = tau;
    cfg.record_stride = std::max(base.record_stride, 1000000);
    cfg.check_positivity = false;
    const auto series = lindblad_evolve(DensityMatrix::pure(edge_initial_state(p.n_cells, initial)), cfg,
                                        effective_provider(p));
    rows[i] = {gammas[i], series.p1.back(), series.p2.back(), chiral_center_under_decay(p, cfg, tau)};
  };
  threads = std::max(1, threads);
  for (std::size_t start = 0; start < gammas.size(); start += threads) {
    std::vector<std::future<void>> batch;
    for (std::size_t i = start; i < std::min(gammas.size(), start + threads); ++i)
      batch.push_back(std::async(std::launch::async, work, i));
    for (auto& f : batch) f.get();
  }
  return rows;
}

}  // namespace edgebraid
