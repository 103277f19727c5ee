#include "edgebraid/numkit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "edgebraid/error.hpp"

namespace edgebraid {

double max_abs(const ComplexMatrix& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

bool is_hermitian(const ComplexMatrix& a, double rel_tol) {
  if (a.rows() != a.cols()) return false;
  const double scale = max_abs(a);
  const double dev = max_abs(a - a.adjoint());
  return dev <= rel_tol * scale;
}

namespace {

// Applies the unitary U = diag(1, e^{-i alpha}) R(c, s) on the (p, q) plane.
struct PlaneRotation {
  Complex upp, upq, uqp, uqq;
};

void rotate_columns(ComplexMatrix& m, int p, int q, const PlaneRotation& u) {
  for (Eigen::Index k = 0; k < m.rows(); ++k) {
    const Complex mp = m(k, p);
    const Complex mq = m(k, q);
    m(k, p) = mp * u.upp + mq * u.uqp;
    m(k, q) = mp * u.upq + mq * u.uqq;
  }
}

void rotate_rows(ComplexMatrix& m, int p, int q, const PlaneRotation& u) {
  for (Eigen::Index k = 0; k < m.cols(); ++k) {
    const Complex mp = m(p, k);
    const Complex mq = m(q, k);
    m(p, k) = std::conj(u.upp) * mp + std::conj(u.uqp) * mq;
    m(q, k) = std::conj(u.upq) * mp + std::conj(u.uqq) * mq;
  }
}

double off_diagonal_sq(const ComplexMatrix& a) {
  double off = 0.0;
  for (Eigen::Index q = 1; q < a.cols(); ++q)
    for (Eigen::Index p = 0; p < q; ++p) off += std::norm(a(p, q));
  return 2.0 * off;
}

void fix_phase(Eigen::Ref<StateVector> v) {
  const double peak = v.cwiseAbs().maxCoeff();
  if (peak == 0.0) return;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) >= peak * (1.0 - 1e-10)) {
      v *= std::conj(v(i)) / std::abs(v(i));
      v(i) = Complex(v(i).real(), 0.0);
      return;
    }
  }
}

// Cyclic complex Jacobi; returns unsorted diagonal and accumulated rotations.
void jacobi_diagonalize(const ComplexMatrix& herm, const NumTolerances& tol, RealVector& values, ComplexMatrix& v) {
  const int n = static_cast<int>(herm.rows());
  ComplexMatrix a = herm;
  v = ComplexMatrix::Identity(n, n);
  const double frob = a.norm();

  for (int sweep = 0; sweep < tol.max_jacobi_sweeps; ++sweep) {
    const double off = off_diagonal_sq(a);
    if (off == 0.0 || std::sqrt(off) <= 1e-15 * frob) break;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const Complex apq = a(p, q);
        const double r = std::abs(apq);
        if (r <= 1e-300 || r <= 1e-18 * frob) continue;
        const Complex phase = apq / r;  // e^{i alpha}
        const double theta = (a(q, q).real() - a(p, p).real()) / (2.0 * r);
        double t;
        if (std::abs(theta) > 1e150) {
          t = 0.5 / theta;
        } else {
          t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        }
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const Complex back = std::conj(phase);
        const PlaneRotation u{c, s, -s * back, c * back};
        rotate_columns(a, p, q, u);
        rotate_rows(a, p, q, u);
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        rotate_columns(v, p, q, u);
      }
    }
  }
  values = a.diagonal().real();
}

// Householder reduction to Hermitian tridiagonal form, a diagonal phase
// transform to a real symmetric tridiagonal, then implicit QL with shifts.
void householder_ql(const ComplexMatrix& herm, RealVector& values, ComplexMatrix& vectors) {
  const int n = static_cast<int>(herm.rows());
  ComplexMatrix a = herm;
  ComplexMatrix q = ComplexMatrix::Identity(n, n);

  for (int k = 0; k + 2 < n; ++k) {
    const int m = n - k - 1;
    StateVector x = a.col(k).tail(m);
    const double xnorm = x.norm();
    if (xnorm == 0.0) continue;
    const Complex x0 = x(0);
    const Complex unit = std::abs(x0) == 0.0 ? Complex(1.0, 0.0) : x0 / std::abs(x0);
    const Complex alpha = -unit * xnorm;
    StateVector v = x;
    v(0) -= alpha;
    const double vv = v.squaredNorm();
    if (vv == 0.0) continue;
    const double tau = 2.0 / vv;

    auto sub = a.bottomRightCorner(m, m);
    const StateVector p = tau * (sub * v);
    const Complex kk = 0.5 * tau * v.dot(p);
    const StateVector w = p - kk * v;
    sub -= v * w.adjoint() + w * v.adjoint();
    a.col(k).tail(m).setZero();
    a.row(k).tail(m).setZero();
    a(k + 1, k) = alpha;
    a(k, k + 1) = std::conj(alpha);

    auto qcols = q.rightCols(m);
    const StateVector qv = qcols * v;
    qcols -= tau * qv * v.adjoint();
  }

  // D^H T D has real non-negative off-diagonals.
  StateVector phase(n);
  phase(0) = 1.0;
  std::vector<double> d(n), e(n, 0.0);
  for (int k = 0; k < n; ++k) d[k] = a(k, k).real();
  for (int k = 0; k + 1 < n; ++k) {
    const Complex off = a(k + 1, k);
    const double r = std::abs(off);
    phase(k + 1) = r == 0.0 ? phase(k) : phase(k) * off / r;
    e[k] = r;
  }

  Eigen::MatrixXd z = Eigen::MatrixXd::Identity(n, n);
  const double eps = std::numeric_limits<double>::epsilon();
  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= eps * dd) break;
      }
      if (m != l) {
        if (iter++ == 100) throw Error("herm_eig: QL iteration did not converge");
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + (g >= 0.0 ? std::abs(r) : -std::abs(r)));
        double s = 1.0, c = 1.0, p = 0.0;
        int i;
        for (i = m - 1; i >= l; --i) {
          double f = s * e[i];
          const double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
          for (int k = 0; k < n; ++k) {
            f = z(k, i + 1);
            z(k, i + 1) = s * z(k, i) + c * f;
            z(k, i) = c * z(k, i) - s * f;
          }
        }
        if (r == 0.0 && i >= l) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }

  values = Eigen::Map<RealVector>(d.data(), n);
  vectors = q * phase.asDiagonal() * z.cast<Complex>();
}

}  // namespace

EigDecomposition herm_eig(const ComplexMatrix& input, const NumTolerances& tol, EigMethod method) {
  if (input.rows() != input.cols() || input.rows() < 1)
    throw ContractViolation("herm_eig: matrix must be square and non-empty");
  if (!is_hermitian(input, tol.hermitian_rel))
    throw ContractViolation("herm_eig: matrix is not Hermitian within tolerance");

  const int n = static_cast<int>(input.rows());
  const ComplexMatrix herm = 0.5 * (input + input.adjoint());
  RealVector diag;
  ComplexMatrix v;
  if (method == EigMethod::jacobi) {
    jacobi_diagonalize(herm, tol, diag, v);
  } else {
    householder_ql(herm, diag, v);
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int i, int j) { return diag(i) < diag(j); });

  EigDecomposition out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (int k = 0; k < n; ++k) {
    out.values(k) = diag(order[k]);
    out.vectors.col(k) = v.col(order[k]);
  }

  // Degenerate clusters: modified Gram-Schmidt in index order.
  const double degenerate = tol.degeneracy_rel * std::max(1.0, max_abs(input));
  int start = 0;
  while (start < n) {
    int stop = start + 1;
    while (stop < n && out.values(stop) - out.values(stop - 1) <= degenerate) ++stop;
    for (int k = start; k < stop; ++k) {
      for (int j = start; j < k; ++j) {
        const Complex proj = out.vectors.col(j).dot(out.vectors.col(k));
        out.vectors.col(k) -= proj * out.vectors.col(j);
      }
      out.vectors.col(k).normalize();
    }
    start = stop;
  }
  for (int k = 0; k < n; ++k) fix_phase(out.vectors.col(k));
  return out;
}

ComplexMatrix propagator(const EigDecomposition& eig, double dt) {
  const Eigen::Index n = eig.values.size();
  StateVector phases(n);
  for (Eigen::Index k = 0; k < n; ++k) phases(k) = std::exp(-kI * eig.values(k) * dt);
  return eig.vectors * phases.asDiagonal() * eig.vectors.adjoint();
}

StateVector evolve_unitary(const EigDecomposition& eig, const StateVector& psi, double dt) {
  if (psi.size() != eig.values.size())
    throw ContractViolation("evolve_unitary: state dimension does not match Hamiltonian");
  StateVector coeff = eig.vectors.adjoint() * psi;
  for (Eigen::Index k = 0; k < coeff.size(); ++k) coeff(k) *= std::exp(-kI * eig.values(k) * dt);
  return eig.vectors * coeff;
}

StateVector evolve_unitary(const ComplexMatrix& h, const StateVector& psi, double dt) {
  if (h.rows() != psi.size())
    throw ContractViolation("evolve_unitary: state dimension does not match Hamiltonian");
  if (!std::isfinite(dt)) throw ContractViolation("evolve_unitary: dt must be finite");
  return evolve_unitary(herm_eig(h), psi, dt);
}

ComplexMatrix rk4_superop_step(const Superoperator& l, const ComplexMatrix& rho, double dt) {
  const ComplexMatrix k1 = l(rho);
  if (k1.rows() != rho.rows() || k1.cols() != rho.cols())
    throw ContractViolation("rk4_superop_step: superoperator changed the matrix shape");
  const ComplexMatrix k2 = l(rho + 0.5 * dt * k1);
  const ComplexMatrix k3 = l(rho + 0.5 * dt * k2);
  const ComplexMatrix k4 = l(rho + dt * k3);
  return rho + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

ComplexMatrix rk4_superop_step(const TimeDependentSuperoperator& l, double t,
                               const ComplexMatrix& rho, double dt) {
  const ComplexMatrix k1 = l(t, rho);
  if (k1.rows() != rho.rows() || k1.cols() != rho.cols())
    throw ContractViolation("rk4_superop_step: superoperator changed the matrix shape");
  const ComplexMatrix k2 = l(t + 0.5 * dt, rho + 0.5 * dt * k1);
  const ComplexMatrix k3 = l(t + 0.5 * dt, rho + 0.5 * dt * k2);
  const ComplexMatrix k4 = l(t + dt, rho + dt * k3);
  return rho + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

double default_rk4_step(double hamiltonian_norm, double duration) {
  const double by_norm = hamiltonian_norm > 0.0 ? 1e-3 / hamiltonian_norm : duration;
  return std::min(by_norm, duration / 1e4);
}

double hermitian_norm(const ComplexMatrix& h) {
  const auto eig = herm_eig(h);
  return std::max(std::abs(eig.values(0)), std::abs(eig.values(eig.values.size() - 1)));
}

double trapezoid(const std::vector<double>& values, double dt) {
  if (values.size() < 2) return 0.0;
  double sum = 0.5 * (values.front() + values.back());
  for (std::size_t i = 1; i + 1 < values.size(); ++i) sum += values[i];
  return sum * dt;
}

}  // namespace edgebraid
