#pragma once

// Dense complex linear algebra and propagation kernels.
//
// Every physics module stores operators as ComplexMatrix and states as
// StateVector. Problem sizes never exceed ~66, so all routines are dense.

#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace edgebraid {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using StateVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr Complex kI{0.0, 1.0};

struct NumTolerances {
  double hermitian_rel = 1e-12;     // max|A - A^H| <= tol * max|A|
  double eig_residual = 1e-10;      // ||A v - l v|| <= tol * ||A||
  double degeneracy_rel = 1e-10;    // eigenvalues closer than tol * max(1, ||A||) are degenerate
  int max_jacobi_sweeps = 100;
};

struct EigDecomposition {
  RealVector values;     // ascending
  ComplexMatrix vectors; // orthonormal columns, vectors.col(i) <-> values(i)
};

double max_abs(const ComplexMatrix& a);
bool is_hermitian(const ComplexMatrix& a, double rel_tol = NumTolerances{}.hermitian_rel);

enum class EigMethod {
  householder_ql,  // tridiagonalize, then implicit QL; default
  jacobi,          // cyclic complex Jacobi rotations; slower, kept as a cross-check
};

// Full spectrum of a Hermitian matrix.
//
// Output is deterministic: eigenpairs are sorted ascending (stable in the
// original diagonal index), degenerate clusters are re-orthonormalized in
// index order, and each eigenvector's global phase is fixed so that its
// largest-magnitude component is real and positive.
//
// Throws ContractViolation for non-square or non-Hermitian input.
EigDecomposition herm_eig(const ComplexMatrix& a, const NumTolerances& tol = {},
                          EigMethod method = EigMethod::householder_ql);

// exp(-i H dt) psi via eigendecomposition.
StateVector evolve_unitary(const ComplexMatrix& h, const StateVector& psi, double dt);

// Same propagation with a precomputed decomposition, for repeated steps.
StateVector evolve_unitary(const EigDecomposition& eig, const StateVector& psi, double dt);

// V diag(exp(-i l dt)) V^H
ComplexMatrix propagator(const EigDecomposition& eig, double dt);

using Superoperator = std::function<ComplexMatrix(const ComplexMatrix&)>;
using TimeDependentSuperoperator = std::function<ComplexMatrix(double, const ComplexMatrix&)>;

// One classical fourth-order Runge-Kutta step of d(rho)/dt = L(rho).
ComplexMatrix rk4_superop_step(const Superoperator& l, const ComplexMatrix& rho, double dt);
ComplexMatrix rk4_superop_step(const TimeDependentSuperoperator& l, double t,
                               const ComplexMatrix& rho, double dt);

// Default RK4 step: min(1e-3 / ||H||, duration / 1e4).
double default_rk4_step(double hamiltonian_norm, double duration);

// Spectral norm of a Hermitian matrix (largest |eigenvalue|).
double hermitian_norm(const ComplexMatrix& h);

// Composite trapezoidal rule on a uniform grid.
double trapezoid(const std::vector<double>& values, double dt);

}  // namespace edgebraid
