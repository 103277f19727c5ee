#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "edgebraid/error.hpp"
#include "edgebraid/spin_chain.hpp"
#include "oracles.hpp"

using namespace edgebraid;

TEST_CASE("open Hamiltonian structure") {
  ChainParams p{1.0, 0.99, 0.3, 0.0, 4};
  const ComplexMatrix h = build_open_hamiltonian(p);
  CHECK(h.rows() == 8);
  CHECK(is_hermitian(h));
  CHECK(h(basis_index(1, Spin::up), basis_index(1, Spin::up)).real() == doctest::Approx(0.3));
  CHECK(h(basis_index(1, Spin::down), basis_index(1, Spin::down)).real() == doctest::Approx(-0.3));
  CHECK(h(basis_index(1, Spin::up), basis_index(2, Spin::up)).real() == doctest::Approx(1.0));
  CHECK(h(basis_index(1, Spin::down), basis_index(2, Spin::down)).real() == doctest::Approx(-1.0));
  CHECK(std::abs(h(basis_index(1, Spin::up), basis_index(2, Spin::down)) - Complex(0.0, -0.99)) < 1e-15);
  CHECK(std::abs(h(basis_index(2, Spin::up), basis_index(1, Spin::down)) - Complex(0.0, 0.99)) < 1e-15);
  CHECK(std::abs(h(basis_index(1, Spin::up), basis_index(3, Spin::up))) == 0.0);
}

TEST_CASE("open Hamiltonian rejects bad parameters") {
  CHECK_THROWS_AS(build_open_hamiltonian(ChainParams{1.0, 0.99, 0.3, 0.0, 1}), ContractViolation);
  CHECK_THROWS_AS(build_open_hamiltonian(ChainParams{NAN, 0.99, 0.3, 0.0, 4}), ContractViolation);
}

TEST_CASE("periodic chain spectrum reproduces the Bloch bands") {
  // Close the ring by hand and compare with the analytic band formula.
  const ChainParams p{0.7, 0.4, 0.25, 0.0, 24};
  ComplexMatrix h = build_open_hamiltonian(p);
  const int n = p.n_cells;
  const Complex pairing = -kI * p.delta0;
  auto add = [&h](int r, int c, Complex v) {
    h(r, c) += v;
    h(c, r) += std::conj(v);
  };
  add(basis_index(n, Spin::up), basis_index(1, Spin::up), p.t_z);
  add(basis_index(n, Spin::down), basis_index(1, Spin::down), -p.t_z);
  add(basis_index(n, Spin::up), basis_index(1, Spin::down), pairing);
  add(basis_index(1, Spin::up), basis_index(n, Spin::down), -pairing);
  const Eigen::VectorXd ring = oracle::eigenvalues(h);

  std::vector<double> bands;
  for (int m = 0; m < n; ++m) {
    const double k = 2.0 * std::numbers::pi * m / n;
    const auto b = band_energies(p, k);
    bands.push_back(b.lower);
    bands.push_back(b.upper);
  }
  std::sort(bands.begin(), bands.end());
  for (int i = 0; i < 2 * n; ++i) CHECK(ring(i) == doctest::Approx(bands[i]).epsilon(1e-10));
}

TEST_CASE("Bloch matrix and bands") {
  const ChainParams p = canonical_params();
  const auto b = build_bloch(p, 0.4);
  const Eigen::VectorXd ev = oracle::eigenvalues(b.matrix);
  const auto e = band_energies(p, 0.4);
  CHECK(ev(0) == doctest::Approx(e.lower));
  CHECK(ev(1) == doctest::Approx(e.upper));
  CHECK(e.lower == doctest::Approx(-e.upper));
  ChainParams q = p;
  q.phi = 0.2;
  CHECK_THROWS_AS(build_bloch(q, 0.0), UnsupportedParameter);
  CHECK_THROWS_AS(minimum_gap(q), UnsupportedParameter);
}

TEST_CASE("minimum gap against brute-force scan") {
  CHECK(minimum_gap(canonical_params()) == doctest::Approx(3.4).epsilon(1e-9));
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int i = 0; i < 20; ++i) {
    const ChainParams p{u(rng), u(rng), u(rng), 0.0, 8};
    const double g = minimum_gap(p);
    CHECK(g <= oracle::brute_min_gap(p.t_z, p.delta0, p.h_z) + 1e-9);
    CHECK(g >= oracle::brute_min_gap(p.t_z, p.delta0, p.h_z) - 1e-4);
  }
  CHECK(minimum_gap(ChainParams{1.0, 0.99, 2.0, 0.0, 8}) < 1e-9);
  CHECK(minimum_gap(ChainParams{-0.6, 0.5, 1.2, 0.0, 8}) < 1e-9);
  CHECK_THROWS_AS(minimum_gap(canonical_params(), 10), ContractViolation);
}

TEST_CASE("chiral symmetry of the Bloch form") {
  CHECK(chiral_symmetry_residual(canonical_params()) < 1e-14);
  CHECK(chiral_symmetry_residual(ChainParams{-0.3, 2.0, 1.1, 0.0, 4}) < 1e-14);
}

TEST_CASE("SpinorState validation and helpers") {
  StateVector v = StateVector::Zero(4);
  v(0) = 2.0;
  CHECK_THROWS_AS(SpinorState{v}, ContractViolation);
  const SpinorState s = SpinorState::normalized(v);
  CHECK(s.n_cells() == 2);
  CHECK(s.site_density()[0] == doctest::Approx(1.0));
  CHECK_THROWS_AS(SpinorState::normalized(StateVector::Zero(4)), ContractViolation);
  CHECK_THROWS_AS(SpinorState{StateVector::Ones(3).normalized()}, ContractViolation);
}

TEST_CASE("sigma_y eigenspinors") {
  const Eigen::Vector2cd p = spinor(Branch::plus);
  const Eigen::Vector2cd m = spinor(Branch::minus);
  CHECK((pauli::y() * p - p).norm() < 1e-15);
  CHECK((pauli::y() * m + m).norm() < 1e-15);
  CHECK(sigma_y_expectation(StateVector(p)) == doctest::Approx(1.0));
  CHECK(sigma_y_expectation(StateVector(m)) == doctest::Approx(-1.0));
}

TEST_CASE("staggered sign maps (t, d) to (-t, -d)") {
  const ChainParams p{0.8, 0.6, 0.3, 0.0, 6};
  ChainParams q = p;
  q.t_z = -p.t_z;
  q.delta0 = -p.delta0;
  Eigen::VectorXcd s(12);
  for (int l = 1; l <= 6; ++l) s(2 * (l - 1)) = s(2 * (l - 1) + 1) = (l % 2 ? 1.0 : -1.0);
  const ComplexMatrix sm = s.asDiagonal();
  CHECK((sm * build_open_hamiltonian(p) * sm - build_open_hamiltonian(q)).norm() < 1e-14);
}
