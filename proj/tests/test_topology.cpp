#include <doctest.h>

#include <cmath>
#include <random>

#include "edgebraid/error.hpp"
#include "edgebraid/topology.hpp"
#include "oracles.hpp"

using namespace edgebraid;

TEST_CASE("winding number closed form") {
  CHECK(winding_number(1.0, 0.3) == 1);
  CHECK(winding_number(1.0, 0.0) == 1);
  CHECK(winding_number(-1.0, 0.3) == 1);
  CHECK(winding_number(-1.0, -0.3) == 1);
  CHECK(winding_number(1.0, 3.0) == 0);
  CHECK(winding_number(0.1, -3.0) == 0);
  CHECK_FALSE(winding_number(1.0, 2.0).has_value());
  CHECK_FALSE(winding_number(1.0, -2.0).has_value());
  CHECK_FALSE(winding_number(0.0, 0.5).has_value());
}

TEST_CASE("phase diagram wedge and sorting") {
  const std::vector<double> ts{1.0, -1.0, 0.5};
  const std::vector<double> hs{0.0, 2.0, -0.5, 3.0};
  const auto pd = phase_diagram(ts, hs);
  CHECK(pd.t_z_axis == std::vector<double>{-1.0, 0.5, 1.0});
  CHECK(pd.h_z_axis == std::vector<double>{-0.5, 0.0, 2.0, 3.0});
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      const double t = pd.t_z_axis[i], h = pd.h_z_axis[j];
      if (std::abs(std::abs(h) - 2.0 * std::abs(t)) == 0.0) {
        CHECK_FALSE(pd.at(i, j).has_value());
      } else {
        CHECK(std::abs(*pd.at(i, j)) == (std::abs(h) < 2.0 * std::abs(t) ? 1 : 0));
      }
    }
  const std::vector<double> empty;
  CHECK_THROWS_AS(phase_diagram(empty, hs), ContractViolation);
}

TEST_CASE("zero-mode roots at the canonical point") {
  const auto r = zero_mode_roots(canonical_params(), Branch::plus);
  CHECK(r.exists_left);
  CHECK(r.z1.real() == doctest::Approx(-0.0497).epsilon(1e-3));
  CHECK(r.z2.real() == doctest::Approx(-0.1010).epsilon(1e-3));
  // Vieta: z1 + z2 = -h/(t+d), z1 z2 = (t-d)/(t+d)
  CHECK(std::abs(r.z1 + r.z2 + 0.3 / 1.99) < 1e-14);
  CHECK(std::abs(r.z1 * r.z2 - 0.01 / 1.99) < 1e-15);
  const auto m = zero_mode_roots(canonical_params(), Branch::minus);
  CHECK_FALSE(m.exists_left);
}

TEST_CASE("zero-mode root condition agrees with the winding number for d > 0") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.05, 2.0), uh(-4.0, 4.0);
  for (int i = 0; i < 200; ++i) {
    const ChainParams p{u(rng), u(rng), uh(rng), 0.0, 8};
    const auto nu = winding_number(p.t_z, p.h_z);
    if (!nu) continue;
    CHECK(zero_mode_roots(p, Branch::plus).exists_left == (*nu != 0));
  }
}

TEST_CASE("root condition matches the generalized sign rule in every quadrant") {
  // A left mode exists for the phi_sgn(t d) branch whenever |h| < 2|t|.
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.05, 2.0), uh(-4.0, 4.0);
  for (double st : {1.0, -1.0})
    for (double sd : {1.0, -1.0})
      for (int i = 0; i < 50; ++i) {
        const ChainParams p{st * u(rng), sd * u(rng), uh(rng), 0.0, 8};
        const auto nu = winding_number(p.t_z, p.h_z);
        if (!nu) continue;
        const Branch b = st * sd > 0 ? Branch::plus : Branch::minus;
        CHECK(zero_mode_roots(p, b).exists_left == (*nu != 0));
      }
}

TEST_CASE("zero-mode roots with vanishing leading coefficient") {
  const auto r = zero_mode_roots(ChainParams{1.0, -1.0, 0.5, 0.0, 4}, Branch::plus);
  CHECK(std::isinf(r.z2.real()));
  CHECK_FALSE(r.exists_left);
}

TEST_CASE("chiral displacement operator and initial state") {
  const ComplexMatrix pd = chiral_displacement_operator(3);
  CHECK(pd.rows() == 6);
  CHECK(is_hermitian(pd));
  CHECK(std::abs(pd(4, 5) - Complex(0.0, -3.0)) < 1e-15);
  const StateVector psi = chiral_center_initial_state(16);
  CHECK(std::abs(psi(basis_index(8, Spin::up)) - 1.0) < 1e-15);
  CHECK(std::abs(chiral_center_initial_state(5)(basis_index(3, Spin::up)) - 1.0) < 1e-15);
}

TEST_CASE("chiral center dynamics against direct propagation") {
  const ChainParams p{1.0, 0.99, 0.3, 0.0, 12};
  const auto series = chiral_center_dynamics(p, 10.0, 50);
  const ComplexMatrix h = build_open_hamiltonian(p);
  const ComplexMatrix pd = chiral_displacement_operator(12);
  const StateVector psi0 = chiral_center_initial_state(12);
  for (int i : {0, 7, 50}) {
    const StateVector psi = oracle::evolve(h, psi0, series.times[i]);
    CHECK(series.instantaneous_center[i] == doctest::Approx(psi.dot(pd * psi).real()).epsilon(1e-9));
  }
}

TEST_CASE("dynamical winding converges to the closed form") {
  const auto topo = chiral_center_dynamics(ChainParams{1.0, 0.99, 0.0, 0.0, 16}, 100.0, 4000);
  CHECK(topo.nu_dynamical() == doctest::Approx(1.0).epsilon(0.02));
  CHECK(topo.nu_half() == doctest::Approx(0.5).epsilon(0.02));
  const auto trivial = chiral_center_dynamics(ChainParams{0.1, 0.99, 3.0, 0.0, 16}, 100.0, 4000);
  CHECK(std::abs(trivial.nu_dynamical()) < 0.05);
  CHECK_THROWS_AS(chiral_center_dynamics(ChainParams{1.0, 0.99, 0.0, 0.0, 3}, 1.0, 10), ContractViolation);
}

TEST_CASE("grid points rounded onto the boundary are unresolved") {
  const double t = -2.0 + 4.0 * 32 / 40;  // 1.2000000000000002
  const double h = -3.0 + 6.0 * 4 / 40;   // -2.3999999999999999
  CHECK_FALSE(winding_number(t, h).has_value());
  CHECK_FALSE(winding_number(0.3, 0.6000000000000001).has_value());
  CHECK(winding_number(0.3, 0.5999999).value() == 1);
}
