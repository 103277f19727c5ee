#pragma once

#include <optional>
#include <string>
#include <vector>

#include "edgebraid/spin_chain.hpp"

namespace edgebraid {

enum class Side { left, right };
enum class Dot { A, B, C, D };

std::string to_string(Dot dot);
std::string to_string(Side side);

// Parameters of a protocol dot built from the magnitudes in `base`:
// A (+t, +d, h), B (-t, -d, h), C (-t, -d, 0), D (+t, +d, 0).
ChainParams dot_params(Dot dot, const ChainParams& base = canonical_params());

// Which closed form applies to these signs; empty when t_z and delta0 differ in sign.
std::optional<Dot> matching_dot(const ChainParams& p);

// Closed-form zero-mode edge state at one of the four protocol dots.
//
// Dot A and B use the two-root profiles [r1^x - r2^x]/sqrt(c) (with the
// confluent limit x r^(x-1) when c = 0); dots C and D share the h_z = 0
// profile sin(pi x/2) e^{-a2 x/2}. Left states carry phi_+, right states phi_-
// on the reflected coordinate N - x + 1.
struct AnalyticEdgeState {
  Side side = Side::left;
  Branch spinor_branch = Branch::plus;
  Dot dot = Dot::A;
  double a = 0.0;  // a0, a1 or a2
  double b = 0.0;  // b0 or b1 (0 at C/D)
  double c = 0.0;  // c0 or c1 (0 at C/D)
  int n_cells = 0;
  double normalization = 0.0;   // N0, N1 or N2, computed numerically on the finite chain
  std::vector<double> profile;  // unnormalized f(x), x = 1..N, before reflection

  SpinorState state() const;
  // Normalized real amplitude at site x (reflection applied for right states).
  double amplitude(int site) const;
  std::string label() const;  // e.g. "Psi_L,0"
};

struct AnalyticEdgePair {
  AnalyticEdgeState left;
  AnalyticEdgeState right;
};

// Throws ContractViolation when p does not match the sign pattern of `dot`.
AnalyticEdgePair analytic_edge_states(Dot dot, const ChainParams& p);

inline constexpr double kDefaultZeroThreshold = 1e-4;

struct NumericZeroModes {
  SpinorState left_state;
  SpinorState right_state;
  double energies[2];
};

// Two near-zero eigenvectors of H rotated within their span to maximize
// left (resp. right) edge weight. Global phases make the site-1 up amplitude
// (left) and site-N up amplitude (right) real positive.
// Throws NoZeroModes unless exactly two |E| < threshold.
NumericZeroModes numeric_zero_modes(const ComplexMatrix& h, double threshold = kDefaultZeroThreshold);

// Same, from precomputed eigenpairs.
NumericZeroModes numeric_zero_modes(const EigDecomposition& eig, double threshold = kDefaultZeroThreshold);

// |<analytic|numeric>|^2
double edge_overlap(const AnalyticEdgeState& analytic, const SpinorState& numeric);
double state_fidelity(const SpinorState& a, const SpinorState& b);

// Diagonal edge-weight operator: +1 on the left half, -1 on the right half.
RealVector edge_weight_diagonal(int n_cells);

}  // namespace edgebraid
