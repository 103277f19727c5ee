#include "edgebraid/edge_modes.hpp"

#include <cmath>
#include <numbers>

#include "edgebraid/error.hpp"

namespace edgebraid {

std::string to_string(Dot dot) {
  switch (dot) {
    case Dot::A: return "A";
    case Dot::B: return "B";
    case Dot::C: return "C";
    case Dot::D: return "D";
  }
  return "?";
}

std::string to_string(Side side) { return side == Side::left ? "left" : "right"; }

ChainParams dot_params(Dot dot, const ChainParams& base) {
  ChainParams p = base;
  const double t = std::abs(base.t_z);
  const double d = std::abs(base.delta0);
  const double h = base.h_z;
  switch (dot) {
    case Dot::A: p.t_z = t; p.delta0 = d; p.h_z = h; break;
    case Dot::B: p.t_z = -t; p.delta0 = -d; p.h_z = h; break;
    case Dot::C: p.t_z = -t; p.delta0 = -d; p.h_z = 0.0; break;
    case Dot::D: p.t_z = t; p.delta0 = d; p.h_z = 0.0; break;
  }
  return p;
}

namespace {

int dot_index(Dot dot) { return static_cast<int>(dot); }

void check_dot_pattern(Dot dot, const ChainParams& p) {
  const bool positive = p.t_z > 0.0 && p.delta0 > 0.0;
  const bool negative = p.t_z < 0.0 && p.delta0 < 0.0;
  bool ok = false;
  switch (dot) {
    case Dot::A: ok = positive; break;
    case Dot::B: ok = negative; break;
    case Dot::C: ok = negative && p.h_z == 0.0; break;
    case Dot::D: ok = positive && p.h_z == 0.0; break;
  }
  if (!ok) throw ContractViolation("analytic_edge_states: parameters do not match dot " + to_string(dot));
  if (p.n_cells < 2) throw ContractViolation("analytic_edge_states: n_cells must be >= 2");
}

// [r1^x - r2^x]/sqrt(c) with r1,2 = (s b +- sqrt(c))/2; confluent x r^(x-1) when c = 0.
std::vector<double> two_root_profile(double b, double c, double sign_b, int n) {
  std::vector<double> f(n);
  if (c == 0.0) {
    const double r = 0.5 * sign_b * b;
    for (int x = 1; x <= n; ++x) f[x - 1] = x * std::pow(r, x - 1);
    return f;
  }
  const Complex sc = std::sqrt(Complex(c, 0.0));
  const Complex r1 = 0.5 * (sign_b * b + sc);
  const Complex r2 = 0.5 * (sign_b * b - sc);
  for (int x = 1; x <= n; ++x) f[x - 1] = ((std::pow(r1, x) - std::pow(r2, x)) / sc).real();
  return f;
}

}  // namespace

std::optional<Dot> matching_dot(const ChainParams& p) {
  if (p.t_z > 0.0 && p.delta0 > 0.0) return p.h_z == 0.0 ? Dot::D : Dot::A;
  if (p.t_z < 0.0 && p.delta0 < 0.0) return p.h_z == 0.0 ? Dot::C : Dot::B;
  return std::nullopt;
}

AnalyticEdgePair analytic_edge_states(Dot dot, const ChainParams& p) {
  check_dot_pattern(dot, p);
  const int n = p.n_cells;
  const double t0 = std::abs(p.t_z);
  const double d0 = std::abs(p.delta0);
  const double a0 = (t0 - d0) / (t0 + d0);

  AnalyticEdgeState left;
  left.dot = dot;
  left.n_cells = n;
  switch (dot) {
    case Dot::A: {
      left.a = a0;
      left.b = p.h_z / (t0 + d0);
      left.c = left.b * left.b - 4.0 * left.a;
      left.profile = two_root_profile(left.b, left.c, -1.0, n);
      break;
    }
    case Dot::B: {
      if (t0 == d0) throw ContractViolation("analytic_edge_states: dot B form undefined for |t_z| = |delta0|");
      left.a = 1.0 / a0;
      left.b = p.h_z / (t0 - d0);
      left.c = left.b * left.b - 4.0 * left.a;
      left.profile = two_root_profile(left.b, left.c, +1.0, n);
      break;
    }
    case Dot::C:
    case Dot::D: {
      if (!(a0 >= 0.0 && a0 < 1.0))
        throw ContractViolation("analytic_edge_states: dots C/D need 0 <= a0 < 1 (|t_z| >= |delta0| > 0)");
      left.a = a0 > 0.0 ? std::log(1.0 / a0) : std::numeric_limits<double>::infinity();
      left.profile.resize(n);
      for (int x = 1; x <= n; ++x) {
        if (a0 == 0.0) {
          left.profile[x - 1] = x == 1 ? 1.0 : 0.0;
        } else {
          left.profile[x - 1] = std::sin(0.5 * std::numbers::pi * x) * std::exp(-0.5 * left.a * x);
        }
      }
      break;
    }
  }
  double sq = 0.0;
  for (double v : left.profile) sq += v * v;
  if (!(sq > 0.0) || !std::isfinite(sq))
    throw ContractViolation("analytic_edge_states: profile is not normalizable on the finite chain");
  left.normalization = 1.0 / std::sqrt(sq);

  AnalyticEdgeState right = left;
  left.side = Side::left;
  left.spinor_branch = Branch::plus;
  right.side = Side::right;
  right.spinor_branch = Branch::minus;
  return {left, right};
}

double AnalyticEdgeState::amplitude(int site) const {
  const int x = side == Side::left ? site : n_cells - site + 1;
  return normalization * profile[x - 1];
}

SpinorState AnalyticEdgeState::state() const {
  StateVector amps(2 * n_cells);
  const Eigen::Vector2cd s = spinor(spinor_branch);
  for (int l = 1; l <= n_cells; ++l) {
    amps(basis_index(l, Spin::up)) = amplitude(l) * s(0);
    amps(basis_index(l, Spin::down)) = amplitude(l) * s(1);
  }
  return SpinorState::normalized(amps);
}

std::string AnalyticEdgeState::label() const {
  return std::string("Psi_") + (side == Side::left ? "L" : "R") + "," + std::to_string(dot_index(dot));
}

RealVector edge_weight_diagonal(int n_cells) {
  RealVector w(2 * n_cells);
  const double mid = 0.5 * (n_cells + 1);
  for (int l = 1; l <= n_cells; ++l) {
    const double v = l < mid ? 1.0 : (l > mid ? -1.0 : 0.0);
    w(basis_index(l, Spin::up)) = v;
    w(basis_index(l, Spin::down)) = v;
  }
  return w;
}

namespace {

StateVector phase_fixed(StateVector v, int anchor) {
  Complex ref = v(anchor);
  if (std::abs(ref) < 1e-300) {
    Eigen::Index imax = 0;
    v.cwiseAbs().maxCoeff(&imax);
    ref = v(imax);
  }
  return v * (std::conj(ref) / std::abs(ref));
}

}  // namespace

NumericZeroModes numeric_zero_modes(const EigDecomposition& eig, double threshold) {
  const Eigen::Index dim = eig.values.size();
  std::vector<Eigen::Index> zero;
  for (Eigen::Index k = 0; k < dim; ++k)
    if (std::abs(eig.values(k)) < threshold) zero.push_back(k);
  if (zero.size() != 2)
    throw NoZeroModes("numeric_zero_modes: expected exactly two sub-threshold eigenvalues, found " +
                          std::to_string(zero.size()),
                      static_cast<int>(zero.size()));

  const int n = static_cast<int>(dim / 2);
  ComplexMatrix span(dim, 2);
  span.col(0) = eig.vectors.col(zero[0]);
  span.col(1) = eig.vectors.col(zero[1]);
  const RealVector w = edge_weight_diagonal(n);
  const ComplexMatrix projected = span.adjoint() * w.asDiagonal() * span;
  const auto rot = herm_eig(0.5 * (projected + projected.adjoint()));
  // Largest edge-weight eigenvalue is the left state, smallest the right.
  StateVector left = span * rot.vectors.col(1);
  StateVector right = span * rot.vectors.col(0);
  left = phase_fixed(left, basis_index(1, Spin::up));
  right = phase_fixed(right, basis_index(n, Spin::up));

  return NumericZeroModes{SpinorState::normalized(left), SpinorState::normalized(right),
                          {eig.values(zero[0]), eig.values(zero[1])}};
}

NumericZeroModes numeric_zero_modes(const ComplexMatrix& h, double threshold) {
  return numeric_zero_modes(herm_eig(h), threshold);
}

double state_fidelity(const SpinorState& a, const SpinorState& b) {
  if (a.amplitudes().size() != b.amplitudes().size())
    throw ContractViolation("state_fidelity: dimension mismatch");
  return std::norm(a.amplitudes().dot(b.amplitudes()));
}

double edge_overlap(const AnalyticEdgeState& analytic, const SpinorState& numeric) {
  if (2 * analytic.n_cells != numeric.amplitudes().size())
    throw ContractViolation("edge_overlap: dimension mismatch");
  return state_fidelity(analytic.state(), numeric);
}

}  // namespace edgebraid
