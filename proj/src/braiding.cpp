#include "edgebraid/braiding.hpp"

#include <cmath>
#include <numbers>

#include "edgebraid/error.hpp"

namespace edgebraid {

std::string to_string(OpName op) { return op == OpName::O1 ? "O1" : "O2"; }
std::string to_string(RampShape r) { return r == RampShape::linear ? "linear" : "cosine"; }
std::string to_string(EvolutionMode m) { return m == EvolutionMode::tracking ? "tracking" : "unitary"; }

std::string to_string(EdgeSide s) {
  switch (s) {
    case EdgeSide::left: return "left";
    case EdgeSide::right: return "right";
    case EdgeSide::delocalized: return "delocalized";
  }
  return "?";
}

OpName op_from_string(const std::string& s) {
  if (s == "O1") return OpName::O1;
  if (s == "O2") return OpName::O2;
  throw ContractViolation("unknown operation '" + s + "' (expected O1 or O2)");
}

RampShape ramp_from_string(const std::string& s) {
  if (s == "linear") return RampShape::linear;
  if (s == "cosine") return RampShape::cosine;
  throw ContractViolation("unknown ramp shape '" + s + "' (expected linear or cosine)");
}

EvolutionMode mode_from_string(const std::string& s) {
  if (s == "tracking") return EvolutionMode::tracking;
  if (s == "unitary") return EvolutionMode::unitary;
  throw ContractViolation("unknown evolution mode '" + s + "' (expected tracking or unitary)");
}

double ramp_profile(RampShape shape, double u) {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  return shape == RampShape::linear ? u : 0.5 * (1.0 - std::cos(std::numbers::pi * u));
}

ChainParams Segment::at(double u, RampShape shape) const {
  if (u <= 0.0) return from;
  if (u >= 1.0) return to;
  const double r = ramp_profile(shape, u);
  ChainParams p = from;
  if (kind == Kind::sign_flip) {
    const double c = std::cos(std::numbers::pi * r);
    p.t_z = from.t_z * c;
    p.delta0 = from.delta0 * c;
  } else {
    p.h_z = from.h_z + (to.h_z - from.h_z) * r;
  }
  return p;
}

ChainParams ProtocolOp::at(double s, RampShape shape) const {
  const int n = static_cast<int>(segments.size());
  if (s >= 1.0) return end();
  if (s <= 0.0) return start();
  const int idx = std::min(static_cast<int>(s * n), n - 1);
  return segments[idx].at(s * n - idx, shape);
}

double ProtocolSchedule::total_duration() const {
  double t = 0.0;
  for (const auto& op : ops) t += op.duration;
  return t;
}

int ProtocolSchedule::total_steps() const {
  int n = 0;
  for (const auto& op : ops) n += op.steps;
  return n;
}

ProtocolSchedule ProtocolSchedule::with_steps_scaled(int factor) const {
  ProtocolSchedule out = *this;
  for (auto& op : out.ops) op.steps *= factor;
  return out;
}

namespace {

ChainParams flipped(const ChainParams& p) {
  ChainParams q = p;
  q.t_z = -p.t_z;
  q.delta0 = -p.delta0;
  return q;
}

}  // namespace

ProtocolSchedule make_protocol(const std::vector<OpName>& order, const ChainParams& initial,
                               const std::vector<double>& durations, int steps_per_op, RampShape ramp) {
  if (durations.size() != order.size())
    throw ContractViolation("make_protocol: one duration per operation is required");
  ProtocolSchedule out;
  out.ramp = ramp;
  out.initial = initial;
  if (order.empty()) return out;
  if (steps_per_op < kMinStepsPerOp)
    throw ContractViolation("make_protocol: at least 100 steps per operation are required");

  ChainParams current = initial;
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (!(durations[i] > 0.0) || !std::isfinite(durations[i]))
      throw ContractViolation("make_protocol: durations must be positive");
    ProtocolOp op;
    op.name = order[i];
    op.duration = durations[i];
    op.steps = steps_per_op;
    const ChainParams after_flip = flipped(current);
    op.segments.push_back({Segment::Kind::sign_flip, current, after_flip});
    current = after_flip;
    if (op.name == OpName::O1) {
      ChainParams zero_field = current;
      zero_field.h_z = 0.0;
      op.segments.push_back({Segment::Kind::field_ramp, current, zero_field});
      current = zero_field;
    }
    out.ops.push_back(std::move(op));
  }
  return out;
}

namespace {

// Calls f(params, dt, global_step) at each step midpoint (or end when `at_end`).
template <class F>
void for_each_step(const ProtocolSchedule& schedule, bool at_end, F&& f) {
  int global = 0;
  for (const auto& op : schedule.ops) {
    const int nseg = static_cast<int>(op.segments.size());
    const int seg_steps = std::max(1, op.steps / nseg);
    const double dt = op.duration / nseg / seg_steps;
    for (const auto& seg : op.segments) {
      for (int j = 0; j < seg_steps; ++j) {
        const double u = at_end ? double(j + 1) / seg_steps : (j + 0.5) / seg_steps;
        f(seg.at(u, schedule.ramp), dt, global++);
      }
    }
  }
}

void check_dimension(const ProtocolSchedule& schedule, const SpinorState& s) {
  if (s.n_cells() != schedule.initial.n_cells)
    throw ContractViolation("evolution: state length does not match the chain");
}

}  // namespace

SpinorState evolve_through(const ProtocolSchedule& schedule, const SpinorState& initial) {
  check_dimension(schedule, initial);
  StateVector psi = initial.amplitudes();
  std::optional<ChainParams> cached_p;
  EigDecomposition cached;
  for_each_step(schedule, false, [&](const ChainParams& p, double dt, int) {
    if (!cached_p || !(*cached_p == p)) {
      cached = herm_eig(build_open_hamiltonian(p));
      cached_p = p;
    }
    psi = evolve_unitary(cached, psi, dt);
  });
  return SpinorState::normalized(psi);
}

ConvergedEvolution evolve_converged(const ProtocolSchedule& schedule, const SpinorState& initial,
                                    double tol, int max_doublings, bool enforce) {
  SpinorState coarse = evolve_through(schedule, initial);
  if (schedule.ops.empty()) return {coarse, 0, 0.0, true};
  ProtocolSchedule current = schedule;
  double change = 1.0;
  for (int d = 0; d < max_doublings; ++d) {
    ProtocolSchedule finer = current.with_steps_scaled(2);
    SpinorState fine = evolve_through(finer, initial);
    change = 1.0 - state_fidelity(coarse, fine);
    if (change < tol) return {fine, finer.ops.front().steps, change, true};
    current = finer;
    coarse = fine;
  }
  if (enforce)
    throw StepSizeError("evolve_converged: step doubling still changes the final fidelity by " +
                        std::to_string(change) + "; raise the step count");
  return {coarse, current.ops.front().steps, change, false};
}

namespace {

struct ChiralPair {
  StateVector plus;
  StateVector minus;
};

StateVector fix_phase_max(StateVector v) {
  Eigen::Index imax = 0;
  v.cwiseAbs().maxCoeff(&imax);
  return v * (std::conj(v(imax)) / std::abs(v(imax)));
}

ChiralPair chirality_basis(const ComplexMatrix& span) {
  ComplexMatrix sy = ComplexMatrix::Zero(span.rows(), span.rows());
  for (Eigen::Index i = 0; i + 1 < span.rows(); i += 2) {
    sy(i, i + 1) = -kI;
    sy(i + 1, i) = kI;
  }
  ComplexMatrix m = span.adjoint() * sy * span;
  m = 0.5 * (m + m.adjoint());
  const auto e = herm_eig(m);
  return {fix_phase_max(span * e.vectors.col(1)), fix_phase_max(span * e.vectors.col(0))};
}

int sgn(double x) { return (x > 0.0) - (x < 0.0); }

}  // namespace

SpinorState evolve_tracking(const ProtocolSchedule& schedule, const SpinorState& initial,
                            const TrackingOptions& opts) {
  check_dimension(schedule, initial);
  if (schedule.ops.empty()) return initial;

  auto tracked = [&](const ChainParams& p) {
    return std::abs(p.h_z) < 2.0 * std::abs(p.t_z) && minimum_gap(p) >= opts.gap_floor;
  };
  auto zero_span = [&](const ChainParams& p, int step) {
    const auto eig = herm_eig(build_open_hamiltonian(p));
    std::vector<Eigen::Index> idx;
    for (Eigen::Index k = 0; k < eig.values.size(); ++k)
      if (std::abs(eig.values(k)) < opts.zero_threshold) idx.push_back(k);
    if (idx.size() != 2)
      throw TrackingLoss("evolve_tracking: " + std::to_string(idx.size()) +
                             " zero modes at a gapped topological step " + std::to_string(step),
                         step);
    ComplexMatrix span(eig.values.size(), 2);
    span.col(0) = eig.vectors.col(idx[0]);
    span.col(1) = eig.vectors.col(idx[1]);
    return span;
  };

  StateVector psi = initial.amplitudes();
  ChainParams last = schedule.initial;
  if (!tracked(last))
    throw ContractViolation("evolve_tracking: the schedule must start inside the gapped topological phase");
  ComplexMatrix span = zero_span(last, -1);
  {
    const StateVector proj = span * (span.adjoint() * psi);
    if (proj.squaredNorm() < 0.9)
      throw ContractViolation("evolve_tracking: initial state is not in the zero-mode subspace");
    psi = proj.normalized();
  }

  bool bridging = false;
  Complex c_plus, c_minus;
  int entry_delta_sign = 0;
  bool field_on = false;

  for_each_step(schedule, true, [&](const ChainParams& p, double, int step) {
    if (!tracked(p)) {
      if (!bridging) {
        const ChiralPair basis = chirality_basis(span);
        c_plus = basis.plus.dot(psi);
        c_minus = basis.minus.dot(psi);
        entry_delta_sign = sgn(last.delta0);
        field_on = last.h_z != 0.0;
        bridging = true;
      }
      field_on = field_on || p.h_z != 0.0;
      return;
    }
    span = zero_span(p, step);
    if (bridging) {
      field_on = field_on || p.h_z != 0.0;
      const ChiralPair basis = chirality_basis(span);
      const bool swap = field_on && sgn(p.delta0) != entry_delta_sign;
      psi = swap ? StateVector(c_plus * basis.minus + c_minus * basis.plus)
                 : StateVector(c_plus * basis.plus + c_minus * basis.minus);
      bridging = false;
    } else {
      psi = span * (span.adjoint() * psi);
      const double norm = psi.norm();
      if (norm < 1e-6)
        throw TrackingLoss("evolve_tracking: state left the zero-mode subspace at step " + std::to_string(step),
                           step);
      psi /= norm;
    }
    last = p;
  });
  if (bridging)
    throw TrackingLoss("evolve_tracking: schedule ends outside the gapped topological phase",
                       schedule.total_steps() - 1);
  return SpinorState::normalized(psi);
}

FinalStateReport classify_final(const SpinorState& state, const ChainParams& p_final) {
  if (state.n_cells() != p_final.n_cells) throw ContractViolation("classify_final: dimension mismatch");
  const auto match = matching_dot(p_final);
  if (!match) throw ContractViolation("classify_final: t_z and delta0 must share a sign");
  const Dot dot = *match;
  const auto pair = analytic_edge_states(dot, p_final);

  FinalStateReport r;
  r.site_density = state.site_density();
  const int n = state.n_cells();
  const int w = std::min(kEdgeSites, n);
  for (int i = 0; i < w; ++i) {
    r.left_population += r.site_density[i];
    r.right_population += r.site_density[n - 1 - i];
  }
  r.sigma_y_expectation = sigma_y_expectation(state.amplitudes());
  if (r.left_population > 0.5) {
    r.edge_side = EdgeSide::left;
  } else if (r.right_population > 0.5) {
    r.edge_side = EdgeSide::right;
  }
  const bool use_left = r.edge_side == EdgeSide::left ||
                        (r.edge_side == EdgeSide::delocalized && r.left_population >= r.right_population);
  r.edge_population = use_left ? r.left_population : r.right_population;
  const AnalyticEdgeState& ref = use_left ? pair.left : pair.right;
  r.expected_label = ref.label();
  r.fidelity_to_expected = state_fidelity(state, ref.state());
  return r;
}

OrderComparison compare_orders(const ChainParams& p_initial, double total_duration, const CompareOptions& opts) {
  if (!(p_initial.t_z > 0.0 && p_initial.delta0 > 0.0))
    throw ContractViolation("compare_orders: initial parameters must have t_z > 0 and delta0 > 0");
  const SpinorState start = numeric_zero_modes(build_open_hamiltonian(p_initial)).left_state;

  auto run = [&](const std::vector<OpName>& order, int& steps_used, double& change) {
    if (opts.empty_orders) {
      steps_used = 0;
      change = 0.0;
      return start;
    }
    if (!(total_duration > 0.0)) throw ContractViolation("compare_orders: duration must be positive");
    const std::vector<double> durations(order.size(), total_duration / order.size());
    const auto schedule = make_protocol(order, p_initial, durations, opts.steps_per_op, opts.ramp);
    if (opts.mode == EvolutionMode::tracking) {
      steps_used = opts.steps_per_op;
      change = 0.0;
      return evolve_tracking(schedule, start, opts.tracking);
    }
    auto res = evolve_converged(schedule, start, opts.doubling_tol, 8, opts.enforce_convergence);
    steps_used = res.steps_per_op;
    change = res.doubling_change;
    return res.state;
  };

  int red_steps = 0, blue_steps = 0;
  double red_change = 0.0, blue_change = 0.0;
  const SpinorState red = run({OpName::O1, OpName::O2}, red_steps, red_change);
  const SpinorState blue = run({OpName::O2, OpName::O1}, blue_steps, blue_change);

  ChainParams p_final = p_initial;
  if (!opts.empty_orders) p_final.h_z = 0.0;
  return OrderComparison{classify_final(red, p_final),
                         classify_final(blue, p_final),
                         1.0 - state_fidelity(red, blue),
                         red,
                         blue,
                         red_steps,
                         blue_steps,
                         std::max(red_change, blue_change)};
}

}  // namespace edgebraid
