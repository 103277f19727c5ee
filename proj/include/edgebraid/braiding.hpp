#pragma once

// Ordered sign-flip operations O1 and O2 as parameter schedules, and state
// propagation through them.
//
// O1: flip the signs of (t_z, delta0) at the current h_z, then ramp h_z -> 0.
// O2: flip the signs of (t_z, delta0) at constant h_z.
// Flips follow t_z(s) = t_z cos(pi r), delta0(s) = delta0 cos(pi r) with r the
// ramp profile of the segment.

#include <optional>
#include <string>
#include <vector>

#include "edgebraid/edge_modes.hpp"

namespace edgebraid {

enum class OpName { O1, O2 };
enum class RampShape { linear, cosine };
enum class EvolutionMode { tracking, unitary };

std::string to_string(OpName op);
std::string to_string(RampShape r);
std::string to_string(EvolutionMode m);
OpName op_from_string(const std::string& s);
RampShape ramp_from_string(const std::string& s);
EvolutionMode mode_from_string(const std::string& s);

double ramp_profile(RampShape shape, double u);

struct Segment {
  enum class Kind { sign_flip, field_ramp };
  Kind kind = Kind::sign_flip;
  ChainParams from;
  ChainParams to;

  ChainParams at(double u, RampShape shape) const;
};

struct ProtocolOp {
  OpName name = OpName::O1;
  std::vector<Segment> segments;  // equal shares of the op's time and steps
  double duration = 0.0;          // 1/t0 units
  int steps = 0;

  ChainParams start() const { return segments.front().from; }
  ChainParams end() const { return segments.back().to; }
  ChainParams at(double s, RampShape shape) const;
};

inline constexpr int kMinStepsPerOp = 100;

struct ProtocolSchedule {
  std::vector<ProtocolOp> ops;
  RampShape ramp = RampShape::cosine;
  ChainParams initial;

  double total_duration() const;
  int total_steps() const;
  ChainParams final_params() const { return ops.empty() ? initial : ops.back().end(); }
  ProtocolSchedule with_steps_scaled(int factor) const;
};

// Throws ContractViolation for non-positive durations, steps < 100 per op,
// or a duration list whose length differs from the order.
ProtocolSchedule make_protocol(const std::vector<OpName>& order, const ChainParams& initial,
                               const std::vector<double>& durations, int steps_per_op,
                               RampShape ramp = RampShape::cosine);

// Time-ordered product of exp(-i H(s_mid) dt) at the given step count.
SpinorState evolve_through(const ProtocolSchedule& schedule, const SpinorState& initial);

struct ConvergedEvolution {
  SpinorState state;
  int steps_per_op = 0;
  double doubling_change = 0.0;  // 1 - |<psi_S|psi_2S>|^2 at the accepted step count
  bool converged = false;
};

// Doubles the step count from the schedule's value until the final-state
// fidelity changes by less than `tol`. Throws StepSizeError when
// max_doublings is exhausted and `enforce` is set.
ConvergedEvolution evolve_converged(const ProtocolSchedule& schedule, const SpinorState& initial,
                                    double tol = 1e-4, int max_doublings = 8, bool enforce = true);

struct TrackingOptions {
  double zero_threshold = kDefaultZeroThreshold;
  double gap_floor = 1.0;  // steps with a smaller bulk gap are bridged, not projected
};

// Idealized adiabatic limit. At each step inside the gapped topological
// region the state is projected onto the instantaneous zero-mode pair and
// renormalized. Windows where the bulk gap closes are bridged by carrying the
// amplitudes in the sigma_y (phi_+/phi_-) sectors of the pair across: a sign
// change of delta0 at h_z != 0 exchanges the sectors, and an h_z = 0 flip,
// where H(s) only rescales, leaves the state unchanged.
// Throws TrackingLoss if a gapped topological step does not show exactly two
// zero modes.
SpinorState evolve_tracking(const ProtocolSchedule& schedule, const SpinorState& initial,
                            const TrackingOptions& opts = {});

enum class EdgeSide { left, right, delocalized };
std::string to_string(EdgeSide s);

inline constexpr int kEdgeSites = 4;

struct FinalStateReport {
  EdgeSide edge_side = EdgeSide::delocalized;
  double edge_population = 0.0;  // weight on the 4 outermost sites of edge_side (max of both if delocalized)
  double left_population = 0.0;
  double right_population = 0.0;
  double sigma_y_expectation = 0.0;
  double fidelity_to_expected = 0.0;
  std::string expected_label;
  std::vector<double> site_density;
};

// Reference states come from analytic_edge_states at the dot matching
// p_final's sign pattern. Throws ContractViolation if p_final is not a dot.
FinalStateReport classify_final(const SpinorState& state, const ChainParams& p_final);

struct OrderComparison {
  FinalStateReport red;   // [O1, O2]
  FinalStateReport blue;  // [O2, O1]
  double distinguishability = 0.0;
  SpinorState red_state;
  SpinorState blue_state;
  int red_steps_per_op = 0;
  int blue_steps_per_op = 0;
  double max_doubling_change = 0.0;
};

struct CompareOptions {
  EvolutionMode mode = EvolutionMode::tracking;
  RampShape ramp = RampShape::cosine;
  int steps_per_op = 250;
  TrackingOptions tracking;
  double doubling_tol = 1e-4;
  bool enforce_convergence = true;
  bool empty_orders = false;  // both orders with no ops
};

// Runs both orders from the numeric left zero mode at p_initial (dot A).
// T is the total schedule duration in 1/t0 units, split equally between the
// two operations.
OrderComparison compare_orders(const ChainParams& p_initial, double total_duration,
                               const CompareOptions& opts = {});

}  // namespace edgebraid
