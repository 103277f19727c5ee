#include "edgebraid/circuit_map.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "edgebraid/edge_modes.hpp"
#include "edgebraid/error.hpp"

namespace edgebraid {

void CircuitParams::validate() const {
  for (double v : {omega_r, omega_b, g_r, g_b, energy_unit})
    if (!(v > 0.0) || !std::isfinite(v)) throw ContractViolation("CircuitParams: frequencies must be positive");
  if (g_r / omega_r >= 0.1 || g_b / omega_b >= 0.1)
    throw ContractViolation("CircuitParams: JC coupling needs g/omega < 0.1");
  if (n_cells < 2) throw ContractViolation("CircuitParams: n_cells must be >= 2");
}

DressedLevels dressed_energies(const CircuitParams& c) {
  c.validate();
  DressedLevels d;
  for (int l = 1; l <= c.n_cells; ++l) {
    const bool r = l % 2 == 1;
    const double w = r ? c.omega_r : c.omega_b;
    const double g = r ? c.g_r : c.g_b;
    d.e_up.push_back(w + g);
    d.e_down.push_back(w - g);
    d.cell_type.push_back(r ? 'R' : 'B');
  }
  return d;
}

HoppingGaps hopping_gaps(const CircuitParams& c, double min_ratio) {
  c.validate();
  const double up1 = c.omega_r + c.g_r, dn1 = c.omega_r - c.g_r;
  const double up2 = c.omega_b + c.g_b, dn2 = c.omega_b - c.g_b;
  HoppingGaps out;
  out.values = {std::abs(up1 - up2), std::abs(dn1 - dn2), std::abs(up1 - dn2), std::abs(dn1 - up2)};
  std::sort(out.values.begin(), out.values.end());
  out.min_gap = out.values[0];
  out.min_separation = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) out.min_separation = std::min(out.min_separation, out.values[j] - out.values[i]);
  const double need = min_ratio * c.energy_unit * (1.0 - 1e-9);
  out.collision = out.min_gap < need || out.min_separation < need;
  return out;
}

std::string to_string(ToneBranch b) {
  switch (b) {
    case ToneBranch::uu: return "uu";
    case ToneBranch::dd: return "dd";
    case ToneBranch::ud: return "ud";
    case ToneBranch::du: return "du";
  }
  return "?";
}

ToneBranch tone_branch_from_string(const std::string& s) {
  if (s == "uu") return ToneBranch::uu;
  if (s == "dd") return ToneBranch::dd;
  if (s == "ud") return ToneBranch::ud;
  if (s == "du") return ToneBranch::du;
  throw ContractViolation("unknown tone branch '" + s + "'");
}

namespace {

struct BranchSpins {
  Spin from;  // on site l
  Spin to;    // on site l+1
};

BranchSpins spins_of(ToneBranch b) {
  switch (b) {
    case ToneBranch::uu: return {Spin::up, Spin::up};
    case ToneBranch::dd: return {Spin::down, Spin::down};
    case ToneBranch::ud: return {Spin::up, Spin::down};
    case ToneBranch::du: return {Spin::down, Spin::up};
  }
  return {Spin::up, Spin::up};
}

// Photon-component sign of a dressed state: |1g> = (|up> - |down>)/sqrt2.
double photon_sign(Spin s) { return s == Spin::up ? 1.0 : -1.0; }

double level(const DressedLevels& d, int site, Spin s) {
  return s == Spin::up ? d.e_up[site - 1] : d.e_down[site - 1];
}

double wrap_phase(double phase) {
  return phase > std::numbers::pi ? phase - 2.0 * std::numbers::pi : phase;
}

constexpr ToneBranch kBranches[4] = {ToneBranch::uu, ToneBranch::dd, ToneBranch::ud, ToneBranch::du};

}  // namespace

DrivePlan synthesize_drives(const ChainParams& p, const CircuitParams& c) {
  if (p.n_cells != c.n_cells) throw ContractViolation("synthesize_drives: chain and circuit sizes differ");
  const DressedLevels levels = dressed_energies(c);
  const double t0 = c.energy_unit;

  DrivePlan plan;
  plan.energy_unit = t0;
  for (int l = 1; l <= p.n_cells; ++l) plan.frame_offsets.push_back({p.h_z * t0, -p.h_z * t0});

  // Target coefficients t_{a,a'} and base phases.
  auto coefficient = [&p](ToneBranch b) {
    switch (b) {
      case ToneBranch::uu: return p.t_z;
      case ToneBranch::dd: return -p.t_z;
      case ToneBranch::ud: return p.delta0;
      case ToneBranch::du: return p.delta0;
    }
    return 0.0;
  };
  auto base_phase = [&p](ToneBranch b) {
    switch (b) {
      case ToneBranch::uu:
      case ToneBranch::dd: return 0.0;
      case ToneBranch::ud: return -0.5 * std::numbers::pi + p.phi;
      case ToneBranch::du: return -0.5 * std::numbers::pi - p.phi;
    }
    return 0.0;
  };

  for (int l = 1; l < p.n_cells; ++l) {
    LinkDrive link;
    link.link = l;
    for (ToneBranch b : kBranches) {
      const auto s = spins_of(b);
      const double coeff = coefficient(b);
      DriveTone tone;
      tone.branch = b;
      tone.frequency = (level(levels, l, s.from) - plan.frame_offsets[l - 1][int(s.from)]) -
                       (level(levels, l + 1, s.to) - plan.frame_offsets[l][int(s.to)]);
      tone.amplitude = 4.0 * std::abs(coeff) * t0;
      tone.phase = wrap_phase(base_phase(b) + (coeff < 0.0 ? std::numbers::pi : 0.0));
      link.tones.push_back(tone);
    }
    plan.links.push_back(std::move(link));
  }
  return plan;
}

ComplexMatrix effective_from_plan(const DrivePlan& plan) {
  const int n = plan.n_cells();
  const double t0 = plan.energy_unit;
  ComplexMatrix h = ComplexMatrix::Zero(2 * n, 2 * n);
  for (int l = 1; l <= n; ++l) {
    h(basis_index(l, Spin::up), basis_index(l, Spin::up)) = plan.frame_offsets[l - 1][0] / t0;
    h(basis_index(l, Spin::down), basis_index(l, Spin::down)) = plan.frame_offsets[l - 1][1] / t0;
  }
  for (const auto& link : plan.links) {
    if (link.link < 1 || link.link >= n) throw ContractViolation("effective_from_plan: link index out of range");
    for (const auto& tone : link.tones) {
      const auto s = spins_of(tone.branch);
      const int i = basis_index(link.link, s.from);
      const int j = basis_index(link.link + 1, s.to);
      const double sign = s.from == s.to ? 1.0 : -1.0;  // 2 delta - 1
      const Complex v = 0.25 * tone.amplitude / t0 * sign * std::exp(-kI * tone.phase);
      h(i, j) += v;
      h(j, i) += std::conj(v);
    }
  }
  return h;
}

ComplexMatrix rwa_effective_hamiltonian(const DrivePlan& plan, const ChainParams& p, const CircuitParams& c) {
  if (plan.n_cells() != p.n_cells || c.n_cells != p.n_cells)
    throw ContractViolation("rwa_effective_hamiltonian: size mismatch");
  const DressedLevels levels = dressed_energies(c);
  for (const auto& link : plan.links) {
    for (const auto& tone : link.tones) {
      const auto s = spins_of(tone.branch);
      const int l = link.link;
      const double resonance = (level(levels, l, s.from) - plan.frame_offsets[l - 1][int(s.from)]) -
                               (level(levels, l + 1, s.to) - plan.frame_offsets[l][int(s.to)]);
      if (std::abs(tone.frequency - resonance) > 1e-9 * std::max(c.omega_r, c.omega_b))
        throw SynthesisMismatch("rwa_effective_hamiltonian: tone " + to_string(tone.branch) + " on link " +
                                    std::to_string(l) + " is off resonance",
                                basis_index(l, s.from), basis_index(l + 1, s.to));
    }
  }
  const ComplexMatrix h = effective_from_plan(plan);
  const ComplexMatrix target = build_open_hamiltonian(p);
  for (Eigen::Index i = 0; i < h.rows(); ++i)
    for (Eigen::Index j = 0; j < h.cols(); ++j)
      if (std::abs(h(i, j) - target(i, j)) > 1e-12)
        throw SynthesisMismatch("rwa_effective_hamiltonian: entry (" + std::to_string(i) + ", " + std::to_string(j) +
                                    ") differs from the chain Hamiltonian",
                                static_cast<int>(i), static_cast<int>(j));
  return h;
}

RwaValidityReport rwa_validity(const DrivePlan& plan, double threshold) {
  RwaValidityReport r;
  r.threshold = threshold;
  double tmax = 0.0;
  for (const auto& link : plan.links)
    for (const auto& tone : link.tones) tmax = std::max(tmax, 0.25 * tone.amplitude);
  r.max_effective_hopping = tmax;
  const double inf = std::numeric_limits<double>::infinity();
  if (tmax == 0.0) {
    r.min_abs_ratio = inf;
    r.min_pairwise_ratio = inf;
    r.pass = true;
    return r;
  }
  double min_abs = inf, min_pair = inf;
  for (const auto& link : plan.links) {
    for (std::size_t i = 0; i < link.tones.size(); ++i) {
      const double wi = link.tones[i].frequency;
      min_abs = std::min(min_abs, std::abs(wi));
      for (std::size_t j = i + 1; j < link.tones.size(); ++j) {
        const double wj = link.tones[j].frequency;
        min_pair = std::min({min_pair, std::abs(wi - wj), std::abs(wi + wj)});
      }
    }
  }
  r.min_abs_ratio = min_abs / tmax;
  r.min_pairwise_ratio = min_pair / tmax;
  const double need = threshold * (1.0 - 1e-9);
  r.pass = r.min_abs_ratio >= need && r.min_pairwise_ratio >= need;
  return r;
}

namespace {

double drive_amplitude(const LinkDrive& link, double t) {
  double j = 0.0;
  for (const auto& tone : link.tones) j += tone.amplitude * std::cos(tone.frequency * t + tone.phase);
  return j;
}

constexpr Spin kSpins[2] = {Spin::up, Spin::down};

}  // namespace

ComplexMatrix full_drive_hamiltonian(const DrivePlan& plan, const CircuitParams& c, double t) {
  if (t < 0.0) throw ContractViolation("full_drive_hamiltonian: t must be >= 0");
  if (plan.n_cells() != c.n_cells) throw ContractViolation("full_drive_hamiltonian: size mismatch");
  const DressedLevels levels = dressed_energies(c);
  const int n = c.n_cells;
  ComplexMatrix h = ComplexMatrix::Zero(2 * n + 1, 2 * n + 1);
  for (int l = 1; l <= n; ++l)
    for (Spin s : kSpins) h(1 + basis_index(l, s), 1 + basis_index(l, s)) = level(levels, l, s);
  for (const auto& link : plan.links) {
    const double j = drive_amplitude(link, t);
    for (Spin a : kSpins)
      for (Spin b : kSpins) {
        // a+_l a_{l+1} = |1g>_l <1g|_{l+1} = 1/2 sum s_a s_b |a>_l <b|_{l+1}
        const double v = 0.5 * photon_sign(a) * photon_sign(b) * j;
        const int r = 1 + basis_index(link.link, a);
        const int col = 1 + basis_index(link.link + 1, b);
        h(r, col) += v;
        h(col, r) += v;
      }
  }
  return h;
}

CrossValidationResult rwa_cross_validation(const DrivePlan& plan, const CircuitParams& c, const StateVector& initial,
                                           double window, const CrossValidationOptions& opts) {
  if (!(window > 0.0) || window > 1e-6 * (1.0 + 1e-12))
    throw ContractViolation("rwa_cross_validation: window must be in (0, 1 us]");
  if (opts.steps_per_period < 40)
    throw ContractViolation("rwa_cross_validation: at least 40 steps per period are required");
  const int n = plan.n_cells();
  if (c.n_cells != n || initial.size() != 2 * n) throw ContractViolation("rwa_cross_validation: size mismatch");
  const DressedLevels levels = dressed_energies(c);

  RealVector energy(2 * n);
  for (int l = 1; l <= n; ++l)
    for (Spin s : kSpins) energy(basis_index(l, s)) = level(levels, l, s);

  double fastest = 0.0;
  for (const auto& link : plan.links) {
    double split = 0.0;
    for (Spin a : kSpins)
      for (Spin b : kSpins)
        split = std::max(split, std::abs(energy(basis_index(link.link, a)) - energy(basis_index(link.link + 1, b))));
    for (const auto& tone : link.tones) fastest = std::max(fastest, split + std::abs(tone.frequency));
  }

  // Interaction picture with respect to the dressed levels.
  auto rhs = [&](double t, const StateVector& psi) {
    StateVector out = StateVector::Zero(psi.size());
    for (const auto& link : plan.links) {
      const double j = drive_amplitude(link, t);
      if (j == 0.0) continue;
      for (Spin a : kSpins)
        for (Spin b : kSpins) {
          const int r = basis_index(link.link, a);
          const int col = basis_index(link.link + 1, b);
          const Complex v = 0.5 * photon_sign(a) * photon_sign(b) * j *
                            std::exp(kI * (energy(r) - energy(col)) * t);
          out(r) += v * psi(col);
          out(col) += std::conj(v) * psi(r);
        }
    }
    return StateVector(-kI * out);
  };
  auto propagate = [&](long steps) {
    const double dt = window / steps;
    StateVector psi = initial;
    for (long k = 0; k < steps; ++k) {
      const double t = k * dt;
      const StateVector k1 = rhs(t, psi);
      const StateVector k2 = rhs(t + 0.5 * dt, psi + 0.5 * dt * k1);
      const StateVector k3 = rhs(t + 0.5 * dt, psi + 0.5 * dt * k2);
      const StateVector k4 = rhs(t + dt, psi + dt * k3);
      psi += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return psi;
  };

  long coarse_steps = 1;
  if (fastest > 0.0) {
    const double period = 2.0 * std::numbers::pi / fastest;
    coarse_steps = std::max(1L, static_cast<long>(std::ceil(window / period * opts.steps_per_period)));
  }
  const StateVector lab_coarse = propagate(coarse_steps);
  const StateVector lab_fine = propagate(2 * coarse_steps);

  // Effective frame, then realign by exp(i P t).
  const ComplexMatrix heff = plan.energy_unit * effective_from_plan(plan);
  StateVector rot = evolve_unitary(heff, initial, window);
  for (int l = 1; l <= n; ++l)
    for (Spin s : kSpins) rot(basis_index(l, s)) *= std::exp(kI * plan.frame_offsets[l - 1][int(s)] * window);

  CrossValidationResult res;
  res.fastest_frequency = fastest;
  res.steps = 2 * coarse_steps;
  res.fidelity = std::norm(lab_fine.normalized().dot(rot));
  res.fidelity_coarse = std::norm(lab_coarse.normalized().dot(rot));
  res.doubling_change = 1.0 - std::norm(lab_coarse.normalized().dot(lab_fine.normalized()));
  if (res.doubling_change > opts.doubling_tol)
    throw StepSizeError("rwa_cross_validation: step doubling changes the state by " +
                        std::to_string(res.doubling_change) + "; raise steps_per_period");
  return res;
}

CrossValidationResult rwa_cross_validation(const DrivePlan& plan, const ChainParams& p, const CircuitParams& c,
                                           double window, const CrossValidationOptions& opts) {
  if (p.n_cells != plan.n_cells()) throw ContractViolation("rwa_cross_validation: size mismatch");
  const auto modes = numeric_zero_modes(effective_from_plan(plan));
  return rwa_cross_validation(plan, c, modes.left_state.amplitudes(), window, opts);
}

nlohmann::json to_json(const DrivePlan& plan) {
  nlohmann::json j;
  j["frequency_units"] = "Hz (angular frequency divided by 2 pi)";
  j["energy_unit_hz"] = units::rad_to_hz(plan.energy_unit);
  j["n_cells"] = plan.n_cells();
  nlohmann::json offsets = nlohmann::json::array();
  for (const auto& o : plan.frame_offsets) offsets.push_back({units::rad_to_hz(o[0]), units::rad_to_hz(o[1])});
  j["frame_offsets_hz"] = offsets;
  nlohmann::json links = nlohmann::json::array();
  for (const auto& link : plan.links) {
    nlohmann::json tones = nlohmann::json::array();
    for (const auto& t : link.tones)
      tones.push_back({{"branch", to_string(t.branch)},
                       {"freq_hz", units::rad_to_hz(t.frequency)},
                       {"amp_hz", units::rad_to_hz(t.amplitude)},
                       {"phase_rad", t.phase}});
    links.push_back({{"link", link.link}, {"tones", tones}});
  }
  j["links"] = links;
  return j;
}

DrivePlan drive_plan_from_json(const nlohmann::json& j) {
  const double two_pi = 2.0 * std::numbers::pi;
  try {
    DrivePlan plan;
    plan.energy_unit = j.at("energy_unit_hz").get<double>() * two_pi;
    for (const auto& o : j.at("frame_offsets_hz"))
      plan.frame_offsets.push_back({o.at(0).get<double>() * two_pi, o.at(1).get<double>() * two_pi});
    for (const auto& lj : j.at("links")) {
      LinkDrive link;
      link.link = lj.at("link").get<int>();
      for (const auto& tj : lj.at("tones")) {
        DriveTone t;
        t.branch = tone_branch_from_string(tj.at("branch").get<std::string>());
        t.frequency = tj.at("freq_hz").get<double>() * two_pi;
        t.amplitude = tj.at("amp_hz").get<double>() * two_pi;
        t.phase = tj.at("phase_rad").get<double>();
        link.tones.push_back(t);
      }
      plan.links.push_back(std::move(link));
    }
    return plan;
  } catch (const nlohmann::json::exception& e) {
    throw ContractViolation(std::string("drive_plan_from_json: ") + e.what());
  }
}

}  // namespace edgebraid
