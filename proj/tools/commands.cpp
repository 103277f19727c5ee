#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <future>
#include <numbers>

#include "edgebraid/error.hpp"
#include "edgebraid/topology.hpp"
#include "edgebraid/units.hpp"

namespace edgebraid::cli {

namespace {

using Row = std::vector<Table::Cell>;

// Independent jobs in batches of `threads`; each job writes only its own slot.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& job) {
  threads = std::max(1, threads);
  for (std::size_t start = 0; start < n; start += threads) {
    std::vector<std::future<void>> batch;
    for (std::size_t i = start; i < std::min(n, start + threads); ++i)
      batch.push_back(std::async(threads == 1 ? std::launch::deferred : std::launch::async, job, i));
    for (auto& f : batch) f.get();
  }
}

std::vector<double> axis(double lo, double hi, int n) {
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
  return out;
}

std::string nu_text(const std::optional<int>& nu) { return nu ? std::to_string(*nu) : "NA"; }

std::string tag(double v) {
  std::string s = format_number(v);
  std::replace(s.begin(), s.end(), '.', 'p');
  return s;
}

std::string side_text(EdgeSide s) {
  switch (s) {
    case EdgeSide::left: return "left";
    case EdgeSide::right: return "right";
    default: return "delocalized";
  }
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"bands",  "phase-diagram", "edge-modes",   "braid",
                                              "drives", "lindblad",      "chiral-center"};
  return names;
}

int run_command(const std::string& name, CommandContext& ctx) {
  if (name == "bands") return cmd_bands(ctx);
  if (name == "phase-diagram") return cmd_phase_diagram(ctx);
  if (name == "edge-modes") return cmd_edge_modes(ctx);
  if (name == "braid") return cmd_braid(ctx);
  if (name == "drives") return cmd_drives(ctx);
  if (name == "lindblad") return cmd_lindblad(ctx);
  if (name == "chiral-center") return cmd_chiral_center(ctx);
  throw ConfigError("unknown command '" + name + "'");
}

int cmd_bands(CommandContext& ctx) {
  const ChainParams p = ctx.cfg.chain_params();
  const int k_samples = ctx.cfg.bands.k_samples;
  Table bands({"k_rad", "e_minus_t0", "e_plus_t0", "gap_t0"});
  double grid_min = std::numeric_limits<double>::infinity();
  for (int i = 0; i < k_samples; ++i) {
    const double k = -std::numbers::pi + 2.0 * std::numbers::pi * i / k_samples;
    const BandPair e = band_energies(p, k);
    grid_min = std::min(grid_min, e.upper - e.lower);
    bands.add_row({k, e.lower, e.upper, e.upper - e.lower});
  }
  ctx.out.write_table("bands", bands);

  const double gap = minimum_gap(p, k_samples);
  Table summary({"t_z_t0", "delta0_t0", "h_z_t0", "min_gap_t0", "min_gap_mhz", "grid_min_gap_t0"});
  summary.add_row({p.t_z, p.delta0, p.h_z, gap, gap * ctx.cfg.t0_mhz, grid_min});
  ctx.out.write_table("bands_summary", summary);
  return 0;
}

int cmd_phase_diagram(CommandContext& ctx) {
  const auto& pd = ctx.cfg.phase_diagram;
  const double t0 = ctx.cfg.t0_mhz;
  const auto t_axis = axis(pd.t_z_min_mhz / t0, pd.t_z_max_mhz / t0, pd.t_z_points);
  const auto h_axis = axis(pd.h_z_min_mhz / t0, pd.h_z_max_mhz / t0, pd.h_z_points);
  const PhaseDiagram diagram = phase_diagram(t_axis, h_axis);
  Table grid({"t_z_t0", "h_z_t0", "nu"});
  for (std::size_t i = 0; i < t_axis.size(); ++i)
    for (std::size_t j = 0; j < h_axis.size(); ++j) grid.add_row({t_axis[i], h_axis[j], nu_text(diagram.at(i, j))});
  ctx.out.write_table("phase_diagram", grid);

  if (!pd.dynamical) return 0;
  struct Point {
    std::size_t i, j;
    double gap = 0.0;
    double nu = 0.0;
  };
  std::vector<Point> points;
  const ChainParams base = ctx.cfg.chain_params();
  for (std::size_t i = 0; i < t_axis.size(); i += pd.dynamical_stride)
    for (std::size_t j = 0; j < h_axis.size(); j += pd.dynamical_stride) {
      ChainParams p = base;
      p.t_z = t_axis[i];
      p.h_z = h_axis[j];
      p.delta0 = std::abs(base.delta0) * (t_axis[i] < 0.0 ? -1.0 : 1.0);
      const double gap = minimum_gap(p);
      if (diagram.at(i, j) && gap >= pd.dynamical_min_gap_mhz / t0) points.push_back({i, j, gap});
    }
  parallel_for(points.size(), ctx.threads, [&](std::size_t k) {
    ChainParams p = base;
    p.t_z = t_axis[points[k].i];
    p.h_z = h_axis[points[k].j];
    p.delta0 = std::abs(base.delta0) * (p.t_z < 0.0 ? -1.0 : 1.0);
    points[k].nu = chiral_center_dynamics(p, pd.dynamical_duration_t0inv, pd.dynamical_steps).nu_dynamical();
  });
  Table dyn({"t_z_t0", "h_z_t0", "delta0_t0", "gap_t0", "nu_closed", "nu_dynamical", "abs_diff"});
  for (const auto& pt : points) {
    const int nu = *diagram.at(pt.i, pt.j);
    const double d = std::abs(base.delta0) * (t_axis[pt.i] < 0.0 ? -1.0 : 1.0);
    dyn.add_row({t_axis[pt.i], h_axis[pt.j], d, pt.gap, static_cast<long long>(nu), pt.nu, std::abs(pt.nu - nu)});
  }
  ctx.out.write_table("phase_diagram_dynamical", dyn);
  return 0;
}

int cmd_edge_modes(CommandContext& ctx) {
  const ChainParams p = ctx.cfg.chain_params();
  const double threshold = ctx.cfg.edge_modes.zero_threshold_mhz / ctx.cfg.t0_mhz;
  const auto eig = herm_eig(build_open_hamiltonian(p));
  Table spectrum({"index", "energy_t0", "energy_mhz"});
  int zero_count = 0;
  for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
    spectrum.add_row({static_cast<long long>(i), eig.values(i), eig.values(i) * ctx.cfg.t0_mhz});
    if (std::abs(eig.values(i)) < threshold) ++zero_count;
  }
  ctx.out.write_table("spectrum", spectrum);

  std::optional<NumericZeroModes> numeric;
  try {
    numeric = numeric_zero_modes(eig, threshold);
  } catch (const NoZeroModes& e) {
    nlohmann::json j;
    j["result"] = "no zero modes";
    j["zero_mode_count"] = e.count();
    j["threshold_t0"] = threshold;
    j["t_z_t0"] = p.t_z;
    j["delta0_t0"] = p.delta0;
    j["h_z_t0"] = p.h_z;
    ctx.out.write_json("no_zero_modes.json", j);
    ctx.manifest.warnings.push_back("no_zero_modes");
    return 0;
  }

  std::optional<AnalyticEdgePair> analytic;
  std::string analytic_note;
  if (const auto dot = matching_dot(p)) {
    try {
      analytic = analytic_edge_states(*dot, p);
    } catch (const ContractViolation& e) {
      analytic_note = e.what();
    }
  } else {
    analytic_note = "t_z and delta0 differ in sign; no closed form";
  }

  const auto nl = numeric->left_state.site_density();
  const auto nr = numeric->right_state.site_density();
  std::vector<double> al, ar;
  if (analytic) {
    al = analytic->left.state().site_density();
    ar = analytic->right.state().site_density();
  }
  Table profiles({"site", "numeric_left_density", "numeric_right_density", "analytic_left_density",
                  "analytic_right_density", "analytic_left_profile"});
  for (int x = 1; x <= p.n_cells; ++x) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    profiles.add_row({static_cast<long long>(x), nl[x - 1], nr[x - 1], analytic ? al[x - 1] : nan,
                      analytic ? ar[x - 1] : nan, analytic ? analytic->left.amplitude(x) : nan});
  }
  ctx.out.write_table("edge_profiles", profiles);

  Table summary({"dot", "label_left", "label_right", "overlap_left", "overlap_right", "sigma_y_left",
                 "sigma_y_right", "energy_0_t0", "energy_1_t0", "zero_mode_count", "note"});
  const double nan = std::numeric_limits<double>::quiet_NaN();
  summary.add_row({analytic ? to_string(analytic->left.dot) : std::string("NA"),
                   analytic ? analytic->left.label() : std::string("NA"),
                   analytic ? analytic->right.label() : std::string("NA"),
                   analytic ? edge_overlap(analytic->left, numeric->left_state) : nan,
                   analytic ? edge_overlap(analytic->right, numeric->right_state) : nan,
                   sigma_y_expectation(numeric->left_state.amplitudes()),
                   sigma_y_expectation(numeric->right_state.amplitudes()), numeric->energies[0], numeric->energies[1],
                   static_cast<long long>(zero_count), analytic_note.empty() ? std::string("NA") : analytic_note});
  ctx.out.write_table("edge_summary", summary);
  return 0;
}

int cmd_braid(CommandContext& ctx) {
  const ChainParams p = ctx.cfg.chain_params();
  const CompareOptions opts = ctx.cfg.compare_options();
  const auto& durations = ctx.cfg.protocol.durations_us;
  const bool swapped = ctx.cfg.protocol.order.size() == 2 && ctx.cfg.protocol.order[0] == "O2";
  std::vector<std::optional<OrderComparison>> slots(durations.size());
  parallel_for(durations.size(), ctx.threads,
               [&](std::size_t i) { slots[i] = compare_orders(p, durations[i] * 1e-6 * ctx.cfg.energy_unit(), opts); });
  std::vector<OrderComparison> results;
  for (auto& s : slots) results.push_back(std::move(*s));
  if (swapped)
    for (auto& r : results) {
      std::swap(r.red, r.blue);
      std::swap(r.red_state, r.blue_state);
      std::swap(r.red_steps_per_op, r.blue_steps_per_op);
    }

  Table summary({"duration_us", "mode", "red_edge", "red_edge_population", "red_left_population",
                 "red_right_population", "red_sigma_y", "red_expected", "red_fidelity", "blue_edge",
                 "blue_edge_population", "blue_left_population", "blue_right_population", "blue_sigma_y",
                 "blue_expected", "blue_fidelity", "distinguishability", "red_steps_per_op", "blue_steps_per_op",
                 "max_doubling_change"});
  Table red_density({"site"}), blue_density({"site"});
  std::vector<std::string> cols{"site"};
  for (double d : durations) cols.push_back("density_t" + tag(d) + "_us");
  red_density = Table(cols);
  blue_density = Table(cols);
  for (std::size_t i = 0; i < durations.size(); ++i) {
    const auto& r = results[i];
    summary.add_row({durations[i], ctx.cfg.protocol.mode, side_text(r.red.edge_side), r.red.edge_population,
                     r.red.left_population, r.red.right_population, r.red.sigma_y_expectation, r.red.expected_label,
                     r.red.fidelity_to_expected, side_text(r.blue.edge_side), r.blue.edge_population,
                     r.blue.left_population, r.blue.right_population, r.blue.sigma_y_expectation,
                     r.blue.expected_label, r.blue.fidelity_to_expected, r.distinguishability,
                     static_cast<long long>(r.red_steps_per_op), static_cast<long long>(r.blue_steps_per_op),
                     r.max_doubling_change});
  }
  for (int x = 1; x <= p.n_cells; ++x) {
    Row red{static_cast<long long>(x)}, blue{static_cast<long long>(x)};
    for (const auto& r : results) {
      red.push_back(r.red.site_density[x - 1]);
      blue.push_back(r.blue.site_density[x - 1]);
    }
    red_density.add_row(red);
    blue_density.add_row(blue);
  }
  ctx.out.write_table("braid_summary", summary);
  ctx.out.write_table("density_red", red_density);
  ctx.out.write_table("density_blue", blue_density);
  return 0;
}

int cmd_drives(CommandContext& ctx) {
  const ChainParams p = ctx.cfg.chain_params();
  const CircuitParams c = ctx.cfg.circuit_params();
  c.validate();
  const auto gaps = hopping_gaps(c, ctx.cfg.drives.min_ratio);
  Table gap_table({"index", "gap_mhz", "gap_t0"});
  for (std::size_t i = 0; i < gaps.values.size(); ++i)
    gap_table.add_row({static_cast<long long>(i), units::rad_to_mhz(gaps.values[i]), gaps.values[i] / c.energy_unit});
  ctx.out.write_table("hopping_gaps", gap_table);
  Table gap_summary({"min_gap_mhz", "min_separation_mhz", "collision"});
  gap_summary.add_row({units::rad_to_mhz(gaps.min_gap), units::rad_to_mhz(gaps.min_separation),
                       std::string(gaps.collision ? "true" : "false")});
  ctx.out.write_table("hopping_gap_summary", gap_summary);
  if (gaps.collision) ctx.manifest.warnings.push_back("hopping_gap_collision");

  const DrivePlan plan = synthesize_drives(p, c);
  ctx.out.write_json("drive_plan.json", to_json(plan));
  Table tones({"link", "branch", "freq_mhz", "amp_mhz", "phase_rad"});
  for (const auto& link : plan.links)
    for (const auto& t : link.tones)
      tones.add_row({static_cast<long long>(link.link), to_string(t.branch), units::rad_to_mhz(t.frequency),
                     units::rad_to_mhz(t.amplitude), t.phase});
  ctx.out.write_table("drive_tones", tones);

  const auto validity = rwa_validity(plan, ctx.cfg.drives.min_ratio);
  Table v({"min_abs_ratio", "min_pairwise_ratio", "max_effective_hopping_mhz", "threshold", "pass"});
  v.add_row({validity.min_abs_ratio, validity.min_pairwise_ratio, units::rad_to_mhz(validity.max_effective_hopping),
             validity.threshold, std::string(validity.pass ? "true" : "false")});
  ctx.out.write_table("rwa_validity", v);
  if (!validity.pass) ctx.manifest.warnings.push_back("rwa_validity_fail");

  if (ctx.cfg.drives.cross_validation) {
    CrossValidationOptions o;
    o.steps_per_period = ctx.cfg.drives.steps_per_period;
    Table xv({"window_ns", "fidelity", "fidelity_coarse", "doubling_change", "fastest_frequency_mhz", "steps"});
    try {
      const auto r = rwa_cross_validation(plan, p, c, ctx.cfg.drives.window_ns * 1e-9, o);
      xv.add_row({ctx.cfg.drives.window_ns, r.fidelity, r.fidelity_coarse, r.doubling_change,
                  units::rad_to_mhz(r.fastest_frequency), static_cast<long long>(r.steps)});
      if (r.fidelity < 0.99) ctx.manifest.warnings.push_back("rwa_cross_validation_below_0.99");
    } catch (const NoZeroModes&) {
      ctx.manifest.warnings.push_back("rwa_cross_validation_skipped_no_zero_modes");
    }
    if (xv.rows() > 0) ctx.out.write_table("rwa_cross_validation", xv);
  }
  return 0;
}

namespace {

struct LindbladJob {
  EdgeInitial initial;
  double gamma_khz;
  ObservableSeries series;
  double nu_half = 0.0;
};

std::string initial_text(EdgeInitial e) { return e == EdgeInitial::right ? "right" : "left"; }

}  // namespace

int cmd_lindblad(CommandContext& ctx) {
  const RunConfig& cfg = ctx.cfg;
  const ChainParams p = cfg.chain_params();
  const int n = p.n_cells;
  std::vector<EdgeInitial> initials;
  if (cfg.lindblad.initial != "left") initials.push_back(EdgeInitial::right);
  if (cfg.lindblad.initial != "right") initials.push_back(EdgeInitial::left);
  std::vector<double> gammas = cfg.lindblad.gammas_khz;
  std::sort(gammas.begin(), gammas.end());

  HamiltonianProvider h = effective_provider(p, cfg.energy_unit());
  if (cfg.lindblad.hamiltonian == "full_drive") {
    const CircuitParams c = cfg.circuit_params();
    h = full_drive_provider(synthesize_drives(p, c), c);
  }

  std::vector<LindbladJob> jobs;
  for (auto init : initials)
    for (double g : gammas) jobs.push_back({init, g, {}, 0.0});
  // chiral center depends on gamma only
  std::vector<double> nu_half(gammas.size());
  const std::size_t total = jobs.size() + gammas.size();
  parallel_for(total, ctx.threads, [&](std::size_t k) {
    LindbladConfig lc = cfg.lindblad_config();
    if (k < jobs.size()) {
      auto& job = jobs[k];
      lc.gamma = units::khz_to_rad(job.gamma_khz);
      job.series = lindblad_evolve(DensityMatrix::pure(edge_initial_state(n, job.initial)), lc, h);
    } else {
      const std::size_t g = k - jobs.size();
      lc.gamma = units::khz_to_rad(gammas[g]);
      LindbladConfig quiet = lc;
      quiet.check_positivity = false;
      nu_half[g] = chiral_center_under_decay(p, quiet, lc.duration, cfg.energy_unit());
    }
  });

  std::vector<std::string> cols{"time_us", "p1", "p2"};
  for (int l = 1; l <= n; ++l) cols.push_back("site_" + std::to_string(l));
  cols.push_back("chiral_center");
  Table sweep({"gamma_khz", "initial", "p1", "p2", "nu_half", "max_trace_error", "max_hermiticity_error",
               "min_eigenvalue"});
  for (std::size_t k = 0; k < jobs.size(); ++k) {
    const auto& s = jobs[k].series;
    Table t(cols);
    for (std::size_t r = 0; r < s.times.size(); ++r) {
      Row row{s.times[r] * 1e6, s.p1[r], s.p2[r]};
      for (double d : s.site_density[r]) row.push_back(d);
      row.push_back(s.chiral_center[r]);
      t.add_row(std::move(row));
    }
    ctx.out.write_table("series_" + initial_text(jobs[k].initial) + "_gamma_" + tag(jobs[k].gamma_khz) + "khz", t);
    const std::size_t g = std::find(gammas.begin(), gammas.end(), jobs[k].gamma_khz) - gammas.begin();
    double min_eig = std::numeric_limits<double>::infinity();
    for (double v : s.min_eigenvalue) min_eig = std::min(min_eig, v);
    sweep.add_row({jobs[k].gamma_khz, initial_text(jobs[k].initial), s.p1.back(), s.p2.back(), nu_half[g],
                   *std::max_element(s.trace_error.begin(), s.trace_error.end()),
                   *std::max_element(s.hermiticity_error.begin(), s.hermiticity_error.end()),
                   std::isfinite(min_eig) ? min_eig : std::numeric_limits<double>::quiet_NaN()});
  }
  ctx.out.write_table("gamma_sweep", sweep);
  return 0;
}

int cmd_chiral_center(CommandContext& ctx) {
  const RunConfig& cfg = ctx.cfg;
  const ChainParams p = cfg.chain_params();
  std::vector<double> gammas = cfg.lindblad.gammas_khz;
  std::sort(gammas.begin(), gammas.end());
  std::vector<double> nu(gammas.size());
  parallel_for(gammas.size(), ctx.threads, [&](std::size_t g) {
    LindbladConfig lc = cfg.lindblad_config();
    lc.gamma = units::khz_to_rad(gammas[g]);
    lc.check_positivity = false;
    nu[g] = chiral_center_under_decay(p, lc, lc.duration, cfg.energy_unit());
  });
  Table t({"gamma_khz", "duration_us", "nu_half"});
  for (std::size_t g = 0; g < gammas.size(); ++g) t.add_row({gammas[g], cfg.lindblad.duration_us, nu[g]});
  ctx.out.write_table("chiral_center", t);

  // closed chain in natural units over the same window
  const double duration = units::us_to_t0(cfg.lindblad.duration_us) * cfg.energy_unit() / units::kT0;
  const int steps = std::max(100, static_cast<int>(std::ceil(duration * 10.0)));
  const auto series = chiral_center_dynamics(p, duration, steps);
  Table closed({"time_us", "center", "nu_running"});
  for (std::size_t i = 0; i < series.times.size(); ++i)
    closed.add_row({series.times[i] / cfg.energy_unit() * 1e6, series.instantaneous_center[i],
                    series.running_average[i]});
  ctx.out.write_table("chiral_center_closed", closed);
  return 0;
}

}  // namespace edgebraid::cli
