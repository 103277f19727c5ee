#include "run_config.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>

#include "edgebraid/error.hpp"
#include "edgebraid/units.hpp"

namespace edgebraid::cli {

using nlohmann::json;

namespace {

struct Field {
  std::string path;
  std::function<void(RunConfig&, const json&)> set;
  std::function<json(const RunConfig&)> get;
};

[[noreturn]] void type_error(const std::string& path, const char* want) {
  throw ConfigError("config key '" + path + "' expects " + want);
}

template <class T>
T convert(const std::string& path, const json& v) {
  if constexpr (std::is_same_v<T, bool>) {
    if (!v.is_boolean()) type_error(path, "true or false");
    return v.get<bool>();
  } else if constexpr (std::is_same_v<T, int>) {
    if (!v.is_number_integer()) type_error(path, "an integer");
    return v.get<int>();
  } else if constexpr (std::is_same_v<T, double>) {
    if (!v.is_number()) type_error(path, "a number");
    return v.get<double>();
  } else if constexpr (std::is_same_v<T, std::string>) {
    if (!v.is_string()) type_error(path, "a string");
    return v.get<std::string>();
  } else if constexpr (std::is_same_v<T, std::vector<double>>) {
    if (!v.is_array()) type_error(path, "a list of numbers");
    std::vector<double> out;
    for (const auto& x : v) {
      if (!x.is_number()) type_error(path, "a list of numbers");
      out.push_back(x.get<double>());
    }
    return out;
  } else {
    static_assert(std::is_same_v<T, std::vector<std::string>>);
    if (!v.is_array()) type_error(path, "a list of strings");
    std::vector<std::string> out;
    for (const auto& x : v) {
      if (!x.is_string()) type_error(path, "a list of strings");
      out.push_back(x.get<std::string>());
    }
    return out;
  }
}

template <class T, class Ref>
Field field(std::string path, Ref ref) {
  return {path, [path, ref](RunConfig& c, const json& v) { ref(c) = convert<T>(path, v); },
          [ref](const RunConfig& c) { return json(ref(const_cast<RunConfig&>(c))); }};
}

#define EB_FIELD(T, path, member) field<T>(path, [](RunConfig& c) -> T& { return c.member; })

const std::vector<Field>& schema() {
  static const std::vector<Field> fields = {
      EB_FIELD(double, "t0_mhz", t0_mhz),
      EB_FIELD(std::string, "model.dot", model.dot),
      EB_FIELD(double, "model.t_z_mhz", model.t_z_mhz),
      EB_FIELD(double, "model.delta0_mhz", model.delta0_mhz),
      EB_FIELD(double, "model.h_z_mhz", model.h_z_mhz),
      EB_FIELD(double, "model.phi_rad", model.phi_rad),
      EB_FIELD(int, "model.n_cells", model.n_cells),
      EB_FIELD(double, "circuit.omega_r_mhz", circuit.omega_r_mhz),
      EB_FIELD(double, "circuit.omega_b_mhz", circuit.omega_b_mhz),
      EB_FIELD(double, "circuit.g_r_mhz", circuit.g_r_mhz),
      EB_FIELD(double, "circuit.g_b_mhz", circuit.g_b_mhz),
      EB_FIELD(int, "bands.k_samples", bands.k_samples),
      EB_FIELD(double, "phase_diagram.t_z_min_mhz", phase_diagram.t_z_min_mhz),
      EB_FIELD(double, "phase_diagram.t_z_max_mhz", phase_diagram.t_z_max_mhz),
      EB_FIELD(int, "phase_diagram.t_z_points", phase_diagram.t_z_points),
      EB_FIELD(double, "phase_diagram.h_z_min_mhz", phase_diagram.h_z_min_mhz),
      EB_FIELD(double, "phase_diagram.h_z_max_mhz", phase_diagram.h_z_max_mhz),
      EB_FIELD(int, "phase_diagram.h_z_points", phase_diagram.h_z_points),
      EB_FIELD(bool, "phase_diagram.dynamical", phase_diagram.dynamical),
      EB_FIELD(int, "phase_diagram.dynamical_stride", phase_diagram.dynamical_stride),
      EB_FIELD(double, "phase_diagram.dynamical_duration_t0inv", phase_diagram.dynamical_duration_t0inv),
      EB_FIELD(int, "phase_diagram.dynamical_steps", phase_diagram.dynamical_steps),
      EB_FIELD(double, "phase_diagram.dynamical_min_gap_mhz", phase_diagram.dynamical_min_gap_mhz),
      EB_FIELD(double, "edge_modes.zero_threshold_mhz", edge_modes.zero_threshold_mhz),
      EB_FIELD(std::vector<std::string>, "protocol.order", protocol.order),
      EB_FIELD(std::vector<double>, "protocol.durations_us", protocol.durations_us),
      EB_FIELD(std::string, "protocol.ramp_shape", protocol.ramp_shape),
      EB_FIELD(std::string, "protocol.mode", protocol.mode),
      EB_FIELD(int, "protocol.steps_per_op", protocol.steps_per_op),
      EB_FIELD(double, "protocol.gap_floor_mhz", protocol.gap_floor_mhz),
      EB_FIELD(bool, "drives.cross_validation", drives.cross_validation),
      EB_FIELD(double, "drives.window_ns", drives.window_ns),
      EB_FIELD(int, "drives.steps_per_period", drives.steps_per_period),
      EB_FIELD(double, "drives.min_ratio", drives.min_ratio),
      EB_FIELD(std::vector<double>, "lindblad.gammas_khz", lindblad.gammas_khz),
      EB_FIELD(double, "lindblad.duration_us", lindblad.duration_us),
      EB_FIELD(double, "lindblad.dt_ns", lindblad.dt_ns),
      EB_FIELD(std::string, "lindblad.initial", lindblad.initial),
      EB_FIELD(std::string, "lindblad.hamiltonian", lindblad.hamiltonian),
      EB_FIELD(int, "lindblad.record_stride", lindblad.record_stride),
      EB_FIELD(std::string, "output.directory", output.directory),
      EB_FIELD(std::string, "output.format", output.format),
  };
  return fields;
}

#undef EB_FIELD

const Field* find_field(const std::string& path) {
  for (const auto& f : schema())
    if (f.path == path) return &f;
  return nullptr;
}

void set_key(RunConfig& cfg, const std::string& path, const json& value) {
  const Field* f = find_field(path);
  if (!f) throw ConfigError("unknown config key '" + path + "'");
  f->set(cfg, value);
  cfg.explicit_keys.insert(path);
}

void walk(RunConfig& cfg, const json& node, const std::string& prefix) {
  for (auto it = node.begin(); it != node.end(); ++it) {
    const std::string path = prefix.empty() ? it.key() : prefix + "." + it.key();
    if (it.value().is_object()) {
      if (find_field(path)) type_error(path, "a value, not an object");
      walk(cfg, it.value(), path);
    } else {
      set_key(cfg, path, it.value());
    }
  }
}

void require(bool ok, const std::string& msg) {
  if (!ok) throw ConfigError(msg);
}

}  // namespace

double RunConfig::energy_unit() const { return units::mhz_to_rad(t0_mhz); }

ChainParams RunConfig::chain_params() const {
  ChainParams p;
  p.t_z = model.t_z_mhz / t0_mhz;
  p.delta0 = model.delta0_mhz / t0_mhz;
  p.h_z = model.h_z_mhz / t0_mhz;
  p.phi = model.phi_rad;
  p.n_cells = model.n_cells;
  if (!model.dot.empty()) {
    static const std::map<std::string, Dot> dots{{"A", Dot::A}, {"B", Dot::B}, {"C", Dot::C}, {"D", Dot::D}};
    p = dot_params(dots.at(model.dot), p);
  }
  return p;
}

CircuitParams RunConfig::circuit_params() const {
  CircuitParams c;
  c.omega_r = units::mhz_to_rad(circuit.omega_r_mhz);
  c.omega_b = units::mhz_to_rad(circuit.omega_b_mhz);
  c.g_r = units::mhz_to_rad(circuit.g_r_mhz);
  c.g_b = units::mhz_to_rad(circuit.g_b_mhz);
  c.n_cells = model.n_cells;
  c.energy_unit = energy_unit();
  return c;
}

CompareOptions RunConfig::compare_options() const {
  CompareOptions o;
  o.mode = mode_from_string(protocol.mode);
  o.ramp = ramp_from_string(protocol.ramp_shape);
  o.steps_per_op = protocol.steps_per_op;
  o.tracking.gap_floor = protocol.gap_floor_mhz / t0_mhz;
  o.empty_orders = protocol.order.empty();
  return o;
}

LindbladConfig RunConfig::lindblad_config() const {
  LindbladConfig c;
  c.duration = lindblad.duration_us * 1e-6;
  c.dt = lindblad.dt_ns * 1e-9;
  c.record_stride = lindblad.record_stride;
  c.hamiltonian_mode = lindblad.hamiltonian == "full_drive" ? HamiltonianMode::full_drive : HamiltonianMode::effective;
  return c;
}

std::vector<double> RunConfig::gammas_rad() const {
  std::vector<double> out;
  for (double g : lindblad.gammas_khz) out.push_back(units::khz_to_rad(g));
  return out;
}

void RunConfig::validate() const {
  require(t0_mhz > 0.0, "t0_mhz must be positive");
  require(model.n_cells >= 2, "model.n_cells must be >= 2");
  if (!model.dot.empty()) {
    require(model.dot == "A" || model.dot == "B" || model.dot == "C" || model.dot == "D",
            "model.dot must be one of A, B, C, D");
    for (const char* k : {"model.t_z_mhz", "model.delta0_mhz", "model.h_z_mhz"})
      require(!explicit_keys.count(k), std::string("model.dot conflicts with ") + k);
  }
  require(bands.k_samples >= 64, "bands.k_samples must be >= 64 (empty or too coarse k grid)");
  const auto& pd = phase_diagram;
  require(pd.t_z_points >= 1 && pd.h_z_points >= 1, "phase_diagram grid needs at least one point per axis");
  require(pd.t_z_min_mhz <= pd.t_z_max_mhz && pd.h_z_min_mhz <= pd.h_z_max_mhz, "phase_diagram ranges are inverted");
  require(pd.dynamical_stride >= 1 && pd.dynamical_steps >= 1 && pd.dynamical_duration_t0inv > 0.0,
          "phase_diagram dynamical settings must be positive");
  require(edge_modes.zero_threshold_mhz > 0.0, "edge_modes.zero_threshold_mhz must be positive");
  const auto& o = protocol.order;
  require(o.empty() || (o.size() == 2 && ((o[0] == "O1" && o[1] == "O2") || (o[0] == "O2" && o[1] == "O1"))),
          "protocol.order must be [\"O1\",\"O2\"], [\"O2\",\"O1\"] or []");
  require(!protocol.durations_us.empty(), "protocol.durations_us must not be empty");
  for (double d : protocol.durations_us) require(d > 0.0, "protocol.durations_us must be positive");
  require(protocol.steps_per_op >= kMinStepsPerOp, "protocol.steps_per_op below minimum");
  try {
    (void)ramp_from_string(protocol.ramp_shape);
    (void)mode_from_string(protocol.mode);
  } catch (const ContractViolation& e) {
    throw ConfigError(e.what());
  }
  require(drives.window_ns > 0.0 && drives.window_ns <= 1000.0, "drives.window_ns must be in (0, 1000]");
  require(drives.steps_per_period >= 40, "drives.steps_per_period must be >= 40");
  require(drives.min_ratio > 0.0, "drives.min_ratio must be positive");
  require(!lindblad.gammas_khz.empty(), "lindblad.gammas_khz must not be empty");
  for (double g : lindblad.gammas_khz) require(g >= 0.0, "lindblad.gammas_khz must be >= 0");
  require(lindblad.duration_us > 0.0 && lindblad.dt_ns > 0.0, "lindblad duration and dt must be positive");
  require(lindblad.initial == "right" || lindblad.initial == "left" || lindblad.initial == "both",
          "lindblad.initial must be right, left or both");
  require(lindblad.hamiltonian == "effective" || lindblad.hamiltonian == "full_drive",
          "lindblad.hamiltonian must be effective or full_drive");
  require(lindblad.record_stride >= 1, "lindblad.record_stride must be >= 1");
  require(output.format == "csv" || output.format == "json", "output.format must be csv or json");
}

std::vector<std::string> config_keys() {
  std::vector<std::string> out;
  for (const auto& f : schema()) out.push_back(f.path);
  return out;
}

void apply_json(RunConfig& cfg, const json& doc) {
  if (!doc.is_object()) throw ConfigError("config document must be a JSON object");
  walk(cfg, doc, "");
}

void apply_override(RunConfig& cfg, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("--set expects key=value, got '" + assignment + "'");
  const std::string key = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  json value = json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;
  set_key(cfg, key, value);
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  json doc = json::parse(in, nullptr, false);
  if (doc.is_discarded()) throw ConfigError("config file '" + path + "' is not valid JSON");
  RunConfig cfg;
  apply_json(cfg, doc);
  return cfg;
}

json to_json(const RunConfig& cfg) {
  json out = json::object();
  for (const auto& f : schema()) out[json::json_pointer("/" + [&] {
                               std::string p = f.path;
                               for (auto& ch : p)
                                 if (ch == '.') ch = '/';
                               return p;
                             }())] = f.get(cfg);
  return out;
}

std::string canonical_text(const RunConfig& cfg) {
  json j = to_json(cfg);
  j["output"].erase("directory");  // where results go does not change what they are
  return j.dump();
}

std::string config_hash(const RunConfig& cfg) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : canonical_text(cfg)) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
  return buf;
}

}  // namespace edgebraid::cli
