#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "edgebraid/error.hpp"
#include "output.hpp"
#include "run_config.hpp"

using namespace edgebraid;
using namespace edgebraid::cli;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("edgebraid_test_cli_" + name);
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST_CASE("defaults map to the canonical chain in t0 units") {
  RunConfig cfg;
  cfg.validate();
  const ChainParams p = cfg.chain_params();
  CHECK(p == canonical_params());
  CHECK(cfg.energy_unit() == doctest::Approx(units::kT0));
  const CircuitParams c = cfg.circuit_params();
  CHECK(c.omega_r == doctest::Approx(units::ghz_to_rad(6.0)));
  CHECK(c.g_b == doctest::Approx(units::mhz_to_rad(120.0)));
  CHECK(cfg.gammas_rad()[1] == doctest::Approx(units::khz_to_rad(5.0)));
  const auto lc = cfg.lindblad_config();
  CHECK(lc.dt == doctest::Approx(0.5e-9));
  CHECK(lc.duration == doctest::Approx(1.5e-6));
  CHECK(cfg.compare_options().tracking.gap_floor == doctest::Approx(1.0));
}

TEST_CASE("json document with nested sections") {
  RunConfig cfg;
  apply_json(cfg, nlohmann::json::parse(R"({"model": {"h_z_mhz": 0.0, "n_cells": 12},
                                            "lindblad": {"gammas_khz": [0, 50], "initial": "both"}})"));
  cfg.validate();
  CHECK(cfg.chain_params().h_z == 0.0);
  CHECK(cfg.chain_params().n_cells == 12);
  CHECK(cfg.lindblad.gammas_khz.size() == 2);
  CHECK(cfg.explicit_keys.count("model.h_z_mhz") == 1);
}

TEST_CASE("unknown keys and wrong types are rejected") {
  RunConfig cfg;
  CHECK_THROWS_AS(apply_json(cfg, nlohmann::json::parse(R"({"model": {"tz": 1}})")), ConfigError);
  CHECK_THROWS_AS(apply_json(cfg, nlohmann::json::parse(R"({"extra": 1})")), ConfigError);
  CHECK_THROWS_AS(apply_json(cfg, nlohmann::json::parse(R"({"model": {"n_cells": 2.5}})")), ConfigError);
  CHECK_THROWS_AS(apply_json(cfg, nlohmann::json::parse(R"({"model": {"dot": 1}})")), ConfigError);
  CHECK_THROWS_AS(apply_json(cfg, nlohmann::json::parse(R"({"t0_mhz": {"x": 1}})")), ConfigError);
  CHECK_THROWS_AS(apply_json(cfg, nlohmann::json::parse(R"([1, 2])")), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("dotted overrides") {
  RunConfig cfg;
  apply_override(cfg, "model.dot=D");
  apply_override(cfg, "lindblad.gammas_khz=[1,2,3]");
  apply_override(cfg, "protocol.mode=unitary");
  apply_override(cfg, "phase_diagram.dynamical=true");
  cfg.validate();
  CHECK(cfg.chain_params() == dot_params(Dot::D));
  CHECK(cfg.lindblad.gammas_khz == std::vector<double>{1, 2, 3});
  CHECK(cfg.compare_options().mode == EvolutionMode::unitary);
  CHECK(cfg.phase_diagram.dynamical);
  CHECK_THROWS_AS(apply_override(cfg, "nonsense"), ConfigError);
  CHECK_THROWS_AS(apply_override(cfg, "model.nope=1"), ConfigError);
  CHECK_THROWS_AS(apply_override(cfg, "model.n_cells=abc"), ConfigError);
}

TEST_CASE("validation catches inconsistent settings") {
  auto bad = [](const std::string& assignment) {
    RunConfig cfg;
    apply_override(cfg, assignment);
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
  };
  bad("bands.k_samples=0");
  bad("model.dot=E");
  bad("protocol.order=[\"O1\"]");
  bad("protocol.ramp_shape=square");
  bad("protocol.durations_us=[]");
  bad("lindblad.gammas_khz=[-1]");
  bad("lindblad.initial=middle");
  bad("output.format=xml");
  bad("phase_diagram.t_z_points=0");
  RunConfig conflict;
  apply_override(conflict, "model.dot=A");
  apply_override(conflict, "model.h_z_mhz=0.5");
  CHECK_THROWS_AS(conflict.validate(), ConfigError);
}

TEST_CASE("config hash is stable and sensitive") {
  RunConfig a, b;
  CHECK(config_hash(a) == config_hash(b));
  CHECK(config_hash(a).size() == 16);
  b.output.directory = "/somewhere/else";
  CHECK(config_hash(a) == config_hash(b));
  b.model.h_z_mhz = 1.3;
  CHECK(config_hash(a) != config_hash(b));
  // round trip through the canonical document
  RunConfig c;
  apply_json(c, to_json(b));
  CHECK(config_hash(c) == config_hash(b));
  const auto doc = to_json(a);
  for (auto key : config_keys()) {
    std::replace(key.begin(), key.end(), '.', '/');
    CHECK(doc.contains(nlohmann::json::json_pointer("/" + key)));
  }
}

TEST_CASE("table formatting") {
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(1.0 / 3.0) == "0.333333333");
  CHECK(format_number(std::nan("")) == "NA");
  Table t({"a", "b", "label"});
  t.add_row({1.5, 2LL, std::string("Psi_L,0")});
  t.add_row({std::numeric_limits<double>::infinity(), 3LL, std::string("NA")});
  CHECK(t.to_csv() == "a,b,label\n1.5,2,\"Psi_L,0\"\nNA,3,NA\n");
  const auto j = nlohmann::json::parse(t.to_json());
  CHECK(j.size() == 2);
  CHECK(j[0]["label"] == "Psi_L,0");
  CHECK(j[1]["a"].is_null());
  CHECK(j[1]["label"].is_null());
  CHECK_THROWS_AS(t.add_row({1.0}), ContractViolation);
}

TEST_CASE("output directory writes atomically and records files") {
  const fs::path dir = scratch("out");
  OutputDir out(dir, "json");
  Table t({"x"});
  t.add_row({1.0});
  out.write_table("tab", t);
  out.write_table("tab", t);
  out.write_json("doc.json", nlohmann::json{{"k", 1}});
  CHECK(out.files() == std::vector<std::string>{"tab.json", "doc.json"});
  Manifest m;
  m.command = "bands";
  m.config_hash = "0123";
  write_manifest(out, m);
  const auto manifest = nlohmann::json::parse(slurp(dir / "manifest.json"));
  CHECK(manifest["command"] == "bands");
  CHECK(manifest["files"].size() == 2);
  for (const auto& e : fs::directory_iterator(dir)) CHECK(e.path().string().find(".tmp.") == std::string::npos);
  fs::remove_all(dir);
}
