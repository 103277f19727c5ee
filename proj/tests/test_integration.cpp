// End-to-end runs of the command-line tool against small configurations.

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

const std::string kTool = EDGEBRAID_TOOL;

fs::path fresh(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("edgebraid_it_" + name);
  fs::remove_all(p);
  return p;
}

int run(const std::string& args) {
  const std::string cmd = kTool + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::vector<std::string>> csv(const fs::path& p) {
  std::vector<std::vector<std::string>> rows;
  std::ifstream in(p);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> row(1);
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      const char ch = line[i];
      if (ch == '"' && quoted && i + 1 < line.size() && line[i + 1] == '"') {
        row.back() += '"';
        ++i;
      } else if (ch == '"') {
        quoted = !quoted;
      } else if (ch == ',' && !quoted) {
        row.emplace_back();
      } else {
        row.back() += ch;
      }
    }
    rows.push_back(row);
  }
  return rows;
}

nlohmann::json manifest(const fs::path& dir) { return nlohmann::json::parse(slurp(dir / "manifest.json")); }

}  // namespace

TEST_CASE("bands at dot A report the 3.4 t0 gap and are reproducible") {
  const auto a = fresh("bands_a"), b = fresh("bands_b");
  REQUIRE(run("bands --out " + a.string()) == 0);
  REQUIRE(run("bands --out " + b.string()) == 0);
  CHECK(slurp(a / "bands.csv") == slurp(b / "bands.csv"));
  CHECK(slurp(a / "bands_summary.csv") == slurp(b / "bands_summary.csv"));
  const auto rows = csv(a / "bands_summary.csv");
  REQUIRE(rows.size() == 2);
  CHECK(std::stod(rows[1][3]) == doctest::Approx(3.4).epsilon(1e-9));
  const auto m = manifest(a);
  CHECK(m["command"] == "bands");
  CHECK(m["config_hash"] == manifest(b)["config_hash"]);
  CHECK(m["files"].size() == 2);
  CHECK(m["t0_hz"] == 4e6);
}

TEST_CASE("gap closes at h_z = 2 t_z") {
  const auto d = fresh("bands_closed");
  REQUIRE(run("bands --out " + d.string() + " --set model.h_z_mhz=8") == 0);
  CHECK(std::abs(std::stod(csv(d / "bands_summary.csv")[1][3])) < 1e-9);
}

TEST_CASE("malformed input exits nonzero") {
  const auto d = fresh("bad");
  CHECK(run("bands --out " + d.string() + " --set bands.k_samples=0") != 0);
  CHECK(run("bands --out " + d.string() + " --set model.unknown=1") != 0);
  CHECK(run("bands --out " + d.string() + " --config /nonexistent.json") != 0);
  CHECK(run("no-such-command") != 0);
  CHECK(run("bands --format xml --out " + d.string()) != 0);
}

TEST_CASE("config file and EDGEBRAID_OUT") {
  const auto d = fresh("env");
  const auto cfg = fresh("cfg.json");
  std::ofstream(cfg) << R"({"model": {"dot": "D"}, "output": {"format": "json"}})";
  const std::string cmd = "EDGEBRAID_OUT=" + d.string() + " " + kTool + " edge-modes --config " + cfg.string() +
                          " >/dev/null 2>&1";
  REQUIRE(std::system(cmd.c_str()) == 0);
  const auto summary = nlohmann::json::parse(slurp(d / "edge_summary.json"));
  CHECK(summary[0]["dot"] == "D");
  CHECK(summary[0]["overlap_left"].get<double>() > 0.999);
  CHECK(manifest(d)["config"]["model"]["dot"] == "D");
  fs::remove(cfg);
}

TEST_CASE("phase diagram single point and boundary entries") {
  const auto d = fresh("pd");
  REQUIRE(run("phase-diagram --out " + d.string() +
              " --set phase_diagram.t_z_points=1 --set phase_diagram.h_z_points=1"
              " --set phase_diagram.t_z_min_mhz=4 --set phase_diagram.h_z_min_mhz=1.2") == 0);
  auto rows = csv(d / "phase_diagram.csv");
  REQUIRE(rows.size() == 2);
  CHECK(rows[1][2] == "1");
  const auto e = fresh("pd_grid");
  REQUIRE(run("phase-diagram --out " + e.string()) == 0);
  rows = csv(e / "phase_diagram.csv");
  CHECK(rows.size() == 41 * 41 + 1);
  int na = 0;
  for (const auto& r : rows) na += r[2] == "NA";
  CHECK(na > 0);
}

TEST_CASE("edge modes: trivial phase writes a result file and exits 0") {
  const auto d = fresh("trivial");
  REQUIRE(run("edge-modes --out " + d.string() + " --set model.h_z_mhz=12") == 0);
  CHECK(fs::exists(d / "no_zero_modes.json"));
  CHECK(manifest(d)["warnings"][0] == "no_zero_modes");
}

TEST_CASE("braid tracking: red ends right, blue ends left") {
  const auto d = fresh("braid");
  REQUIRE(run("braid --out " + d.string()) == 0);
  const auto rows = csv(d / "braid_summary.csv");
  REQUIRE(rows.size() == 2);
  CHECK(rows[0][2] == "red_edge");
  CHECK(rows[1][2] == "right");
  CHECK(rows[1][7] == "Psi_R,3");
  CHECK(rows[0][9] == "blue_edge");
  CHECK(rows[1][9] == "left");
  CHECK(csv(d / "density_red.csv").size() == 17);
}

TEST_CASE("drives: default gaps, collision warning") {
  const auto d = fresh("drives");
  REQUIRE(run("drives --out " + d.string()) == 0);
  const auto gaps = csv(d / "hopping_gaps.csv");
  CHECK(gaps[1][1] == "80");
  CHECK(gaps[4][1] == "480");
  const auto plan = nlohmann::json::parse(slurp(d / "drive_plan.json"));
  CHECK(plan["links"].size() == 15);
  const auto e = fresh("collide");
  REQUIRE(run("drives --out " + e.string() + " --set circuit.omega_b_mhz=6000") == 0);
  bool flagged = false;
  const auto m = manifest(e);
  for (const auto& w : m["warnings"]) flagged = flagged || w == "hopping_gap_collision";
  CHECK(flagged);
}

TEST_CASE("lindblad and chiral center on a short chain") {
  const auto d = fresh("lindblad");
  REQUIRE(run("lindblad --threads 2 --out " + d.string() +
              " --set model.dot=D --set model.n_cells=6 --set lindblad.gammas_khz=[0,100]"
              " --set lindblad.duration_us=0.5 --set lindblad.record_stride=100") == 0);
  const auto sweep = csv(d / "gamma_sweep.csv");
  REQUIRE(sweep.size() == 3);
  CHECK(std::stod(sweep[1][3]) > std::stod(sweep[2][3]));
  const auto series = csv(d / "series_right_gamma_0khz.csv");
  CHECK(series[0].front() == "time_us");
  CHECK(series[0].size() == 3 + 6 + 1);
  CHECK(series.size() == 12);

  const auto c = fresh("cc");
  REQUIRE(run("chiral-center --out " + c.string() +
              " --set model.dot=D --set model.n_cells=6 --set lindblad.gammas_khz=[0]"
              " --set lindblad.duration_us=0.5") == 0);
  CHECK(std::stod(csv(c / "chiral_center.csv")[1][2]) == doctest::Approx(0.5).epsilon(0.1));
}
