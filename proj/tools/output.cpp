#include "output.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "edgebraid/error.hpp"

namespace edgebraid::cli {

namespace fs = std::filesystem;

std::string format_number(double v) {
  if (!std::isfinite(v)) return "NA";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

void write_atomic(const fs::path& path, const std::string& content) {
  fs::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw Error("write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp);
    throw Error("cannot move " + tmp.string() + " into place: " + ec.message());
  }
}

Table::Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != columns_.size()) throw ContractViolation("Table::add_row: column count mismatch");
  rows_.push_back(std::move(row));
}

namespace {

std::string cell_text(const Table::Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return format_number(*d);
  if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
  const auto& s = std::get<std::string>(c);
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return q + "\"";
}

std::string cell_json(const Table::Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return std::isfinite(*d) ? format_number(*d) : "null";
  if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
  const auto& s = std::get<std::string>(c);
  return s == "NA" ? "null" : nlohmann::json(s).dump();
}

}  // namespace

std::string Table::to_csv() const {
  std::ostringstream out;
  for (std::size_t c = 0; c < columns_.size(); ++c) out << (c ? "," : "") << columns_[c];
  out << '\n';
  for (const auto& row : rows_) {
    for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << cell_text(row[c]);
    out << '\n';
  }
  return out.str();
}

std::string Table::to_json() const {
  std::ostringstream out;
  out << "[\n";
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    out << "  {";
    for (std::size_t c = 0; c < columns_.size(); ++c)
      out << (c ? ", " : "") << nlohmann::json(columns_[c]).dump() << ": " << cell_json(rows_[r][c]);
    out << (r + 1 < rows_.size() ? "},\n" : "}\n");
  }
  out << "]\n";
  return out.str();
}

OutputDir::OutputDir(fs::path dir, std::string format) : dir_(std::move(dir)), format_(std::move(format)) {
  std::error_code ec;
  fs::create_directories(dir_, ec);
  if (ec) throw Error("cannot create output directory " + dir_.string() + ": " + ec.message());
}

void OutputDir::record(const std::string& name) {
  for (const auto& f : files_)
    if (f == name) return;
  files_.push_back(name);
}

void OutputDir::write_table(const std::string& stem, const Table& t) {
  const std::string name = stem + (format_ == "json" ? ".json" : ".csv");
  write_atomic(dir_ / name, format_ == "json" ? t.to_json() : t.to_csv());
  record(name);
}

void OutputDir::write_json(const std::string& name, const nlohmann::json& doc) {
  write_atomic(dir_ / name, doc.dump(2) + "\n");
  record(name);
}

void write_manifest(const OutputDir& out, const Manifest& m) {
  nlohmann::json j;
  j["command"] = m.command;
  j["config_hash"] = m.config_hash;
  j["artifact_version"] = kArtifactVersion;
  j["status"] = m.status;
  j["files"] = out.files();
  j["warnings"] = m.warnings;
  j["wall_clock_s"] = m.wall_clock_s;
  j["t0_hz"] = m.t0_hz;
  j["t0_convention"] = "t0 = 2*pi*t0_hz rad/s; model energies in units of t0";
  j["config"] = m.config;
  write_atomic(out.path() / "manifest.json", j.dump(2) + "\n");
}

}  // namespace edgebraid::cli
