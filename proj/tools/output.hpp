#pragma once

// Figure-ready tables and the per-run manifest. Every file is written to a
// temporary name and renamed into place.

#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace edgebraid::cli {

std::string format_number(double v);  // "%.9g", NA for non-finite

void write_atomic(const std::filesystem::path& path, const std::string& content);

class Table {
 public:
  using Cell = std::variant<double, long long, std::string>;

  explicit Table(std::vector<std::string> columns);
  void add_row(std::vector<Cell> row);
  const std::vector<std::string>& columns() const { return columns_; }
  std::size_t rows() const { return rows_.size(); }
  const Cell& at(std::size_t row, std::size_t col) const { return rows_[row][col]; }

  std::string to_csv() const;
  std::string to_json() const;  // array of row objects, same number formatting

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<Cell>> rows_;
};

class OutputDir {
 public:
  OutputDir(std::filesystem::path dir, std::string format);

  const std::filesystem::path& path() const { return dir_; }
  // Writes stem.csv or stem.json depending on the format.
  void write_table(const std::string& stem, const Table& t);
  void write_json(const std::string& name, const nlohmann::json& doc);
  const std::vector<std::string>& files() const { return files_; }

 private:
  void record(const std::string& name);
  std::filesystem::path dir_;
  std::string format_;
  std::vector<std::string> files_;
};

struct Manifest {
  std::string command;
  std::string config_hash;
  nlohmann::json config;
  std::vector<std::string> warnings;
  std::string status = "ok";
  double wall_clock_s = 0.0;
  double t0_hz = 0.0;
};

inline constexpr const char* kArtifactVersion = "1.0.0";

void write_manifest(const OutputDir& out, const Manifest& m);

}  // namespace edgebraid::cli
