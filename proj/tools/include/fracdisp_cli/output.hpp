#pragma once

#include <map>
#include <string>
#include <vector>

#include "json.hpp"

namespace fracdisp::cli {

/// Fixed 17-significant-digit rendering used in every CSV body.
std::string format_number(double x);

/// Comma-separated table with a header row and LF line endings.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);
  /// Each row must have one cell per header column.
  void add_row(std::vector<std::string> cells);
  void add_numbers(const std::vector<double>& values);
  std::string text() const;
  std::size_t rows() const { return rows_.size(); }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

/// Lowercase hex SHA-256 of a byte string.
std::string sha256_hex(const std::string& content);

/// Output files collected in memory and written together with the manifest.
class OutputSet {
 public:
  void add(const std::string& name, std::string content);
  void add_json(const std::string& name, const nlohmann::json& value);
  const std::map<std::string, std::string>& files() const { return files_; }

  /// Manifest listing every file with its size and hash.
  nlohmann::json manifest(const std::map<std::string, std::string>& config, double wall_seconds,
                          const std::string& subcommand) const;

  /// Creates `dir` and writes all files plus manifest.json.
  void write(const std::string& dir, const std::map<std::string, std::string>& config,
             double wall_seconds, const std::string& subcommand) const;

 private:
  std::map<std::string, std::string> files_;
};

inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace fracdisp::cli
