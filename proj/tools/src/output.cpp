#include "fracdisp_cli/output.hpp"

#include <openssl/evp.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "fracdisp/errors.hpp"

namespace fracdisp::cli {

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {
  require(!header_.empty(), "csv: empty header");
}

void CsvTable::add_row(std::vector<std::string> cells) {
  require(cells.size() == header_.size(), "csv: row width does not match header");
  rows_.push_back(std::move(cells));
}

void CsvTable::add_numbers(const std::vector<double>& values) {
  std::vector<std::string> cells;
  cells.reserve(values.size());
  for (double x : values) cells.push_back(format_number(x));
  add_row(std::move(cells));
}

std::string CsvTable::text() const {
  auto line = [](const std::vector<std::string>& cells) {
    std::string s;
    for (std::size_t k = 0; k < cells.size(); ++k) {
      if (k) s += ',';
      s += cells[k];
    }
    return s + '\n';
  };
  std::string out = line(header_);
  for (const auto& r : rows_) out += line(r);
  return out;
}

std::string sha256_hex(const std::string& content) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(content.data(), content.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("sha256 failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int k = 0; k < len; ++k) {
    out += hex[digest[k] >> 4];
    out += hex[digest[k] & 15];
  }
  return out;
}

void OutputSet::add(const std::string& name, std::string content) {
  require(name != "manifest.json", "output name reserved: manifest.json");
  files_[name] = std::move(content);
}

void OutputSet::add_json(const std::string& name, const nlohmann::json& value) {
  add(name, value.dump(2) + "\n");
}

nlohmann::json OutputSet::manifest(const std::map<std::string, std::string>& config,
                                   double wall_seconds, const std::string& subcommand) const {
  nlohmann::json m;
  m["tool"] = "fracdisp";
  m["version"] = kToolVersion;
  m["subcommand"] = subcommand;
  m["wall_time_seconds"] = wall_seconds;
  m["config"] = config;
  m["files"] = nlohmann::json::array();
  for (const auto& [name, content] : files_)
    m["files"].push_back({{"name", name}, {"bytes", content.size()}, {"sha256", sha256_hex(content)}});
  return m;
}

void OutputSet::write(const std::string& dir, const std::map<std::string, std::string>& config,
                      double wall_seconds, const std::string& subcommand) const {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  auto put = [&](const std::string& name, const std::string& content) {
    std::ofstream f(fs::path(dir) / name, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + (fs::path(dir) / name).string());
    f << content;
  };
  for (const auto& [name, content] : files_) put(name, content);
  put("manifest.json", manifest(config, wall_seconds, subcommand).dump(2) + "\n");
}

}  // namespace fracdisp::cli
