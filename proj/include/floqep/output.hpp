#pragma once

#include <json.hpp>

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace floqep {

inline constexpr int schema_version = 1;

// %.17g, the only float format used in CSV output.
std::string format_double(double value);

std::string sha256_hex(std::string_view data);

// First 12 hex digits of the SHA-256 of the effective configuration text.
std::string config_hash(std::string_view effective_config_text);

// <dir>/<command>-<hash><suffix>
std::filesystem::path artifact_path(const std::filesystem::path &dir, std::string_view command, std::string_view hash,
                                    std::string_view suffix);

// Writes to a temporary sibling and renames, so a reader never sees half a file.
void write_file(const std::filesystem::path &path, std::string_view contents);

void write_json(const std::filesystem::path &path, const nlohmann::json &document);

class CsvTable {
public:
  explicit CsvTable(std::vector<std::string> header);

  CsvTable &add(std::vector<std::string> cells);
  CsvTable &add(const std::vector<double> &values);

  std::size_t rows() const { return rows_.size(); }
  std::string str() const;

private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

} // namespace floqep
