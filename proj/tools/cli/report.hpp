#pragma once
// Reports: one JSON summary (schema "v1") plus CSV tables with a header row
// and 17 significant digits per real.
#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

namespace cli {

using Cell = std::variant<std::int64_t, double, std::string>;

struct Table {
  std::string name;  // written as <name>.csv
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row) { rows.push_back(std::move(row)); }
};

struct Report {
  std::string json_name = "summary.json";
  nlohmann::ordered_json summary = nlohmann::ordered_json::object();
  std::vector<Table> tables;
};

inline constexpr const char* kSchemaVersion = "v1";

std::string csv_text(const Table& t);
/// Summary with "schema" first and an index of the CSV tables.
std::string json_text(const Report& r);
/// Writes everything under `dir`, creating it. Throws CliError (exit 1) when
/// the directory or a file cannot be written.
void emit_report(const Report& r, const std::filesystem::path& dir);

/// Parses CSV produced by csv_text (header included).
std::vector<std::vector<std::string>> parse_csv(const std::string& text);

}  // namespace cli
