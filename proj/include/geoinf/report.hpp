#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "geoinf/bounds.hpp"

namespace geoinf {

using Cell = std::variant<double, std::int64_t, std::string, bool>;

/// Rows with a fixed column order. CSV and JSON are two renderings of it.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row);
};

enum class Format { csv, json };

Format parse_format(const std::string& s);

/// Locale-independent, 10 significant digits. NaN and infinities raise DomainError.
std::string format_real(double v);

void write_csv(const Table& t, std::ostream& out);
/// Array of objects keyed by column name, in column order.
void write_json(const Table& t, std::ostream& out);
/// `path` "-" writes to stdout. An unwritable path raises std::runtime_error.
void emit(const Table& t, Format format, const std::string& path);

/// Standard columns for bound reports.
Table bound_table(const std::vector<BoundReport>& reports);

struct CheckOutcome {
  std::string name;
  bool pass;
};

struct RunManifest {
  std::string command;
  std::vector<std::string> argv;
  std::vector<std::pair<std::string, std::string>> config;
  std::string version;
  double wall_seconds = 0.0;
  std::vector<CheckOutcome> checks;

  bool all_pass() const;
};

/// Writes `<report path>.manifest.json`; nothing when the report went to stdout.
void write_manifest(const RunManifest& m, const std::string& report_path);
const char* artifact_version() noexcept;

}  // namespace geoinf
