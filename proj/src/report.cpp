#include "geoinf/report.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <stdexcept>

#include <json.hpp>

#include "geoinf/error.hpp"

#ifndef GEOINF_VERSION
#define GEOINF_VERSION "0.0.0"
#endif

namespace geoinf {
namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + '"';
}

std::string render(const Cell& c) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>) return format_real(v);
        else if constexpr (std::is_same_v<T, std::int64_t>) return std::to_string(v);
        else if constexpr (std::is_same_v<T, bool>) return v ? "true" : "false";
        else return v;
      },
      c);
}

nlohmann::ordered_json to_json(const Cell& c) {
  return std::visit(
      [](const auto& v) -> nlohmann::ordered_json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>) {
          // Same rounding as the CSV rendering.
          const std::string s = format_real(v);
          double r = 0.0;
          std::from_chars(s.data(), s.data() + s.size(), r);
          return r;
        } else {
          return v;
        }
      },
      c);
}

std::string direction_name(BoundDirection d) { return d == BoundDirection::lower ? "lower" : "upper"; }

}  // namespace

const char* artifact_version() noexcept { return GEOINF_VERSION; }

void Table::add(std::vector<Cell> row) {
  if (row.size() != columns.size()) throw std::logic_error("Table::add: row width does not match columns");
  rows.push_back(std::move(row));
}

Format parse_format(const std::string& s) {
  if (s == "csv") return Format::csv;
  if (s == "json") return Format::json;
  throw SpecError("unknown format '" + s + "' (csv or json)");
}

std::string format_real(double v) {
  if (!std::isfinite(v)) throw DomainError("refusing to emit a non-finite value");
  if (v == 0.0) return "0";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 10);
  return {buf, res.ptr};
}

void write_csv(const Table& t, std::ostream& out) {
  for (std::size_t c = 0; c < t.columns.size(); ++c) out << (c ? "," : "") << csv_field(t.columns[c]);
  out << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << csv_field(render(row[c]));
    out << '\n';
  }
}

void write_json(const Table& t, std::ostream& out) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& row : t.rows) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t c = 0; c < row.size(); ++c) obj[t.columns[c]] = to_json(row[c]);
    arr.push_back(std::move(obj));
  }
  out << arr.dump(2) << '\n';
}

void emit(const Table& t, Format format, const std::string& path) {
  auto write = [&](std::ostream& os) {
    if (format == Format::csv) write_csv(t, os); else write_json(t, os);
  };
  if (path == "-") {
    write(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  write(f);
  f.flush();
  if (!f) throw std::runtime_error("write failed for " + path);
}

Table bound_table(const std::vector<BoundReport>& reports) {
  Table t;
  t.columns = {"name", "lhs", "rhs_at_c1", "implied_constant", "baseline_constant", "direction",
               "pass", "precondition_ok", "n", "regime", "t", "seed", "note"};
  for (const auto& r : reports) {
    t.add({r.name, r.lhs, r.rhs_at_c1, r.implied_constant, r.baseline_constant, direction_name(r.direction), r.pass,
           r.precondition_ok, static_cast<std::int64_t>(r.context.n), r.context.regime, r.context.t,
           std::to_string(r.context.seed), r.note});
  }
  return t;
}

bool RunManifest::all_pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

void write_manifest(const RunManifest& m, const std::string& report_path) {
  if (report_path == "-") return;
  nlohmann::ordered_json j;
  j["command"] = m.command;
  j["argv"] = m.argv;
  nlohmann::ordered_json cfg = nlohmann::ordered_json::object();
  for (const auto& [k, v] : m.config) cfg[k] = v;
  j["config"] = cfg;
  j["version"] = m.version;
  j["wall_seconds"] = m.wall_seconds;
  nlohmann::ordered_json checks = nlohmann::ordered_json::array();
  for (const auto& c : m.checks) checks.push_back({{"name", c.name}, {"pass", c.pass}});
  j["checks"] = checks;
  j["all_pass"] = m.all_pass();
  const std::string path = report_path + ".manifest.json";
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << j.dump(2) << '\n';
  if (!f) throw std::runtime_error("write failed for " + path);
}

}  // namespace geoinf
