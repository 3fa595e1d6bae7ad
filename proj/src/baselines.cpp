#include "geoinf/baselines.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "geoinf/error.hpp"

#ifndef GEOINF_DEFAULT_BASELINES
#define GEOINF_DEFAULT_BASELINES "data/baselines.txt"
#endif

namespace geoinf {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

const char* Baselines::default_path() noexcept { return GEOINF_DEFAULT_BASELINES; }

Baselines Baselines::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open baselines file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path);
}

Baselines Baselines::parse(const std::string& text, const std::string& origin) {
  Baselines b;
  b.origin_ = origin;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw SpecError(origin + ":" + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty()) throw SpecError(origin + ":" + std::to_string(lineno) + ": empty key");
    if (key == "version") {
      b.version_ = val;
      continue;
    }
    double v = 0.0;
    auto res = std::from_chars(val.data(), val.data() + val.size(), v);
    if (res.ec != std::errc() || res.ptr != val.data() + val.size() || !std::isfinite(v)) {
      throw SpecError(origin + ":" + std::to_string(lineno) + ": bad number '" + val + "'");
    }
    b.values_[key] = v;
  }
  return b;
}

std::optional<double> Baselines::find(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

double Baselines::get(const std::string& key) const {
  if (auto v = find(key)) return *v;
  throw DomainError("no baseline constant '" + key + "' in " + (origin_.empty() ? "<empty>" : origin_));
}

double Baselines::lookup(const std::string& name, const std::string& context) const {
  if (!context.empty()) {
    if (auto v = find(name + "." + context)) return *v;
  }
  return get(name);
}

}  // namespace geoinf
