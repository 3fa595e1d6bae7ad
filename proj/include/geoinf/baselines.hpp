#pragma once

#include <map>
#include <optional>
#include <string>

namespace geoinf {

/// Committed regression constants, one `key = value` per line; `#` starts a
/// comment. Keys look like `kkl.rho2` or `power.c`.
class Baselines {
 public:
  Baselines() = default;

  static Baselines load(const std::string& path);
  static Baselines parse(const std::string& text, const std::string& origin = "<string>");
  /// Path compiled in at build time (data/baselines.txt of the source tree).
  static const char* default_path() noexcept;

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  /// Throws DomainError when the key is missing.
  double get(const std::string& key) const;
  /// `name.context` if present, else `name`; throws DomainError if neither is.
  double lookup(const std::string& name, const std::string& context) const;
  std::optional<double> find(const std::string& key) const;
  void set(const std::string& key, double value) { values_[key] = value; }

  const std::string& origin() const noexcept { return origin_; }
  const std::string& version() const noexcept { return version_; }
  const std::map<std::string, double>& values() const noexcept { return values_; }

 private:
  std::map<std::string, double> values_;
  std::string origin_;
  std::string version_;
};

}  // namespace geoinf
