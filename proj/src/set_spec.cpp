#include "geoinf/set_spec.hpp"

#include <charconv>
#include <cmath>
#include <map>

#include "geoinf/error.hpp"
#include "geoinf/rotation.hpp"

namespace geoinf {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

struct Params {
  std::map<std::string, std::string, std::less<>> kv;
  std::optional<std::string> base;

  bool has(std::string_view k) const { return kv.find(k) != kv.end(); }
  const std::string& at(std::string_view kind, std::string_view k) const {
    auto it = kv.find(k);
    if (it == kv.end()) throw SpecError(std::string(kind) + ": missing parameter '" + std::string(k) + "'");
    return it->second;
  }
};

Params split_params(std::string_view kind, std::string_view body, std::initializer_list<std::string_view> allowed) {
  Params p;
  while (!body.empty()) {
    body = trim(body);
    if (body.substr(0, 5) == "base=") {
      p.base = std::string(body.substr(5));
      break;
    }
    const auto semi = body.find(';');
    const std::string_view item = trim(body.substr(0, semi));
    body = semi == std::string_view::npos ? std::string_view{} : body.substr(semi + 1);
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) throw SpecError(std::string(kind) + ": expected key=value, got '" + std::string(item) + "'");
    const std::string key(trim(item.substr(0, eq)));
    bool ok = false;
    for (auto a : allowed) ok = ok || a == key;
    if (!ok) throw SpecError(std::string(kind) + ": unknown parameter '" + key + "'");
    if (p.kv.count(key)) throw SpecError(std::string(kind) + ": duplicate parameter '" + key + "'");
    p.kv.emplace(key, std::string(trim(item.substr(eq + 1))));
  }
  return p;
}

std::size_t parse_count(std::string_view text) {
  text = trim(text);
  std::size_t v = 0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size() || v == 0) {
    throw SpecError("expected a positive integer, got '" + std::string(text) + "'");
  }
  return v;
}

std::uint64_t parse_u64(std::string_view text) {
  text = trim(text);
  std::uint64_t v = 0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw SpecError("expected an unsigned integer, got '" + std::string(text) + "'");
  }
  return v;
}

std::size_t need_n(std::string_view kind, std::optional<std::size_t> n) {
  if (!n) throw SpecError(std::string(kind) + ": dimension unknown; give n or --n");
  return *n;
}

std::vector<double> broadcast(std::string_view kind, std::vector<double> v, std::optional<std::size_t> n) {
  if (v.size() == 1 && n && *n > 1) return std::vector<double>(*n, v[0]);
  if (n && v.size() != *n) {
    throw SpecError(std::string(kind) + ": vector has " + std::to_string(v.size()) + " entries, expected " +
                    std::to_string(*n));
  }
  return v;
}

}  // namespace

double parse_real(std::string_view text) {
  text = trim(text);
  if (text == "inf" || text == "+inf") return kInf;
  if (text == "-inf") return -kInf;
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double v = 0.0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw SpecError("expected a number, got '" + std::string(text) + "'");
  }
  return v;
}

std::vector<double> parse_real_list(std::string_view text) {
  std::vector<double> out;
  while (true) {
    const auto comma = text.find(',');
    const double v = parse_real(text.substr(0, comma));
    if (!std::isfinite(v)) throw SpecError("list entries must be finite");
    out.push_back(v);
    if (comma == std::string_view::npos) break;
    text = text.substr(comma + 1);
  }
  return out;
}

SetDescriptor parse_set(std::string_view spec, std::optional<std::size_t> default_n) {
  spec = trim(spec);
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos) throw SpecError("set spec needs 'kind:params', got '" + std::string(spec) + "'");
  const std::string_view kind = trim(spec.substr(0, colon));
  const std::string_view body = spec.substr(colon + 1);

  try {
    if (kind == "halfspace") {
      const Params p = split_params(kind, body, {"u", "b"});
      auto u = broadcast(kind, parse_real_list(p.at(kind, "u")), default_n);
      const double b = p.has("b") ? parse_real(p.at(kind, "b")) : 0.0;
      return SetDescriptor::halfspace(std::move(u), b);
    }
    if (kind == "box") {
      const Params p = split_params(kind, body, {"a"});
      return SetDescriptor::box_lower(broadcast(kind, parse_real_list(p.at(kind, "a")), default_n));
    }
    if (kind == "ball") {
      const Params p = split_params(kind, body, {"c", "R"});
      std::vector<double> c = p.has("c") ? broadcast(kind, parse_real_list(p.at(kind, "c")), default_n)
                                         : std::vector<double>(need_n(kind, default_n), 0.0);
      return SetDescriptor::l2_ball(std::move(c), parse_real(p.at(kind, "R")));
    }
    if (kind == "maxthr" || kind == "sumthr") {
      const Params p = split_params(kind, body, {"K", "n"});
      const std::size_t n = p.has("n") ? parse_count(p.at(kind, "n")) : need_n(kind, default_n);
      if (default_n && n != *default_n) throw SpecError(std::string(kind) + ": n disagrees with --n");
      const double k = parse_real(p.at(kind, "K"));
      return kind == "maxthr" ? SetDescriptor::max_threshold(n, k) : SetDescriptor::sum_threshold(n, k);
    }
    if (kind == "rot") {
      const Params p = split_params(kind, body, {"seed"});
      if (!p.base) throw SpecError("rot: missing base=<set> (must be the last parameter)");
      const SetDescriptor base = parse_set(*p.base, default_n);
      return rotate_set(base, haar_sample(base.dim(), parse_u64(p.at(kind, "seed"))).m);
    }
    if (kind == "compl") {
      const Params p = split_params(kind, body, {});
      if (!p.base) throw SpecError("compl: missing base=<set> (must be the last parameter)");
      return SetDescriptor::complement(parse_set(*p.base, default_n));
    }
  } catch (const DomainError& e) {
    throw SpecError(std::string(kind) + ": " + e.what());
  }
  throw SpecError("unknown set kind '" + std::string(kind) + "'");
}

Measure1D parse_measure(std::string_view spec) {
  spec = trim(spec);
  const auto colon = spec.find(':');
  const std::string_view kind = trim(spec.substr(0, colon));
  const std::string_view body = colon == std::string_view::npos ? std::string_view{} : spec.substr(colon + 1);
  try {
    if (kind == "gaussian") {
      const Params p = split_params(kind, body, {"mean", "var"});
      return Measure1D::gaussian(p.has("mean") ? parse_real(p.at(kind, "mean")) : 0.0,
                                 p.has("var") ? parse_real(p.at(kind, "var")) : 1.0);
    }
    if (kind == "boltzmann") {
      const Params p = split_params(kind, body, {"rho"});
      return Measure1D::boltzmann(parse_real(p.at(kind, "rho")));
    }
    if (kind == "uniform") {
      split_params(kind, body, {});
      return Measure1D::uniform01();
    }
  } catch (const DomainError& e) {
    throw SpecError(std::string(kind) + ": " + e.what());
  }
  throw SpecError("unknown measure '" + std::string(spec) + "'");
}

IntervalUnion parse_interval_union(std::string_view spec) {
  spec = trim(spec);
  if (spec == "empty" || spec.empty()) return IntervalUnion::empty();
  std::vector<Interval> parts;
  while (!spec.empty()) {
    const auto semi = spec.find(';');
    std::string_view piece = trim(spec.substr(0, semi));
    spec = semi == std::string_view::npos ? std::string_view{} : spec.substr(semi + 1);
    if (piece.size() < 5) throw SpecError("bad interval '" + std::string(piece) + "'");
    const char open = piece.front();
    const char close = piece.back();
    if ((open != '[' && open != '(') || (close != ']' && close != ')')) {
      throw SpecError("interval must be bracketed: '" + std::string(piece) + "'");
    }
    const std::string_view inner = piece.substr(1, piece.size() - 2);
    const auto comma = inner.find(',');
    if (comma == std::string_view::npos) throw SpecError("interval needs two endpoints: '" + std::string(piece) + "'");
    const double lo = parse_real(inner.substr(0, comma));
    const double hi = parse_real(inner.substr(comma + 1));
    if (!(lo <= hi)) throw SpecError("interval endpoints out of order: '" + std::string(piece) + "'");
    parts.push_back({lo, hi, open == '[' && std::isfinite(lo), close == ']' && std::isfinite(hi)});
  }
  return IntervalUnion(std::move(parts));
}

}  // namespace geoinf
