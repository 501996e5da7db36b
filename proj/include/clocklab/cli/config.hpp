#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "clocklab/core/error.hpp"
#include "clocklab/core/units.hpp"

namespace clocklab::cli {

enum class Kind {
  gedanken_box,
  gedanken_efield,
  classical_trajectory,
  classical_brackets,
  quantum_moments,
  quantum_bound_sweep,
  quantum_optimize,
};

inline constexpr std::pair<Kind, std::string_view> kKindNames[] = {
    {Kind::gedanken_box, "GEDANKEN_BOX"},
    {Kind::gedanken_efield, "GEDANKEN_EFIELD"},
    {Kind::classical_trajectory, "CLASSICAL_TRAJECTORY"},
    {Kind::classical_brackets, "CLASSICAL_BRACKETS"},
    {Kind::quantum_moments, "QUANTUM_MOMENTS"},
    {Kind::quantum_bound_sweep, "QUANTUM_BOUND_SWEEP"},
    {Kind::quantum_optimize, "QUANTUM_OPTIMIZE"},
};

constexpr std::string_view to_string(Kind k) {
  for (const auto& [kind, name] : kKindNames)
    if (kind == k) return name;
  return "UNKNOWN";
}

inline std::optional<Kind> parse_kind(std::string_view s) {
  for (const auto& [kind, name] : kKindNames)
    if (name == s) return kind;
  return std::nullopt;
}

/// Thrown for every malformed or invalid scenario; carries all violations found.
class ConfigError : public Error {
 public:
  explicit ConfigError(std::vector<std::string> violations)
      : Error(Errc::configuration, join(violations)), violations_(std::move(violations)) {}

  const std::vector<std::string>& violations() const { return violations_; }

 private:
  static std::string join(const std::vector<std::string>& v) {
    std::string out;
    for (const auto& s : v) out += (out.empty() ? "" : "; ") + s;
    return out;
  }
  std::vector<std::string> violations_;
};

// ---------------------------------------------------------------------------
// Unit tags

/// Physical dimensions a config value may carry. The first eight mirror
/// clocklab::Dimension; the rest only exist in SI input.
enum class TagDim {
  dimensionless,
  mass,
  time,
  energy,
  length,
  momentum,
  velocity,
  acceleration,
  stiffness,
  efield,
  charge,
};

constexpr std::string_view to_string(TagDim d) {
  constexpr std::string_view names[] = {"dimensionless", "mass",         "time",
                                        "energy",        "length",       "momentum",
                                        "velocity",      "acceleration", "stiffness",
                                        "electric field", "charge"};
  return names[static_cast<int>(d)];
}

inline std::optional<Dimension> core_dimension(TagDim d) {
  if (static_cast<int>(d) > static_cast<int>(TagDim::acceleration)) return std::nullopt;
  return static_cast<Dimension>(static_cast<int>(d));
}

struct UnitTag {
  std::string_view tag;
  TagDim dim;
  double si_factor;  // multiplier to the coherent SI unit
};

inline constexpr double kElectronVoltSI = 1.602176634e-19;

inline constexpr UnitTag kUnitTags[] = {
    {"1", TagDim::dimensionless, 1.0},
    {"m", TagDim::length, 1.0},
    {"km", TagDim::length, 1e3},
    {"cm", TagDim::length, 1e-2},
    {"mm", TagDim::length, 1e-3},
    {"um", TagDim::length, 1e-6},
    {"nm", TagDim::length, 1e-9},
    {"s", TagDim::time, 1.0},
    {"ms", TagDim::time, 1e-3},
    {"us", TagDim::time, 1e-6},
    {"ns", TagDim::time, 1e-9},
    {"kg", TagDim::mass, 1.0},
    {"g", TagDim::mass, 1e-3},
    {"J", TagDim::energy, 1.0},
    {"eV", TagDim::energy, kElectronVoltSI},
    {"m/s", TagDim::velocity, 1.0},
    {"m/s^2", TagDim::acceleration, 1.0},
    {"kg*m/s", TagDim::momentum, 1.0},
    {"N*s", TagDim::momentum, 1.0},
    {"N/m", TagDim::stiffness, 1.0},
    {"V/m", TagDim::efield, 1.0},
    {"N/C", TagDim::efield, 1.0},
    {"C", TagDim::charge, 1.0},
};

// ---------------------------------------------------------------------------
// Schema

enum class ValueType { number, integer, text };

struct KeySpec {
  std::string_view key;
  ValueType type = ValueType::number;
  TagDim dim = TagDim::dimensionless;
  bool required = false;
  double default_number = 0.0;
  std::string_view default_text = {};
  std::string_view choices = {};  // '|'-separated allowed values for text keys
  double max_value = 0.0;         // upper limit for integer keys, 0 for none
};

namespace detail {

using enum ValueType;
using enum TagDim;

inline const std::vector<KeySpec>& common_keys() {
  static const std::vector<KeySpec> keys = {
      {"kind", text, dimensionless, false, 0, "", ""},
      {"units", text, dimensionless, false, 0, "NATURAL", "SI|NATURAL"},
      {"output", text},
      {"report", text},
      {"seed", integer, dimensionless, false, 0},
      {"sweep.param", text},
      {"sweep.values", text},
      {"sweep.min", number},
      {"sweep.max", number},
      {"sweep.count", integer, dimensionless, false, 0, "", "", 100000},
      {"sweep.spacing", text, dimensionless, false, 0, "linear", "linear|log"},
  };
  return keys;
}

inline std::vector<KeySpec> classical_keys() {
  return {
      {"classical.M", number, energy, true},
      {"classical.tau0", number, time, false, 0.0},
      {"classical.x1", number, length, false, 0.0},
      {"classical.x2", number, length, false, 0.0},
      {"classical.x3", number, length, false, 0.0},
      {"classical.v1", number, velocity, false, 0.0},
      {"classical.v2", number, velocity, false, 0.0},
      {"classical.v3", number, velocity, false, 0.0},
      {"classical.t_end", number, time, true},
      {"classical.dt", number, time, false, 1e-3},
      {"classical.charge", number, dimensionless, false, 0.0},
      {"classical.support", text, dimensionless, false, 0, "free", "free|held"},
      {"classical.every", integer, dimensionless, false, 100},
      {"metric.kind", text, dimensionless, false, 0, "flat",
       "flat|weak_field|isotropic|uniform_potential"},
      {"metric.g", number, acceleration, false, 0.0},  // 0 selects standard gravity
      {"metric.rg", number, length, false, 0.0},
      {"metric.field1", number, dimensionless, false, 0.0},
      {"metric.field2", number, dimensionless, false, 0.0},
      {"metric.field3", number, dimensionless, false, 0.0},
  };
}

inline std::vector<KeySpec> state_keys() {
  return {
      {"quantum.e0", number, energy, false, 10.0},
      {"quantum.sigma_e", number, energy, false, 0.5},
      {"quantum.tau0", number, time, false, 0.0},
      {"quantum.p0", number, momentum, false, 0.0},
      {"quantum.sigma_p", number, momentum, false, 0.5},
      {"quantum.x0", number, length, false, 0.0},
      {"grid.e.n", integer, dimensionless, false, 1024, "", "", 1 << 16},
      {"grid.p.n", integer, dimensionless, false, 256, "", "", 1 << 12},
      {"grid.window", number, dimensionless, false, 12.0},
  };
}

}  // namespace detail

/// Keys accepted for a scenario kind (common keys included).
inline std::vector<KeySpec> schema_for(Kind kind) {
  using namespace detail;
  std::vector<KeySpec> keys = common_keys();
  auto add = [&](std::vector<KeySpec> more) { keys.insert(keys.end(), more.begin(), more.end()); };
  switch (kind) {
    case Kind::gedanken_box:
      add({{"dq", number, length, true},
           {"t", number, time, true},
           {"g", number, acceleration, true},
           {"spring.k", number, stiffness, false, 0.0},
           {"spring.l", number, length, false, 0.0}});
      break;
    case Kind::gedanken_efield:
      add({{"dq", number, length, true},
           {"t", number, time, true},
           {"efield", number, efield, true},
           {"charge", number, charge, true},
           {"v", number, velocity, true}});
      break;
    case Kind::classical_trajectory:
      add(classical_keys());
      break;
    case Kind::classical_brackets:
      add({{"brackets.points", integer, dimensionless, false, 50, "", "", 100000},
           {"brackets.h", number, dimensionless, false, 1e-5},
           {"brackets.scale", number, dimensionless, false, 2.0}});
      break;
    case Kind::quantum_moments:
    case Kind::quantum_bound_sweep:
      add(state_keys());
      add({{"quantum.t_max", number, time, false, 100.0},
           {"quantum.t_count", integer, dimensionless, false, 11, "", "", 10000}});
      break;
    case Kind::quantum_optimize:
      add(state_keys());
      add({{"quantum.t", number, time, false, 100.0},
           {"optimize.sigma_min", number, energy, false, 0.0},
           {"optimize.sigma_max", number, energy, false, 0.0},
           {"optimize.scan_points", integer, dimensionless, false, 17, "", "", 1000},
           {"optimize.log_tol", number, dimensionless, false, 1e-4}});
      break;
  }
  return keys;
}

// ---------------------------------------------------------------------------
// Parsed scenario

struct Sweep {
  std::string param;  // fully qualified key
  std::vector<double> values;
};

struct ScenarioConfig {
  Kind kind = Kind::gedanken_box;
  UnitSystem units = UnitSystem::natural;
  std::string output;
  std::string report;
  std::uint64_t seed = 0;
  std::map<std::string, double> numbers;     // values in the config's unit system
  std::map<std::string, std::string> texts;  // text-valued keys, defaults filled in
  std::map<std::string, std::string> source; // raw right-hand sides as written
  std::optional<Sweep> sweep;

  UnitContext unit_context() const {
    return units == UnitSystem::si ? UnitContext::si() : UnitContext::natural();
  }

  double number(const std::string& key) const {
    const auto it = numbers.find(key);
    if (it == numbers.end()) throw Error(Errc::configuration, "no numeric key " + key);
    return it->second;
  }

  std::string text(const std::string& key) const {
    const auto it = texts.find(key);
    return it == texts.end() ? std::string{} : it->second;
  }

  /// Numeric value converted to natural units, using the key's schema dimension.
  double natural(const std::string& key) const {
    const double v = number(key);
    if (units == UnitSystem::natural) return v;
    for (const auto& spec : schema_for(kind)) {
      if (spec.key != key) continue;
      const auto dim = core_dimension(spec.dim);
      if (!dim) throw Error(Errc::configuration, key + " has no natural-unit form");
      return convert_units({v, *dim}, UnitContext::si(), UnitContext::natural()).value;
    }
    throw Error(Errc::configuration, "unknown key " + key);
  }
};

/// One `key = value [unit]` entry of a config document.
struct Entry {
  std::string key;
  std::string value;
  int line = 0;
};

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline std::optional<double> parse_double(std::string_view s) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc{} || ptr != end || !std::isfinite(v)) return std::nullopt;
  return v;
}

inline std::optional<std::int64_t> parse_integer(std::string_view s) {
  std::int64_t v = 0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc{} || ptr != end) return std::nullopt;
  return v;
}

/// Converts `value` with unit `tag` to the config's unit system. Returns an
/// error message on mismatch.
inline std::optional<std::string> apply_tag(const KeySpec& spec, std::string_view tag,
                                            UnitSystem system, double& value) {
  if (tag.empty() || tag == "nat") return std::nullopt;
  if (tag == "c") {
    if (spec.dim != TagDim::velocity)
      return std::string(spec.key) + ": unit tag 'c' is a velocity, expected " +
             std::string(to_string(spec.dim));
    if (system == UnitSystem::si) value *= kSpeedOfLightSI;
    return std::nullopt;
  }
  for (const auto& u : kUnitTags) {
    if (u.tag != tag) continue;
    if (u.dim != spec.dim)
      return std::string(spec.key) + ": unit tag '" + std::string(tag) + "' is " +
             std::string(to_string(u.dim)) + ", expected " + std::string(to_string(spec.dim));
    value *= u.si_factor;
    if (system == UnitSystem::natural) {
      const auto dim = core_dimension(u.dim);
      if (!dim)
        return std::string(spec.key) + ": unit tag '" + std::string(tag) +
               "' requires units = SI";
      value = convert_units({value, *dim}, UnitContext::si(), UnitContext::natural()).value;
    }
    return std::nullopt;
  }
  return std::string(spec.key) + ": unknown unit tag '" + std::string(tag) + "'";
}

inline std::vector<double> parse_list(std::string_view s, bool& ok) {
  std::vector<double> out;
  ok = true;
  std::string item;
  std::stringstream ss{std::string(s)};
  while (std::getline(ss, item, ',')) {
    const auto v = parse_double(trim(item));
    if (!v) {
      ok = false;
      return {};
    }
    out.push_back(*v);
  }
  if (out.empty()) ok = false;
  return out;
}

}  // namespace detail

/// Splits a document into entries. Lines are `key = value [unit]`; `#` starts
/// a comment; blank lines are ignored. Syntax problems are appended to `errors`.
inline std::vector<Entry> parse_entries(std::string_view text, std::vector<std::string>& errors) {
  std::vector<Entry> out;
  std::set<std::string> seen;
  std::stringstream ss{std::string(text)};
  std::string raw;
  int line = 0;
  while (std::getline(ss, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string body = detail::trim(std::string_view(raw).substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      errors.push_back("line " + std::to_string(line) + ": expected 'key = value'");
      continue;
    }
    Entry e{detail::trim(std::string_view(body).substr(0, eq)),
            detail::trim(std::string_view(body).substr(eq + 1)), line};
    if (e.key.empty()) {
      errors.push_back("line " + std::to_string(line) + ": empty key");
      continue;
    }
    if (!seen.insert(e.key).second) {
      errors.push_back("line " + std::to_string(line) + ": duplicate key " + e.key);
      continue;
    }
    out.push_back(std::move(e));
  }
  return out;
}

/// Applies `key=value` overrides; later overrides win over the document.
inline void apply_overrides(std::vector<Entry>& entries, const std::vector<std::string>& sets,
                            std::vector<std::string>& errors) {
  for (const auto& s : sets) {
    const auto eq = s.find('=');
    const std::string key = eq == std::string::npos ? std::string{} : detail::trim(s.substr(0, eq));
    if (key.empty()) {
      errors.push_back("--set '" + s + "': expected key=value");
      continue;
    }
    const std::string value = detail::trim(s.substr(eq + 1));
    auto it = std::find_if(entries.begin(), entries.end(), [&](const Entry& e) { return e.key == key; });
    if (it != entries.end())
      it->value = value;
    else
      entries.push_back({key, value, 0});
  }
}

/// Validates entries against the schema of their kind. `fallback_kind` is used
/// when the document has no `kind` key. Throws ConfigError listing every violation.
inline ScenarioConfig parse_config(std::string_view text, const std::vector<std::string>& sets = {},
                                   std::optional<Kind> fallback_kind = std::nullopt) {
  std::vector<std::string> errors;
  auto entries = parse_entries(text, errors);
  apply_overrides(entries, sets, errors);

  std::map<std::string, std::string> given;
  for (const auto& e : entries) given[e.key] = e.value;

  ScenarioConfig cfg;
  cfg.source = given;
  std::optional<Kind> kind = fallback_kind;
  if (const auto it = given.find("kind"); it != given.end()) {
    const auto k = parse_kind(it->second);
    if (!k)
      errors.push_back("unknown kind '" + it->second + "'");
    else if (fallback_kind && *k != *fallback_kind)
      errors.push_back("kind " + it->second + " does not match subcommand " +
                       std::string(to_string(*fallback_kind)));
    else
      kind = k;
  } else if (!kind) {
    errors.push_back("missing required key kind");
  }
  if (!kind) throw ConfigError(errors);
  cfg.kind = *kind;

  if (const auto it = given.find("units"); it != given.end()) {
    if (it->second == "SI")
      cfg.units = UnitSystem::si;
    else if (it->second != "NATURAL")
      errors.push_back("units must be SI or NATURAL, got '" + it->second + "'");
  }

  const auto schema = schema_for(cfg.kind);
  for (const auto& [key, value] : given) {
    const bool known = std::any_of(schema.begin(), schema.end(), [&](const KeySpec& s) { return s.key == key; });
    if (!known) errors.push_back("unknown key " + key + " for " + std::string(to_string(cfg.kind)));
  }

  for (const auto& spec : schema) {
    const std::string key(spec.key);
    const auto it = given.find(key);
    if (it == given.end()) {
      if (spec.required) {
        errors.push_back("missing required key " + key);
      } else if (spec.type == ValueType::text) {
        if (!spec.default_text.empty()) cfg.texts[key] = std::string(spec.default_text);
      } else if (!key.starts_with("sweep.")) {
        cfg.numbers[key] = spec.default_number;
      }
      continue;
    }
    const std::string& value = it->second;
    switch (spec.type) {
      case ValueType::text: {
        if (!spec.choices.empty()) {
          bool ok = false;
          std::string_view rest = spec.choices;
          while (!rest.empty()) {
            const auto bar = rest.find('|');
            ok = ok || rest.substr(0, bar) == value;
            rest = bar == std::string_view::npos ? std::string_view{} : rest.substr(bar + 1);
          }
          if (!ok) errors.push_back(key + ": '" + value + "' is not one of " + std::string(spec.choices));
        }
        cfg.texts[key] = value;
        break;
      }
      case ValueType::integer: {
        const auto v = detail::parse_integer(value);
        if (!v)
          errors.push_back(key + ": non-integer value '" + value + "'");
        else
          cfg.numbers[key] = static_cast<double>(*v);
        break;
      }
      case ValueType::number: {
        const auto space = value.find_first_of(" \t");
        const std::string num = value.substr(0, space);
        const std::string tag =
            space == std::string::npos ? std::string{} : detail::trim(std::string_view(value).substr(space));
        auto v = detail::parse_double(num);
        if (!v) {
          errors.push_back(key + ": non-numeric value '" + value + "'");
          break;
        }
        if (auto err = detail::apply_tag(spec, tag, cfg.units, *v)) {
          errors.push_back(*err);
          break;
        }
        cfg.numbers[key] = *v;
        break;
      }
    }
  }

  cfg.output = cfg.text("output");
  cfg.report = cfg.text("report");
  if (const auto it = cfg.numbers.find("seed"); it != cfg.numbers.end()) {
    if (it->second < 0)
      errors.push_back("seed must be nonnegative");
    else
      cfg.seed = static_cast<std::uint64_t>(it->second);
  }
  for (const auto& spec : schema) {
    if (spec.type != ValueType::integer || spec.key == "seed") continue;
    const auto it = cfg.numbers.find(std::string(spec.key));
    if (it == cfg.numbers.end()) continue;
    if (it->second < 1) errors.push_back(std::string(spec.key) + " must be at least 1");
    if (spec.max_value > 0 && it->second > spec.max_value)
      errors.push_back(std::string(spec.key) + " exceeds its limit " +
                       std::to_string(static_cast<long long>(spec.max_value)));
  }

  // Sweep: the parameter may be given fully qualified or by its last component.
  const bool has_sweep = given.count("sweep.param") != 0;
  const bool has_sweep_keys = std::any_of(given.begin(), given.end(), [](const auto& kv) {
    return kv.first.starts_with("sweep.") && kv.first != "sweep.param";
  });
  if (has_sweep) {
    const std::string name = given.at("sweep.param");
    std::vector<std::string> matches;
    for (const auto& spec : schema) {
      if (spec.type != ValueType::number || std::string_view(spec.key).starts_with("sweep.")) continue;
      const std::string key(spec.key);
      const auto dot = key.rfind('.');
      if (key == name || (dot != std::string::npos && key.substr(dot + 1) == name)) matches.push_back(key);
    }
    Sweep sweep;
    if (matches.size() != 1) {
      errors.push_back("sweep parameter '" + name + "' " +
                       (matches.empty() ? "is not a numeric parameter of " + std::string(to_string(cfg.kind))
                                        : "is ambiguous"));
    } else {
      sweep.param = matches.front();
    }
    if (given.count("sweep.values")) {
      if (given.count("sweep.min") || given.count("sweep.max") || given.count("sweep.count"))
        errors.push_back("sweep: give either sweep.values or sweep.min/max/count, not both");
      bool ok = false;
      sweep.values = detail::parse_list(given.at("sweep.values"), ok);
      if (!ok) errors.push_back("sweep.values: expected a comma-separated list of numbers");
    } else if (cfg.numbers.count("sweep.min") && cfg.numbers.count("sweep.max") &&
               cfg.numbers.count("sweep.count")) {
      const double lo = cfg.numbers["sweep.min"], hi = cfg.numbers["sweep.max"];
      const auto n = static_cast<int>(cfg.numbers["sweep.count"]);
      const bool log = cfg.text("sweep.spacing") == "log";
      if (log && !(lo > 0.0 && hi > 0.0)) errors.push_back("sweep: log spacing needs positive bounds");
      for (int k = 0; k < n; ++k) {
        const double s = n == 1 ? 0.0 : static_cast<double>(k) / (n - 1);
        sweep.values.push_back(log ? std::exp(std::log(lo) + s * (std::log(hi) - std::log(lo)))
                                   : lo + s * (hi - lo));
      }
    } else {
      errors.push_back("sweep: needs sweep.values or all of sweep.min, sweep.max, sweep.count");
    }
    cfg.sweep = std::move(sweep);
  } else if (has_sweep_keys) {
    errors.push_back("sweep keys given without sweep.param");
  }
  if (cfg.kind == Kind::quantum_bound_sweep && !has_sweep)
    errors.push_back("missing required key sweep.param for QUANTUM_BOUND_SWEEP");

  if (!errors.empty()) throw ConfigError(errors);
  return cfg;
}

}  // namespace clocklab::cli
