#include "afcsim/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>

#include <json.hpp>

#include "afcsim/errors.hpp"
#include "afcsim/units.hpp"

namespace afc {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) {
    return {};
  }
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::optional<double> parse_number(std::string_view text) {
  const std::string s(trim(text));
  if (s.empty()) {
    return std::nullopt;
  }
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || !std::isfinite(v)) {
    return std::nullopt;
  }
  return v;
}

std::string fmt(double v, const char* unit = nullptr) {
  char buf[64];
  if (unit) {
    std::snprintf(buf, sizeof buf, "%.9g %s", v, unit);
  } else {
    std::snprintf(buf, sizeof buf, "%.9g", v);
  }
  return buf;
}

struct UnitScale {
  std::string_view name;
  double scale;
};

constexpr UnitScale kLengthUnits[] = {{"m", 1.0},     {"mm", 1e-3},   {"um", 1e-6},
                                      {"\xC2\xB5m", 1e-6}, {"\xCE\xBCm", 1e-6}, {"nm", 1e-9}};
constexpr UnitScale kFrequencyUnits[] = {{"Hz", kTwoPi},       {"kHz", kTwoPi * 1e3},
                                         {"MHz", kTwoPi * 1e6}, {"GHz", kTwoPi * 1e9},
                                         {"rad/s", 1.0}};
constexpr UnitScale kTimeUnits[] = {{"s", 1.0},          {"ms", 1e-3},          {"us", 1e-6},
                                    {"\xC2\xB5s", 1e-6}, {"\xCE\xBCs", 1e-6}, {"ns", 1e-9}};
constexpr UnitScale kAngleUnits[] = {{"deg", kPi / 180.0}, {"rad", 1.0}};

std::span<const UnitScale> units_for(Dimension dim) {
  switch (dim) {
    case Dimension::length:
      return kLengthUnits;
    case Dimension::frequency:
      return kFrequencyUnits;
    case Dimension::time:
      return kTimeUnits;
    case Dimension::angle:
      return kAngleUnits;
  }
  return {};
}

const char* dimension_name(Dimension dim) {
  switch (dim) {
    case Dimension::length:
      return "length (m, mm, um, nm)";
    case Dimension::frequency:
      return "frequency (Hz, kHz, MHz, GHz)";
    case Dimension::time:
      return "time (s, ms, us, ns)";
    case Dimension::angle:
      return "angle (deg, rad)";
  }
  return "";
}

enum class Kind { quantity, number, boolean, count, choice };

struct Entry {
  std::string key;
  Kind kind;
  std::function<void(RunConfig&, std::string_view)> set;
  std::function<std::string(const RunConfig&)> get;
};

using DoubleRef = std::function<double&(RunConfig&)>;
using Check = std::function<const char*(double)>;

const char* positive(double v) { return v > 0.0 ? nullptr : "must be > 0"; }
const char* non_negative(double v) { return v >= 0.0 ? nullptr : "must be >= 0"; }
const char* any_value(double) { return nullptr; }
const char* unit_interval(double v) { return v >= 0.0 && v <= 1.0 ? nullptr : "must lie in [0, 1]"; }
const char* open_fraction(double v) {
  return v > 0.0 && v < 1.0 ? nullptr : "square fraction f_sq = T_sq/T_C must lie in (0, 1)";
}
const char* angle_range(double v) {
  return v >= 0.0 && v < kPi / 2 ? nullptr : "must lie in [0, 90) deg";
}

Entry quantity(std::string key, Dimension dim, DoubleRef ref, Check check) {
  Entry e{key, Kind::quantity, nullptr, nullptr};
  e.set = [key, dim, ref, check](RunConfig& c, std::string_view text) {
    double v = 0.0;
    try {
      v = parse_quantity(text, dim);
    } catch (const ConfigError& err) {
      throw ConfigError(key, err.what());
    }
    if (const char* why = check(v)) {
      throw ConfigError(key, why);
    }
    ref(c) = v;
  };
  e.get = [dim, ref](const RunConfig& c) {
    const double v = ref(const_cast<RunConfig&>(c));
    switch (dim) {
      case Dimension::length:
        return fmt(v, "m");
      case Dimension::frequency:
        return fmt(to_hz(v), "Hz");
      case Dimension::time:
        return fmt(v, "s");
      case Dimension::angle:
        return fmt(v * 180.0 / kPi, "deg");
    }
    return std::string();
  };
  return e;
}

Entry number(std::string key, DoubleRef ref, Check check) {
  Entry e{key, Kind::number, nullptr, nullptr};
  e.set = [key, ref, check](RunConfig& c, std::string_view text) {
    const auto v = parse_number(text);
    if (!v) {
      throw ConfigError(key, "expected a dimensionless number, got '" + std::string(text) + "'");
    }
    if (const char* why = check(*v)) {
      throw ConfigError(key, why);
    }
    ref(c) = *v;
  };
  e.get = [ref](const RunConfig& c) { return fmt(ref(const_cast<RunConfig&>(c))); };
  return e;
}

Entry boolean(std::string key, std::function<bool&(RunConfig&)> ref) {
  Entry e{key, Kind::boolean, nullptr, nullptr};
  e.set = [key, ref](RunConfig& c, std::string_view text) {
    const std::string_view t = trim(text);
    if (t == "true" || t == "yes" || t == "1" || t == "on") {
      ref(c) = true;
    } else if (t == "false" || t == "no" || t == "0" || t == "off") {
      ref(c) = false;
    } else {
      throw ConfigError(key, "expected true or false, got '" + std::string(t) + "'");
    }
  };
  e.get = [ref](const RunConfig& c) {
    return std::string(ref(const_cast<RunConfig&>(c)) ? "true" : "false");
  };
  return e;
}

Entry count(std::string key, std::function<std::size_t&(RunConfig&)> ref, std::size_t min) {
  Entry e{key, Kind::count, nullptr, nullptr};
  e.set = [key, ref, min](RunConfig& c, std::string_view text) {
    const auto v = parse_number(text);
    if (!v || *v < 0.0 || std::floor(*v) != *v) {
      throw ConfigError(key, "expected a non-negative integer, got '" + std::string(text) + "'");
    }
    if (*v < static_cast<double>(min)) {
      throw ConfigError(key, "must be at least " + std::to_string(min));
    }
    ref(c) = static_cast<std::size_t>(*v);
  };
  e.get = [ref](const RunConfig& c) { return std::to_string(ref(const_cast<RunConfig&>(c))); };
  return e;
}

Entry choice(std::string key, std::function<void(RunConfig&, std::string_view)> set,
             std::function<std::string(const RunConfig&)> get) {
  return Entry{std::move(key), Kind::choice, std::move(set), std::move(get)};
}

const std::vector<Entry>& registry() {
  static const std::vector<Entry> entries = [] {
    using D = Dimension;
    std::vector<Entry> r;
    r.push_back(quantity("crystal.length", D::length,
                         [](RunConfig& c) -> double& { return c.model.crystal_length; }, positive));
    r.push_back(quantity("crystal.wavelength", D::length,
                         [](RunConfig& c) -> double& { return c.model.wavelength; }, positive));

    r.push_back(quantity("input.waist", D::length,
                         [](RunConfig& c) -> double& { return c.model.input_waist; }, positive));
    r.push_back(boolean("input.waist_from_length",
                        [](RunConfig& c) -> bool& { return c.model.input_waist_from_length; }));
    r.push_back(quantity("input.duration_fwhm", D::time,
                         [](RunConfig& c) -> double& { return c.model.input_duration_fwhm; },
                         positive));
    r.push_back(quantity("input.spectrum_fwhm", D::frequency,
                         [](RunConfig& c) -> double& { return c.model.input_spectrum_fwhm; },
                         non_negative));
    r.push_back(quantity("input.detuning", D::frequency,
                         [](RunConfig& c) -> double& { return c.model.input_detuning; }, any_value));

    r.push_back(quantity("optical.control_waist", D::length,
                         [](RunConfig& c) -> double& { return c.model.control_waist; }, positive));
    r.push_back(quantity("optical.peak_rabi", D::frequency,
                         [](RunConfig& c) -> double& { return c.model.reference_rabi; },
                         non_negative));
    r.push_back(quantity("optical.reference_waist", D::length,
                         [](RunConfig& c) -> double& { return c.model.reference_waist; }, positive));
    r.push_back(boolean("optical.rabi_scaling",
                        [](RunConfig& c) -> bool& { return c.model.rabi_scaling; }));
    r.push_back(quantity("optical.duration", D::time,
                         [](RunConfig& c) -> double& { return c.model.optical_pulse.cutoff_duration; },
                         positive));
    r.push_back(number("optical.square_fraction",
                       [](RunConfig& c) -> double& { return c.model.optical_pulse.square_fraction; },
                       open_fraction));
    r.push_back(quantity("optical.chirp_span", D::frequency,
                         [](RunConfig& c) -> double& { return c.model.optical_pulse.chirp_span; },
                         non_negative));
    r.push_back(number("optical.edge_truncation",
                       [](RunConfig& c) -> double& { return c.model.optical_pulse.edge_truncation; },
                       positive));
    r.push_back(quantity("optical.angle", D::angle,
                         [](RunConfig& c) -> double& { return c.model.angle; }, angle_range));
    r.push_back(choice(
        "optical.mode",
        [](RunConfig& c, std::string_view v) {
          const std::string_view t = trim(v);
          if (t == "bloch") {
            c.model.optical_mode = EvaluationMode::bloch;
          } else if (t == "analytical") {
            c.model.optical_mode = EvaluationMode::analytical;
          } else {
            throw ConfigError("optical.mode", "expected bloch or analytical");
          }
        },
        [](const RunConfig& c) { return std::string(to_string(c.model.optical_mode)); }));

    r.push_back(quantity("spin.peak_rabi", D::frequency,
                         [](RunConfig& c) -> double& { return c.model.circuit.peak_rabi; },
                         non_negative));
    r.push_back(quantity("spin.duration", D::time,
                         [](RunConfig& c) -> double& { return c.model.spin_pulse.cutoff_duration; },
                         positive));
    r.push_back(number("spin.square_fraction",
                       [](RunConfig& c) -> double& { return c.model.spin_pulse.square_fraction; },
                       open_fraction));
    r.push_back(quantity("spin.chirp_span", D::frequency,
                         [](RunConfig& c) -> double& { return c.model.spin_pulse.chirp_span; },
                         positive));
    r.push_back(number("spin.edge_truncation",
                       [](RunConfig& c) -> double& { return c.model.spin_pulse.edge_truncation; },
                       positive));
    r.push_back(quantity("spin.linewidth", D::frequency,
                         [](RunConfig& c) -> double& { return c.model.spin_linewidth; }, positive));
    r.push_back(quantity("spin.transition_frequency", D::frequency,
                         [](RunConfig& c) -> double& { return c.model.spin_transition; },
                         non_negative));
    r.push_back(quantity("spin.pulse_center", D::frequency,
                         [](RunConfig& c) -> double& { return c.model.spin_pulse_center; },
                         non_negative));
    r.push_back(quantity("spin.storage_time", D::time,
                         [](RunConfig& c) -> double& { return c.model.storage_time; }, positive));

    r.push_back(quantity("circuit.fwhm", D::frequency,
                         [](RunConfig& c) -> double& { return c.model.circuit.fwhm; }, positive));
    r.push_back(quantity("circuit.resonance", D::frequency,
                         [](RunConfig& c) -> double& { return c.model.circuit.resonance; },
                         non_negative));
    r.push_back(choice(
        "circuit.filter_mode",
        [](RunConfig& c, std::string_view v) {
          const std::string_view t = trim(v);
          if (t == "instantaneous") {
            c.model.filter_mode = CircuitFilterMode::instantaneous;
          } else if (t == "static") {
            c.model.filter_mode = CircuitFilterMode::static_detuning;
          } else {
            throw ConfigError("circuit.filter_mode", "expected instantaneous or static");
          }
        },
        [](const RunConfig& c) { return std::string(to_string(c.model.filter_mode)); }));

    r.push_back(choice(
        "composition.eta_afc",
        [](RunConfig& c, std::string_view v) {
          if (trim(v) == "none") {
            c.model.eta_afc.reset();
            return;
          }
          const auto x = parse_number(v);
          if (!x || unit_interval(*x)) {
            throw ConfigError("composition.eta_afc", "must be none or lie in [0, 1]");
          }
          c.model.eta_afc = *x;
        },
        [](const RunConfig& c) {
          return c.model.eta_afc ? fmt(*c.model.eta_afc) : std::string("none");
        }));
    r.push_back(number("composition.eta_spin",
                       [](RunConfig& c) -> double& { return c.model.eta_spin; }, unit_interval));

    r.push_back(count("grid.radial_nodes",
                      [](RunConfig& c) -> std::size_t& { return c.model.grid.radial_nodes; }, 1));
    r.push_back(count("grid.z_nodes",
                      [](RunConfig& c) -> std::size_t& { return c.model.grid.z_nodes; }, 3));
    r.push_back(count("grid.cartesian_nodes",
                      [](RunConfig& c) -> std::size_t& { return c.model.grid.cartesian_nodes; }, 1));
    r.push_back(count("grid.spectral_nodes",
                      [](RunConfig& c) -> std::size_t& { return c.model.grid.spectral_nodes; }, 1));
    r.push_back(count("grid.rabi_table_nodes",
                      [](RunConfig& c) -> std::size_t& { return c.model.grid.rabi_table_nodes; }, 0));

    r.push_back(number("integrator.rel_tol",
                       [](RunConfig& c) -> double& { return c.model.bloch.rel_tol; }, positive));
    r.push_back(number("integrator.abs_tol",
                       [](RunConfig& c) -> double& { return c.model.bloch.abs_tol; }, positive));
    r.push_back(choice(
        "integrator.method",
        [](RunConfig& c, std::string_view v) {
          const std::string_view t = trim(v);
          if (t == "adaptive") {
            c.model.bloch.method = BlochOptions::Method::adaptive_dopri5;
          } else if (t == "rk4") {
            c.model.bloch.method = BlochOptions::Method::fixed_rk4;
          } else {
            throw ConfigError("integrator.method", "expected adaptive or rk4");
          }
        },
        [](const RunConfig& c) {
          return std::string(c.model.bloch.method == BlochOptions::Method::fixed_rk4 ? "rk4"
                                                                                      : "adaptive");
        }));

    r.push_back(count("run.threads", [](RunConfig& c) -> std::size_t& { return c.threads; }, 0));
    return r;
  }();
  return entries;
}

const Entry& find_entry(const std::string& key) {
  for (const auto& e : registry()) {
    if (e.key == key) {
      return e;
    }
  }
  throw ConfigError(key, "unknown key");
}

}  // namespace

double parse_quantity(std::string_view text, Dimension dim) {
  const std::string s(trim(text));
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || !std::isfinite(v)) {
    throw ConfigError("", "expected a number with a unit, got '" + s + "'");
  }
  const std::string_view unit = trim(std::string_view(end));
  if (unit.empty()) {
    throw ConfigError("", std::string("unit suffix required for ") + dimension_name(dim) + ", got '" +
                              s + "'");
  }
  for (const auto& u : units_for(dim)) {
    if (u.name == unit) {
      return v * u.scale;
    }
  }
  throw ConfigError("", "unit '" + std::string(unit) + "' is not a " + dimension_name(dim));
}

std::vector<std::string> config_keys() {
  std::vector<std::string> keys;
  for (const auto& e : registry()) {
    keys.push_back(e.key);
  }
  return keys;
}

std::string resolve_key(std::string_view key) {
  const std::string k(trim(key));
  if (k.find('.') != std::string::npos) {
    find_entry(k);
    return k;
  }
  std::vector<std::string> matches;
  for (const auto& e : registry()) {
    const auto dot = e.key.rfind('.');
    if (e.key.substr(dot + 1) == k) {
      matches.push_back(e.key);
    }
  }
  if (matches.empty()) {
    throw ConfigError(k, "unknown key");
  }
  if (matches.size() > 1) {
    std::string list;
    for (const auto& m : matches) {
      list += (list.empty() ? "" : ", ") + m;
    }
    throw ConfigError(k, "ambiguous key; use one of " + list);
  }
  return matches.front();
}

namespace {

/// Candidate dotted keys for a bare key with several matches.
std::vector<std::string> suffix_matches(const std::string& k) {
  std::vector<std::string> matches;
  for (const auto& e : registry()) {
    if (e.key.substr(e.key.rfind('.') + 1) == k) {
      matches.push_back(e.key);
    }
  }
  return matches;
}

}  // namespace

void apply_setting(RunConfig& cfg, std::string_view key, std::string_view value) {
  const std::string bare(trim(key));
  if (bare.find('.') == std::string::npos) {
    const auto matches = suffix_matches(bare);
    if (matches.size() > 1) {
      // A value that no candidate accepts is reported as a value error, not an ambiguity.
      std::optional<ConfigError> first;
      bool any_accepts = false;
      for (const auto& m : matches) {
        RunConfig scratch = cfg;
        try {
          find_entry(m).set(scratch, value);
          any_accepts = true;
        } catch (const ConfigError& e) {
          if (!first) {
            first = e;
          }
        }
      }
      if (!any_accepts) {
        throw *first;
      }
    }
  }
  const std::string resolved = resolve_key(key);
  find_entry(resolved).set(cfg, value);
  cfg.explicit_keys.insert(resolved);
}

void apply_text(RunConfig& cfg, std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    std::string_view rest = line;
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      const std::string_view item = trim(rest.substr(0, comma));
      rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
      if (item.empty()) {
        continue;
      }
      const auto eq = item.find('=');
      if (eq == std::string_view::npos) {
        throw ConfigError("", "line " + std::to_string(line_no) + ": expected key = value, got '" +
                                  std::string(item) + "'");
      }
      apply_setting(cfg, trim(item.substr(0, eq)), trim(item.substr(eq + 1)));
    }
  }
}

namespace {

void flatten(RunConfig& cfg, const nlohmann::json& j, const std::string& prefix) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
    const auto& v = it.value();
    if (v.is_object()) {
      flatten(cfg, v, key);
    } else if (v.is_string()) {
      apply_setting(cfg, key, v.get<std::string>());
    } else if (v.is_boolean()) {
      apply_setting(cfg, key, v.get<bool>() ? "true" : "false");
    } else if (v.is_number()) {
      apply_setting(cfg, key, fmt(v.get<double>()));
    } else if (v.is_null()) {
      apply_setting(cfg, key, "none");
    } else {
      throw ConfigError(key, "unsupported JSON value");
    }
  }
}

}  // namespace

void apply_json(RunConfig& cfg, std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("", std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) {
    throw ConfigError("", "JSON configuration must be an object");
  }
  // Documents written by the sweep exporter keep the settings under "config".
  if (j.contains("config") && j["config"].is_object()) {
    j = j["config"];
  }
  flatten(cfg, j, "");
}

void apply_file(RunConfig& cfg, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("", "cannot read config file '" + path.string() + "'");
  }
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  const std::string_view t = trim(text);
  if (!t.empty() && t.front() == '{') {
    apply_json(cfg, text);
  } else {
    apply_text(cfg, text);
  }
}

void finalize(RunConfig& cfg) {
  if (cfg.model.angle > 0.0 && !cfg.explicit_keys.contains("optical.control_waist")) {
    cfg.model.control_waist = um(120);
  }
  try {
    cfg.model.validate();
  } catch (const ParameterError& e) {
    throw ConfigError("", std::string("invalid configuration: ") + e.what());
  }
}

RunConfig parse_config_text(std::string_view text) {
  RunConfig cfg;
  apply_text(cfg, text);
  finalize(cfg);
  return cfg;
}

std::vector<std::pair<std::string, std::string>> describe(const RunConfig& cfg) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& e : registry()) {
    out.emplace_back(e.key, e.get(cfg));
  }
  return out;
}

}  // namespace afc
