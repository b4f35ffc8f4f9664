#pragma once

#include <cstddef>
#include <filesystem>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "afcsim/model.hpp"

namespace afc {

/// Invalid configuration input. `key()` names the offending key path when known.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& reason)
      : std::runtime_error(key.empty() ? reason : key + ": " + reason), key_(std::move(key)) {}

  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

enum class OutputFormat { csv, json };

struct RunConfig {
  ModelConfig model = ModelConfig::defaults();
  std::string output_path;
  OutputFormat format = OutputFormat::csv;
  std::size_t threads = 0;
  /// Keys set explicitly by the user, after suffix resolution.
  std::set<std::string> explicit_keys;
};

/// Ordered (key, value-with-unit) pairs describing every resolved setting. Feeding them back
/// through apply_setting reproduces the configuration.
std::vector<std::pair<std::string, std::string>> describe(const RunConfig& cfg);

/// All recognized dotted keys.
std::vector<std::string> config_keys();

/// Resolves a bare key to its unique dotted key ("control_waist" -> "optical.control_waist").
std::string resolve_key(std::string_view key);

/// Sets one key from its textual value. Dimensioned values need a unit suffix.
void apply_setting(RunConfig& cfg, std::string_view key, std::string_view value);

/// Parses "key = value" lines (commas also separate entries; '#' starts a comment).
void apply_text(RunConfig& cfg, std::string_view text);

/// Parses a JSON object, either nested by section or with dotted keys.
void apply_json(RunConfig& cfg, std::string_view text);

/// Reads a config file; JSON when the content starts with '{', key-value text otherwise.
void apply_file(RunConfig& cfg, const std::filesystem::path& path);

/// Applies derived defaults (crossed-beam control waist) and validates the model.
/// Model invariant violations are reported as ConfigError.
void finalize(RunConfig& cfg);

/// Convenience: defaults + text + finalize.
RunConfig parse_config_text(std::string_view text);

/// Parses a dimensioned quantity such as "120 um" into SI (rad/s for frequencies, rad for angles).
enum class Dimension { length, frequency, time, angle };
double parse_quantity(std::string_view text, Dimension dim);

}  // namespace afc
