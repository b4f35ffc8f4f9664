#include "afcsim/cli.hpp"

#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "afcsim/config.hpp"
#include "afcsim/errors.hpp"
#include "afcsim/io.hpp"
#include "afcsim/parallel.hpp"
#include "afcsim/sweeps.hpp"
#include "afcsim/units.hpp"

namespace afc {

namespace {

struct CommonOptions {
  std::string config_path;
  std::string preset;
  std::string out_path;
  std::string format;
  std::string mode;
  std::optional<std::size_t> threads;
  std::vector<std::string> overrides;
};

void add_common(CLI::App* sub, CommonOptions& o) {
  sub->add_option("--config", o.config_path, "Config file (key = value text or JSON)");
  sub->add_option("--preset", o.preset, "Named figure preset");
  sub->add_option("--out", o.out_path, "Output file (stdout when omitted)");
  sub->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--mode", o.mode, "Optical evaluation: bloch or analytical")
      ->check(CLI::IsMember({"bloch", "analytical"}));
  sub->add_option("--threads", o.threads, "Worker threads (0 = hardware)");
  sub->add_option("overrides", o.overrides, "key=value settings applied last");
}

void apply_overrides(RunConfig& cfg, const std::vector<std::string>& overrides) {
  for (const auto& kv : overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("", "override '" + kv + "' is not of the form key=value");
    }
    apply_setting(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
}

/// Config file, then the preset's fixed settings, then the command-line flags and overrides.
RunConfig build_config(const CommonOptions& o, std::optional<SweepSpec>* spec) {
  RunConfig cfg;
  if (!o.config_path.empty()) {
    apply_file(cfg, o.config_path);
  }
  if (!o.preset.empty()) {
    try {
      SweepSpec preset = make_preset(o.preset, cfg.model);
      if (spec) {
        *spec = std::move(preset);
      }
    } catch (const ParameterError& e) {
      throw ConfigError("preset", e.what());
    }
  }
  if (!o.mode.empty()) {
    apply_setting(cfg, "optical.mode", o.mode);
  }
  if (o.threads) {
    apply_setting(cfg, "run.threads", std::to_string(*o.threads));
  }
  if (!o.format.empty()) {
    cfg.format = o.format == "json" ? OutputFormat::json : OutputFormat::csv;
  }
  cfg.output_path = o.out_path;
  apply_overrides(cfg, o.overrides);
  finalize(cfg);
  if (cfg.threads > 0) {
    set_default_thread_count(cfg.threads);
  }
  return cfg;
}

void emit(const RunConfig& cfg, const std::string& content, std::ostream& out) {
  if (cfg.output_path.empty()) {
    out << content;
  } else {
    write_file_atomic(cfg.output_path, content);
  }
}

Dimension sweep_dimension(SweepParameter p) {
  switch (p) {
    case SweepParameter::control_waist:
    case SweepParameter::input_waist:
    case SweepParameter::crystal_length:
      return Dimension::length;
    case SweepParameter::rf_chirp_span:
    case SweepParameter::input_detuning:
      return Dimension::frequency;
    case SweepParameter::storage_time:
    case SweepParameter::optical_duration:
      return Dimension::time;
    case SweepParameter::angle:
      return Dimension::angle;
  }
  return Dimension::length;
}

std::vector<double> parse_values(const std::string& list, Dimension dim) {
  std::vector<double> v;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.find_first_not_of(" \t") != std::string::npos) {
      v.push_back(parse_quantity(item, dim));
    }
  }
  if (v.empty()) {
    throw ConfigError("values", "no sweep values given");
  }
  return v;
}

/// "start:stop:count" with units on start and stop.
std::vector<double> parse_range(const std::string& range, Dimension dim) {
  const auto a = range.find(':');
  const auto b = a == std::string::npos ? a : range.find(':', a + 1);
  if (b == std::string::npos) {
    throw ConfigError("range", "expected start:stop:count");
  }
  const double start = parse_quantity(range.substr(0, a), dim);
  const double stop = parse_quantity(range.substr(a + 1, b - a - 1), dim);
  std::size_t n = 0;
  try {
    n = std::stoul(range.substr(b + 1));
  } catch (const std::exception&) {
    throw ConfigError("range", "count must be a positive integer");
  }
  if (n < 2) {
    throw ConfigError("range", "count must be at least 2");
  }
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) {
    v[i] = start + (stop - start) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  return v;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Control-pulse efficiency model for AFC spin-wave memories", "afc-pulse-sim"};
  app.require_subcommand(1);

  CommonOptions simulate_opts, sweep_opts, optimize_opts, fit_opts, profile_opts;

  auto* simulate_cmd = app.add_subcommand("simulate", "Evaluate eta_OC, eta_SC and their composition");
  add_common(simulate_cmd, simulate_opts);

  auto* sweep = app.add_subcommand("sweep", "Run a parameter sweep");
  add_common(sweep, sweep_opts);
  std::string sweep_param, sweep_values, sweep_range;
  bool tc_rule = false, optical_only = false, optimize_waist = false;
  sweep->add_option("--param", sweep_param, "Swept parameter (without --preset)");
  sweep->add_option("--values", sweep_values, "Comma-separated values with units");
  sweep->add_option("--range", sweep_range, "start:stop:count with units");
  sweep->add_flag("--tc-rule", tc_rule, "Couple spin T_C to the storage time");
  sweep->add_flag("--optical-only", optical_only, "Skip the spin pulse (eta_SC = 1)");
  sweep->add_flag("--optimize-waist", optimize_waist, "Optimize the control waist per row");

  auto* optimize = app.add_subcommand("optimize-waist", "Find the control waist maximizing eta_OC^2");
  add_common(optimize, optimize_opts);
  std::string wmin = "10 um", wmax = "500 um";
  optimize->add_option("--min-waist", wmin, "Lower search bound");
  optimize->add_option("--max-waist", wmax, "Upper search bound");

  auto* fit = app.add_subcommand("fit-afc", "Fit the AFC echo decay to measured points");
  add_common(fit, fit_opts);
  std::string data_path;
  double exponent_factor = 4.0;
  fit->add_option("--data", data_path, "CSV with delay_us,efficiency rows")->required();
  fit->add_option("--exponent-factor", exponent_factor, "k in eta0*exp(-k t / T2)");

  auto* profiles = app.add_subcommand("profiles", "Transverse mode and efficiency cut");
  add_common(profiles, profile_opts);
  std::string y_text = "0 m", z_text;
  std::size_t points = 401;
  profiles->add_option("--y", y_text, "Transverse offset of the cut");
  profiles->add_option("--z", z_text, "Axial position (default: exit face, L/2)");
  profiles->add_option("--points", points, "Samples along x");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfigError;
  }

  try {
    if (simulate_cmd->parsed()) {
      const RunConfig cfg = build_config(simulate_opts, nullptr);
      const EfficiencyResult r = simulate(cfg.model);
      std::ostringstream s;
      if (cfg.format == OutputFormat::json) {
        write_result_json(s, r, cfg);
      } else {
        write_result_text(s, r);
      }
      emit(cfg, s.str(), out);
    } else if (sweep->parsed()) {
      std::optional<SweepSpec> preset;
      RunConfig cfg = build_config(sweep_opts, &preset);
      SweepSpec spec;
      if (preset) {
        spec = *preset;
      } else {
        if (sweep_param.empty()) {
          throw ConfigError("param", "sweep needs --preset or --param");
        }
        try {
          spec.parameter = parse_sweep_parameter(sweep_param);
        } catch (const ParameterError& e) {
          throw ConfigError("param", e.what());
        }
      }
      const Dimension dim = sweep_dimension(spec.parameter);
      if (!sweep_values.empty()) {
        spec.values = parse_values(sweep_values, dim);
      } else if (!sweep_range.empty()) {
        spec.values = parse_range(sweep_range, dim);
      } else if (!preset) {
        throw ConfigError("values", "sweep needs --values or --range");
      }
      spec.storage_time_tc_rule = spec.storage_time_tc_rule || tc_rule;
      spec.optical_only = spec.optical_only || optical_only;
      spec.optimize_control_waist = spec.optimize_control_waist || optimize_waist;
      spec.input_waist_from_length = spec.input_waist_from_length || cfg.model.input_waist_from_length;
      spec.rabi_waist_scaling = cfg.model.rabi_scaling;
      spec.base = cfg.model;
      try {
        spec.validate();
      } catch (const ParameterError& e) {
        throw ConfigError("sweep", e.what());
      }
      const SweepResult result = run_sweep(spec);
      std::ostringstream s;
      if (cfg.format == OutputFormat::json) {
        write_sweep_json(s, result, cfg, sweep_opts.preset);
      } else {
        write_sweep_csv(s, result, cfg, sweep_opts.preset);
      }
      emit(cfg, s.str(), out);
    } else if (optimize->parsed()) {
      const RunConfig cfg = build_config(optimize_opts, nullptr);
      const WaistBounds bounds{parse_quantity(wmin, Dimension::length),
                               parse_quantity(wmax, Dimension::length)};
      const WaistOptimum opt = optimize_control_waist(cfg.model, cfg.model.angle, bounds);
      std::ostringstream s;
      if (cfg.format == OutputFormat::json) {
        nlohmann::ordered_json j;
        j["w_opt_m"] = opt.waist;
        j["eta_oc_squared"] = opt.eta_oc_squared;
        j["angle_deg"] = cfg.model.angle * 180.0 / kPi;
        s << j.dump(2) << '\n';
      } else {
        s << "w_opt_m = " << format_number(opt.waist) << '\n'
          << "eta_oc_squared = " << format_number(opt.eta_oc_squared) << '\n';
      }
      emit(cfg, s.str(), out);
    } else if (fit->parsed()) {
      const RunConfig cfg = build_config(fit_opts, nullptr);
      std::ifstream in(data_path);
      if (!in) {
        throw ConfigError("data", "cannot read '" + data_path + "'");
      }
      const auto points_read = read_decay_csv(in);
      const AfcFit f = fit_afc_decay(points_read, exponent_factor);
      std::ostringstream s;
      s << "eta0 = " << format_number(f.params.eta0) << '\n'
        << "t2_afc_us = " << format_number(f.params.t2_afc * 1e6) << '\n'
        << "exponent_factor = " << format_number(f.params.exponent_factor) << '\n'
        << "rms_residual = " << format_number(f.rms_residual) << '\n'
        << "iterations = " << f.iterations << '\n';
      emit(cfg, s.str(), out);
    } else if (profiles->parsed()) {
      CommonOptions o = profile_opts;
      const bool fig9 = o.preset == "fig9";
      if (!o.preset.empty() && !fig9) {
        throw ConfigError("preset", "profiles only accepts the fig9 preset");
      }
      if (fig9) {
        o.preset.clear();
        o.overrides.insert(o.overrides.begin(), {"optical.angle=0.5 deg", "optical.control_waist=120 um"});
      }
      const RunConfig cfg = build_config(o, nullptr);
      const double y = parse_quantity(y_text, Dimension::length);
      const double z = z_text.empty() ? 0.5 * cfg.model.crystal_length
                                      : parse_quantity(z_text, Dimension::length);
      const auto rows = emit_mode_profiles(cfg.model, cfg.model.angle, y, z, points);
      std::ostringstream s;
      write_profiles_csv(s, rows, cfg, cfg.model.angle, y, z);
      emit(cfg, s.str(), out);
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const ModelError& e) {
    err << "model error: " << e.what() << '\n';
    return kExitModelError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitModelError;
  }
  return kExitOk;
}

}  // namespace afc
