#include "afcsim/sweeps.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <memory>
#include <string>

#include "afcsim/beams.hpp"
#include "afcsim/errors.hpp"
#include "afcsim/units.hpp"

namespace afc {

namespace {

constexpr std::pair<SweepParameter, std::string_view> kParameterNames[] = {
    {SweepParameter::control_waist, "control_waist"},
    {SweepParameter::input_waist, "input_waist"},
    {SweepParameter::rf_chirp_span, "rf_chirp_span"},
    {SweepParameter::storage_time, "storage_time"},
    {SweepParameter::optical_duration, "optical_duration"},
    {SweepParameter::input_detuning, "input_detuning"},
    {SweepParameter::angle, "angle"},
    {SweepParameter::crystal_length, "crystal_length"},
};

std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g,", v);
  return buf;
}

// Everything a RabiEfficiencyCurve depends on besides its Rabi range.
std::string curve_key(const OpticalControlConfig& o) {
  std::string k = to_string(o.mode);
  for (double v : {o.pulse.cutoff_duration, o.pulse.square_fraction, o.pulse.chirp_span,
                   o.pulse.edge_truncation, o.spectrum.fwhm, o.spectrum.center,
                   static_cast<double>(o.grid.spectral_nodes),
                   static_cast<double>(o.grid.rabi_table_nodes), o.bloch.rel_tol, o.bloch.abs_tol,
                   static_cast<double>(o.bloch.method), o.bloch.population_decay_rate,
                   o.bloch.dephasing_rate}) {
    k += fmt17(v);
  }
  return k;
}

std::string map_key(const OpticalControlConfig& o) {
  std::string k = curve_key(o);
  for (double v : {o.control.waist, o.control.wavelength, o.peak_rabi, o.input.waist,
                   o.crystal.length, static_cast<double>(o.grid.radial_nodes),
                   static_cast<double>(o.grid.z_nodes)}) {
    k += fmt17(v);
  }
  return k;
}

std::string spin_key(const SpinControlConfig& s) {
  std::string k = to_string(s.filter_mode);
  for (double v : {s.circuit.resonance, s.circuit.fwhm, s.circuit.peak_rabi, s.pulse.cutoff_duration,
                   s.pulse.square_fraction, s.pulse.chirp_span, s.pulse.edge_truncation, s.line.fwhm,
                   s.line.center, s.transition_frequency, s.pulse_center,
                   static_cast<double>(s.spectral_nodes), s.bloch.rel_tol, s.bloch.abs_tol}) {
    k += fmt17(v);
  }
  return k;
}

[[noreturn]] void rethrow_annotated(const std::string& note) {
  try {
    throw;
  } catch (const IntegrationError& e) {
    throw IntegrationError(std::string(e.what()) + note, e.time_reached());
  } catch (const ParameterError& e) {
    throw ParameterError(std::string(e.what()) + note);
  } catch (const CoverageError& e) {
    throw CoverageError(std::string(e.what()) + note);
  } catch (const OptimizationError& e) {
    throw OptimizationError(std::string(e.what()) + note);
  } catch (const ModelError& e) {
    throw ModelError(std::string(e.what()) + note);
  }
}

double eta_oc_with(const OpticalControlConfig& o, const RabiEfficiencyCurve& curve, double theta) {
  const RadialEfficiencyMap map = radial_efficiency_map(o, curve, theta);
  return theta == 0.0 ? radial_average(map, o) : crossed_beam_average(map, theta, o);
}

/// Golden-section search for the maximum of f on [a, b].
template <typename F>
std::pair<double, double> golden_maximize(F&& f, double a, double b, double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > tol) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return fc >= fd ? std::pair{c, fc} : std::pair{d, fd};
}

}  // namespace

std::string_view to_string(SweepParameter p) {
  for (const auto& [value, name] : kParameterNames) {
    if (value == p) {
      return name;
    }
  }
  return "unknown";
}

SweepParameter parse_sweep_parameter(std::string_view name) {
  for (const auto& [value, n] : kParameterNames) {
    if (n == name) {
      return value;
    }
  }
  throw ParameterError("unknown sweep parameter '" + std::string(name) + "'");
}

std::string_view value_unit(SweepParameter p) {
  switch (p) {
    case SweepParameter::control_waist:
    case SweepParameter::input_waist:
    case SweepParameter::crystal_length:
      return "m";
    case SweepParameter::rf_chirp_span:
    case SweepParameter::input_detuning:
      return "Hz";
    case SweepParameter::storage_time:
    case SweepParameter::optical_duration:
      return "s";
    case SweepParameter::angle:
      return "deg";
  }
  return "";
}

double to_output_unit(SweepParameter p, double value) {
  switch (p) {
    case SweepParameter::rf_chirp_span:
    case SweepParameter::input_detuning:
      return to_hz(value);
    case SweepParameter::angle:
      return value * 180.0 / kPi;
    default:
      return value;
  }
}

void SweepSpec::validate() const {
  if (values.empty()) {
    throw ParameterError("sweep grid must not be empty");
  }
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (!(values[i] > values[i - 1])) {
      throw ParameterError("sweep grid must be strictly increasing");
    }
  }
  if (!(waist_bounds.min > 0.0 && waist_bounds.max > waist_bounds.min)) {
    throw ParameterError("waist bounds must satisfy 0 < min < max");
  }
}

ModelConfig configure_row(const SweepSpec& spec, double value) {
  ModelConfig cfg = spec.base;
  cfg.rabi_scaling = spec.rabi_waist_scaling;
  if (spec.input_waist_from_length) {
    cfg.input_waist_from_length = true;
  }
  switch (spec.parameter) {
    case SweepParameter::control_waist:
      cfg.control_waist = value;
      break;
    case SweepParameter::input_waist:
      cfg.input_waist = value;
      cfg.input_waist_from_length = false;
      break;
    case SweepParameter::rf_chirp_span:
      cfg.spin_pulse.chirp_span = value;
      break;
    case SweepParameter::storage_time:
      cfg.storage_time = value;
      if (spec.storage_time_tc_rule) {
        cfg.spin_pulse.cutoff_duration =
            std::min(spec.base.spin_pulse.cutoff_duration, 0.8 * value / 2.0);
      }
      break;
    case SweepParameter::optical_duration:
      cfg.optical_pulse.cutoff_duration = value;
      break;
    case SweepParameter::input_detuning:
      cfg.input_detuning = value;
      break;
    case SweepParameter::angle:
      cfg.angle = value;
      break;
    case SweepParameter::crystal_length:
      cfg.crystal_length = value;
      break;
  }
  return cfg;
}

SweepResult run_sweep(const SweepSpec& spec) {
  const auto start = std::chrono::steady_clock::now();
  spec.validate();

  std::vector<ModelConfig> configs;
  configs.reserve(spec.values.size());
  for (double v : spec.values) {
    configs.push_back(configure_row(spec, v));
    try {
      configs.back().validate();
    } catch (const ModelError&) {
      rethrow_annotated(" [" + std::string(to_string(spec.parameter)) + " = " + fmt17(v) + "]");
    }
  }

  SweepResult result;
  result.parameter = spec.parameter;
  result.mode = spec.base.optical_mode;
  result.grid = spec.base.grid;
  result.rows.resize(configs.size());

  if (spec.optimize_control_waist) {
    for (std::size_t i = 0; i < configs.size(); ++i) {
      try {
        const WaistOptimum opt = optimize_control_waist(configs[i], configs[i].angle, spec.waist_bounds);
        configs[i].control_waist = opt.waist;
      } catch (const ModelError&) {
        rethrow_annotated(" [" + std::string(to_string(spec.parameter)) + " = " +
                          fmt17(spec.values[i]) + "]");
      }
    }
  }

  // One efficiency-vs-Rabi curve per pulse/spectrum setting, sampled up to the largest
  // Rabi frequency any row needs; one radial map per beam setting, sized for its largest angle.
  std::map<std::string, double> curve_range;
  std::map<std::string, double> map_angle;
  for (const auto& cfg : configs) {
    const OpticalControlConfig o = cfg.optical();
    double& r = curve_range[curve_key(o)];
    r = std::max(r, o.peak_rabi);
    double& a = map_angle[map_key(o)];
    a = std::max(a, cfg.angle);
  }
  std::map<std::string, std::unique_ptr<RabiEfficiencyCurve>> curves;
  std::map<std::string, std::unique_ptr<RadialEfficiencyMap>> maps;
  std::map<std::string, double> spin_cache;

  for (std::size_t i = 0; i < configs.size(); ++i) {
    const ModelConfig& cfg = configs[i];
    try {
      const OpticalControlConfig o = cfg.optical();
      const std::string ck = curve_key(o);
      auto& curve = curves[ck];
      if (!curve) {
        curve = std::make_unique<RabiEfficiencyCurve>(o, curve_range[ck]);
      }
      const std::string mk = map_key(o);
      auto& map = maps[mk];
      if (!map) {
        map = std::make_unique<RadialEfficiencyMap>(radial_efficiency_map(o, *curve, map_angle[mk]));
      }
      const double eta_oc =
          cfg.angle == 0.0 ? radial_average(*map, o) : crossed_beam_average(*map, cfg.angle, o);

      double eta_sc = 1.0;
      if (!spec.optical_only) {
        const SpinControlConfig s = cfg.spin();
        const std::string sk = spin_key(s);
        auto it = spin_cache.find(sk);
        if (it == spin_cache.end()) {
          it = spin_cache.emplace(sk, spin_control_efficiency(s)).first;
        }
        eta_sc = it->second;
      }

      const EfficiencyResult eff = compose(eta_oc, eta_sc, cfg.eta_afc, cfg.eta_spin);
      SweepRow& row = result.rows[i];
      row.value = spec.values[i];
      row.eta_oc = eff.eta_oc;
      row.eta_sc = eff.eta_sc;
      row.eta_opt_spin = eff.eta_opt_spin;
      row.eta_tot = eff.eta_tot;
      row.control_waist = cfg.control_waist;
    } catch (const ModelError&) {
      rethrow_annotated(" [" + std::string(to_string(spec.parameter)) + " = " +
                        fmt17(spec.values[i]) + "]");
    }
  }
  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

WaistOptimum optimize_control_waist(const ModelConfig& base, double theta, WaistBounds bounds) {
  if (!(bounds.min > 0.0 && bounds.max > bounds.min)) {
    throw ParameterError("waist bounds must satisfy 0 < min < max");
  }
  ModelConfig cfg = base;
  cfg.rabi_scaling = true;
  cfg.angle = theta;
  cfg.control_waist = bounds.min;
  cfg.validate();
  const RabiEfficiencyCurve curve(cfg.optical(), cfg.control_peak_rabi());

  auto objective = [&](double waist) {
    ModelConfig c = cfg;
    c.control_waist = waist;
    const double eta = eta_oc_with(c.optical(), curve, theta);
    return eta * eta;
  };

  constexpr int kCoarse = 12;
  std::vector<double> waists(kCoarse);
  std::vector<double> values(kCoarse);
  const double ratio = std::log(bounds.max / bounds.min) / (kCoarse - 1);
  for (int i = 0; i < kCoarse; ++i) {
    waists[i] = bounds.min * std::exp(ratio * i);
    values[i] = objective(waists[i]);
  }
  const auto best = static_cast<int>(std::max_element(values.begin(), values.end()) - values.begin());
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  if (*hi - *lo < 1e-12) {
    throw OptimizationError("control-waist objective is flat over the bounds");
  }
  if (best == 0 || best == kCoarse - 1) {
    throw OptimizationError("no interior maximum of the control-waist objective within bounds");
  }
  const auto [waist, value] = golden_maximize(objective, waists[best - 1], waists[best + 1], 1e-6);
  if (value < values[best]) {
    return {waists[best], values[best]};
  }
  return {waist, value};
}

std::vector<ProfileRow> emit_mode_profiles(const ModelConfig& cfg, double theta, double y, double z,
                                           std::size_t points) {
  cfg.validate();
  if (points < 2) {
    throw ParameterError("profile needs at least two points");
  }
  const OpticalControlConfig o = cfg.optical();
  const RabiEfficiencyCurve curve(o, o.peak_rabi);
  const double shift = z * std::tan(theta);
  const double w_in = beam_radius(o.input, z);
  const double w_c = beam_radius(o.control, z);
  const double half = std::abs(shift) + 3.0 * std::max(w_in, w_c);
  std::vector<ProfileRow> rows(points);
  for (std::size_t i = 0; i < points; ++i) {
    const double x = -half + 2.0 * half * static_cast<double>(i) / static_cast<double>(points - 1);
    const double xi = x + shift;
    ProfileRow& row = rows[i];
    row.x = x;
    row.input_intensity = std::exp(-2.0 * (xi * xi + y * y) / (w_in * w_in));
    row.control_intensity = std::exp(-2.0 * (x * x + y * y) / (w_c * w_c));
    row.efficiency = curve(control_rabi(o.control, o.peak_rabi, std::hypot(x, y), z));
  }
  return rows;
}

double curve_fwhm(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 3) {
    throw ParameterError("curve_fwhm needs matching arrays of at least three samples");
  }
  const auto peak = static_cast<std::size_t>(std::max_element(y.begin(), y.end()) - y.begin());
  const double half = 0.5 * y[peak];
  auto crossing = [&](std::size_t a, std::size_t b) {
    return x[a] + (half - y[a]) * (x[b] - x[a]) / (y[b] - y[a]);
  };
  std::optional<double> left;
  for (std::size_t i = peak; i > 0; --i) {
    if (y[i - 1] < half) {
      left = crossing(i - 1, i);
      break;
    }
  }
  std::optional<double> right;
  for (std::size_t i = peak; i + 1 < y.size(); ++i) {
    if (y[i + 1] < half) {
      right = crossing(i, i + 1);
      break;
    }
  }
  if (!left || !right) {
    throw ParameterError("curve does not fall below half maximum on both sides");
  }
  return *right - *left;
}

namespace {

std::vector<double> linspace(double a, double b, std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) {
    v[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  return v;
}

}  // namespace

SweepSpec make_preset(std::string_view name, ModelConfig& cfg) {
  SweepSpec s;
  if (name == "fig3a") {
    s.parameter = SweepParameter::control_waist;
    s.values = linspace(um(20), um(300), 29);
    cfg.optical_mode = EvaluationMode::analytical;
    s.optical_only = true;
  } else if (name == "fig3b") {
    s.parameter = SweepParameter::input_waist;
    s.values = linspace(um(20), um(60), 9);
    cfg.control_waist = um(120);
    cfg.optical_mode = EvaluationMode::analytical;
    s.optical_only = true;
  } else if (name == "fig4a") {
    s.parameter = SweepParameter::rf_chirp_span;
    s.values = linspace(khz(100), khz(600), 21);
    cfg.optical_mode = EvaluationMode::analytical;
  } else if (name == "fig4b") {
    s.parameter = SweepParameter::storage_time;
    s.values = {us(50),  us(100), us(200),  us(300),  us(400),  us(500),
                us(700), us(1000), us(2000), us(3000), us(5000)};
    s.storage_time_tc_rule = true;
    cfg.optical_mode = EvaluationMode::analytical;
  } else if (name == "fig5") {
    s.parameter = SweepParameter::optical_duration;
    s.values = linspace(us(2), us(30), 29);
    cfg.optical_mode = EvaluationMode::bloch;
  } else if (name == "fig6") {
    s.parameter = SweepParameter::input_detuning;
    s.values = linspace(mhz(-1.2), mhz(1.2), 49);
    cfg.optical_mode = EvaluationMode::bloch;
  } else if (name == "fig7") {
    s.parameter = SweepParameter::angle;
    s.values = linspace(0.0, deg(2.0), 9);
    cfg.control_waist = um(120);
    cfg.optical_mode = EvaluationMode::analytical;
  } else if (name == "fig8") {
    s.parameter = SweepParameter::crystal_length;
    s.values = {mm(2.5), mm(5.0), mm(12.5)};
    s.input_waist_from_length = true;
    s.optimize_control_waist = true;
    s.optical_only = true;
    cfg.angle = deg(1.0);
    cfg.optical_mode = EvaluationMode::analytical;
  } else if (name == "fig9") {
    throw ParameterError("fig9 is a profile preset; use the profiles subcommand");
  } else {
    throw ParameterError("unknown preset '" + std::string(name) + "'");
  }
  return s;
}

std::vector<std::string> preset_names() {
  return {"fig3a", "fig3b", "fig4a", "fig4b", "fig5", "fig6", "fig7", "fig8", "fig9"};
}

}  // namespace afc
