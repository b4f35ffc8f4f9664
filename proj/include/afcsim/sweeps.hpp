#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "afcsim/model.hpp"

namespace afc {

enum class SweepParameter {
  control_waist,
  input_waist,
  rf_chirp_span,
  storage_time,
  optical_duration,
  input_detuning,
  angle,
  crystal_length,
};

std::string_view to_string(SweepParameter p);
SweepParameter parse_sweep_parameter(std::string_view name);
/// Unit of SweepRow::value as written to CSV ("m", "Hz", "s", "deg").
std::string_view value_unit(SweepParameter p);
/// Converts an internal SI value (rad/s, rad) to the CSV unit.
double to_output_unit(SweepParameter p, double value);

struct WaistBounds {
  double min = 10e-6;
  double max = 500e-6;
};

struct SweepSpec {
  SweepParameter parameter = SweepParameter::control_waist;
  std::vector<double> values;  ///< SI units, rad/s for frequencies, rad for angles
  ModelConfig base;
  bool rabi_waist_scaling = true;
  bool storage_time_tc_rule = false;
  bool input_waist_from_length = false;
  /// Re-optimize the control waist at every grid value (crystal-length study).
  bool optimize_control_waist = false;
  WaistBounds waist_bounds;
  /// Skip the spin pulse (eta_SC = 1), for studies of the optical factor alone.
  bool optical_only = false;

  void validate() const;
};

struct SweepRow {
  double value = 0.0;
  double eta_oc = 0.0;
  double eta_sc = 0.0;
  double eta_opt_spin = 0.0;
  std::optional<double> eta_tot;
  double control_waist = 0.0;  ///< waist used for this row
};

struct SweepResult {
  SweepParameter parameter = SweepParameter::control_waist;
  std::vector<SweepRow> rows;
  EvaluationMode mode = EvaluationMode::bloch;
  GridResolution grid;
  double wall_seconds = 0.0;
};

/// Row configuration after applying the coupling rules for one grid value.
ModelConfig configure_row(const SweepSpec& spec, double value);

SweepResult run_sweep(const SweepSpec& spec);

struct WaistOptimum {
  double waist = 0.0;
  double eta_oc_squared = 0.0;
};

/// Maximizes eta_OC^2 over the control waist with the 1/w Rabi rule: 12 log-spaced
/// samples followed by golden-section refinement to 1 um.
WaistOptimum optimize_control_waist(const ModelConfig& base, double theta, WaistBounds bounds = {});

struct ProfileRow {
  double x = 0.0;
  double input_intensity = 0.0;    ///< peak-normalized
  double control_intensity = 0.0;  ///< peak-normalized
  double efficiency = 0.0;
};

/// Transverse cut along x at (y, z) in the control-beam frame. The input axis sits at
/// x = -z tan(theta).
std::vector<ProfileRow> emit_mode_profiles(const ModelConfig& cfg, double theta, double y, double z,
                                           std::size_t points = 401);

/// Full width at half maximum of a sampled curve, by linear interpolation of the crossings.
double curve_fwhm(const std::vector<double>& x, const std::vector<double>& y);

/// Named sweep reproducing one figure. Mutates `cfg` with the figure's fixed settings
/// (e.g. control waist) and returns the spec skeleton; callers set spec.base afterwards.
SweepSpec make_preset(std::string_view name, ModelConfig& cfg);
std::vector<std::string> preset_names();

}  // namespace afc
