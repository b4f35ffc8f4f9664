#pragma once

#include <optional>
#include <string>

#include "afcsim/bloch.hpp"
#include "afcsim/efficiency.hpp"
#include "afcsim/pulses.hpp"
#include "afcsim/spatial.hpp"
#include "afcsim/spincontrol.hpp"

namespace afc {

/// Full parameter set of the storage model. Frequencies rad/s, lengths m, times s, angles rad.
/// Defaults are the nominal experimental parameters.
struct ModelConfig {
  // Crystal and input mode
  double crystal_length = 12.5e-3;
  double wavelength = 580e-9;
  double input_waist = 34e-6;
  bool input_waist_from_length = false;
  double input_spectrum_fwhm = 0.0;  ///< set from input_duration_fwhm when zero
  double input_duration_fwhm = 4e-6;
  double input_detuning = 0.0;

  // Optical control
  double control_waist = 60e-6;
  double reference_rabi = 0.0;  ///< Omega_c^0 measured at reference_waist
  double reference_waist = 60e-6;
  bool rabi_scaling = true;
  HshParams optical_pulse;
  double angle = 0.0;
  EvaluationMode optical_mode = EvaluationMode::bloch;

  // Spin control
  RfCircuit circuit;
  HshParams spin_pulse;
  double spin_linewidth = 0.0;
  double spin_transition = 0.0;
  double spin_pulse_center = 0.0;
  CircuitFilterMode filter_mode = CircuitFilterMode::instantaneous;
  double storage_time = 500e-6;

  // Composition inputs
  std::optional<double> eta_afc;
  double eta_spin = 1.0;

  GridResolution grid;
  BlochOptions bloch;

  /// The nominal parameter set.
  static ModelConfig defaults();

  double resolved_input_waist() const;
  double resolved_spectrum_fwhm() const;
  /// Omega_c^0 at control_waist, applying the fixed-power 1/w rule when enabled.
  double control_peak_rabi() const;

  OpticalControlConfig optical() const;
  SpinControlConfig spin() const;

  void validate() const;
};

/// eta_OC for the configuration's angle.
double evaluate_optical(const ModelConfig& cfg);
double evaluate_spin(const ModelConfig& cfg);
/// Full composition: eta_OC, eta_SC, eta_opt_spin and eta_tot when eta_afc is set.
EfficiencyResult simulate(const ModelConfig& cfg);

}  // namespace afc
