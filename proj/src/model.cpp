#include "afcsim/model.hpp"

#include "afcsim/beams.hpp"
#include "afcsim/errors.hpp"
#include "afcsim/spectral.hpp"
#include "afcsim/units.hpp"

namespace afc {

ModelConfig ModelConfig::defaults() {
  ModelConfig c;
  c.reference_rabi = khz(532);
  c.optical_pulse = {0.0, us(15), 0.7, mhz(1.5), 5.3};
  c.circuit = {mhz(34), khz(190), khz(42)};
  c.spin_pulse = {0.0, us(200), 0.75, khz(350), 5.3};
  c.spin_linewidth = khz(123);
  c.spin_transition = mhz(34);
  c.spin_pulse_center = mhz(34);
  return c;
}

double ModelConfig::resolved_input_waist() const {
  return input_waist_from_length ? optimal_input_waist(crystal_length, wavelength) : input_waist;
}

double ModelConfig::resolved_spectrum_fwhm() const {
  return input_spectrum_fwhm > 0.0 ? input_spectrum_fwhm
                                   : fwhm_from_gaussian_duration(input_duration_fwhm);
}

double ModelConfig::control_peak_rabi() const {
  return rabi_scaling ? rabi_for_waist(reference_rabi, reference_waist, control_waist)
                      : reference_rabi;
}

OpticalControlConfig ModelConfig::optical() const {
  OpticalControlConfig o;
  o.control = {control_waist, wavelength, 0.0};
  o.peak_rabi = control_peak_rabi();
  o.pulse = optical_pulse;
  o.pulse.peak_rabi = o.peak_rabi;
  o.input = {resolved_input_waist(), wavelength, 0.0};
  o.spectrum = {resolved_spectrum_fwhm(), input_detuning};
  o.crystal = {crystal_length};
  o.mode = optical_mode;
  o.grid = grid;
  o.bloch = bloch;
  return o;
}

SpinControlConfig ModelConfig::spin() const {
  SpinControlConfig s;
  s.circuit = circuit;
  s.pulse = spin_pulse;
  s.pulse.peak_rabi = circuit.peak_rabi;
  s.line = {spin_linewidth, 0.0};
  s.transition_frequency = spin_transition;
  s.pulse_center = spin_pulse_center;
  s.filter_mode = filter_mode;
  s.spectral_nodes = grid.spectral_nodes;
  s.bloch = bloch;
  return s;
}

void ModelConfig::validate() const {
  if (!(angle >= 0.0 && angle < kPi / 2)) {
    throw ParameterError("crossed-beam angle must lie in [0, 90) deg");
  }
  if (!(storage_time > 0.0)) {
    throw ParameterError("storage time must be > 0");
  }
  if (eta_afc && !(*eta_afc >= 0.0 && *eta_afc <= 1.0)) {
    throw ParameterError("eta_afc must lie in [0, 1]");
  }
  if (!(eta_spin >= 0.0 && eta_spin <= 1.0)) {
    throw ParameterError("eta_spin must lie in [0, 1]");
  }
  if (!(reference_rabi >= 0.0)) {
    throw ParameterError("control reference Rabi frequency must be >= 0");
  }
  optical().validate();
  spin().validate();
}

double evaluate_optical(const ModelConfig& cfg) {
  return optical_control_efficiency(cfg.optical(), cfg.angle);
}

double evaluate_spin(const ModelConfig& cfg) { return spin_control_efficiency(cfg.spin()); }

EfficiencyResult simulate(const ModelConfig& cfg) {
  cfg.validate();
  return compose(evaluate_optical(cfg), evaluate_spin(cfg), cfg.eta_afc, cfg.eta_spin);
}

}  // namespace afc
