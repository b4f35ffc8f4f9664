#pragma once

#include <cstddef>

#include "afcsim/bloch.hpp"
#include "afcsim/pulses.hpp"
#include "afcsim/spectral.hpp"

namespace afc {

/// Resonant RF circuit; all frequencies absolute, in rad/s.
struct RfCircuit {
  double resonance = 0.0;
  double fwhm = 0.0;
  double peak_rabi = 0.0;

  void validate() const;
};

/// Lorentzian Rabi response of the circuit at drive frequency omega.
double circuit_rabi(const RfCircuit& circuit, double omega);

enum class CircuitFilterMode {
  /// Amplitude follows the circuit response at the instantaneous chirp frequency.
  instantaneous,
  /// Each spin sees a constant amplitude set by the response at its own frequency.
  static_detuning,
};

const char* to_string(CircuitFilterMode mode);

struct SpinControlConfig {
  RfCircuit circuit;
  HshParams pulse;  ///< peak_rabi inside is ignored; the circuit sets it
  /// Inhomogeneous line, with detunings measured from the spin transition frequency.
  GaussianSpectrum line;
  double transition_frequency = 0.0;
  double pulse_center = 0.0;  ///< carrier frequency of the RF pulse
  CircuitFilterMode filter_mode = CircuitFilterMode::instantaneous;
  std::size_t spectral_nodes = kDefaultSpectralNodes;
  BlochOptions bloch;

  void validate() const;
};

/// Spectrally averaged inversion efficiency of one RF control pulse (spatially uniform field).
double spin_control_efficiency(const SpinControlConfig& cfg);

}  // namespace afc
