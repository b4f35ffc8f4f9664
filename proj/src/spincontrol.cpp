#include "afcsim/spincontrol.hpp"

#include <algorithm>
#include <vector>

#include "afcsim/errors.hpp"
#include "afcsim/parallel.hpp"

namespace afc {

void RfCircuit::validate() const {
  if (!(fwhm > 0.0)) {
    throw ParameterError("RF circuit FWHM must be > 0");
  }
  if (!(peak_rabi >= 0.0)) {
    throw ParameterError("RF peak Rabi frequency must be >= 0");
  }
}

double circuit_rabi(const RfCircuit& circuit, double omega) {
  const double hw = 0.5 * circuit.fwhm;
  const double d = omega - circuit.resonance;
  return circuit.peak_rabi * hw * hw / (d * d + hw * hw);
}

const char* to_string(CircuitFilterMode mode) {
  return mode == CircuitFilterMode::instantaneous ? "instantaneous" : "static";
}

void SpinControlConfig::validate() const {
  circuit.validate();
  HshParams p = pulse;
  p.peak_rabi = circuit.peak_rabi;
  p.validate();
  if (!(pulse.chirp_span > 0.0)) {
    throw ParameterError("spin pulse chirp span must be > 0");
  }
  line.validate();
  if (spectral_nodes == 0) {
    throw ParameterError("spin spectral node count must be positive");
  }
}

double spin_control_efficiency(const SpinControlConfig& cfg) {
  cfg.validate();
  if (cfg.circuit.peak_rabi == 0.0) {
    return 0.0;
  }
  HshParams p = cfg.pulse;
  p.peak_rabi = cfg.circuit.peak_rabi;
  const PulseWaveform base = PulseWaveform::hsh(p);
  const PulseWaveform filtered =
      base.with_filter({cfg.circuit.resonance - cfg.pulse_center, cfg.circuit.fwhm});
  const double carrier_offset = cfg.pulse_center - cfg.transition_frequency;

  const QuadratureRule rule = spectral_rule(cfg.line, cfg.spectral_nodes);
  std::vector<double> eff(rule.size());
  parallel_for(rule.size(), [&](std::size_t i) {
    const double spin_detuning = rule.nodes[i];
    const double from_carrier = spin_detuning - carrier_offset;
    if (cfg.filter_mode == CircuitFilterMode::instantaneous) {
      eff[i] = inversion_efficiency(filtered, from_carrier, cfg.bloch);
    } else {
      const double rabi = circuit_rabi(cfg.circuit, cfg.transition_frequency + spin_detuning);
      eff[i] = inversion_efficiency(base.with_peak_rabi(rabi), from_carrier, cfg.bloch);
    }
  });
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    sum += rule.weights[i] * eff[i];
  }
  return std::clamp(sum, 0.0, 1.0);
}

}  // namespace afc
