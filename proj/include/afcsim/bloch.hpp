#pragma once

#include "afcsim/pulses.hpp"

namespace afc {

/// Bloch vector of a two-level atom; w is the population inversion.
struct BlochVector {
  double u = 0.0;
  double v = 0.0;
  double w = -1.0;

  double norm() const;
  static constexpr BlochVector ground() { return {0.0, 0.0, -1.0}; }
};

struct BlochOptions {
  enum class Method { adaptive_dopri5, fixed_rk4 };

  Method method = Method::adaptive_dopri5;
  double rel_tol = 1e-10;
  double abs_tol = 1e-10;
  /// Smallest step the adaptive integrator accepts before giving up, in seconds.
  double min_step = 1e-16;
  /// Fixed-step mode uses this fraction of the fastest rotation period.
  double fixed_step_fraction = 1.0 / 50.0;
  /// Relaxation rates 1/T1 and 1/T2 (s^-1). Zero means no relaxation.
  double population_decay_rate = 0.0;
  double dephasing_rate = 0.0;
};

/// Integrates du/dt = -D v, dv/dt = D u + W w, dw/dt = -W v over the pulse,
/// with D = atom_detuning - chirp(t) and W = amplitude(t).
BlochVector propagate(const PulseWaveform& pulse, double atom_detuning, const BlochVector& initial,
                      const BlochOptions& options = {});

/// (1 + w_final) / 2 starting from the ground state.
double inversion_efficiency(const PulseWaveform& pulse, double atom_detuning,
                            const BlochOptions& options = {});

}  // namespace afc
