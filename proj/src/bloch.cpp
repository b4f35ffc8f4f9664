#include "afcsim/bloch.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "afcsim/errors.hpp"
#include "afcsim/units.hpp"

namespace afc {

namespace {

using State = std::array<double, 3>;

struct Rhs {
  const PulseWaveform& pulse;
  double atom_detuning;
  double decay;
  double dephasing;

  State operator()(double t, const State& y) const {
    const double d = atom_detuning - pulse.chirp_detuning(t);
    const double o = pulse.amplitude(t);
    return {-d * y[1] - dephasing * y[0],
            d * y[0] + o * y[2] - dephasing * y[1],
            -o * y[1] - decay * (y[2] + 1.0)};
  }
};

// Upper bound on the fastest angular rate seen during the pulse.
double max_rate(const PulseWaveform& pulse, double atom_detuning) {
  double rate = 0.0;
  constexpr int kSamples = 257;
  for (int i = 0; i < kSamples; ++i) {
    const double t = pulse.duration() * i / (kSamples - 1);
    const double d = atom_detuning - pulse.chirp_detuning(t);
    rate = std::max(rate, std::hypot(d, pulse.amplitude(t)));
  }
  return rate;
}

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

State axpy(const State& y, double h, std::initializer_list<std::pair<double, const State*>> terms) {
  State out = y;
  for (const auto& [coef, k] : terms) {
    for (int i = 0; i < 3; ++i) {
      out[i] += h * coef * (*k)[i];
    }
  }
  return out;
}

State integrate_dopri5(const Rhs& f, State y, double t0, double t1, const BlochOptions& opt,
                       double rate) {
  double t = t0;
  double h = std::min(t1 - t0, 0.05 / std::max(rate, 1.0 / (t1 - t0)));
  State k1 = f(t, y);
  while (t < t1) {
    if (t + h > t1) {
      h = t1 - t;
    }
    const State k2 = f(t + c2 * h, axpy(y, h, {{a21, &k1}}));
    const State k3 = f(t + c3 * h, axpy(y, h, {{a31, &k1}, {a32, &k2}}));
    const State k4 = f(t + c4 * h, axpy(y, h, {{a41, &k1}, {a42, &k2}, {a43, &k3}}));
    const State k5 = f(t + c5 * h, axpy(y, h, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
    const State k6 =
        f(t + h, axpy(y, h, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
    const State y_new = axpy(y, h, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
    const State k7 = f(t + h, y_new);

    double err = 0.0;
    for (int i = 0; i < 3; ++i) {
      const double e =
          h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      const double scale = opt.abs_tol + opt.rel_tol * std::max(std::abs(y[i]), std::abs(y_new[i]));
      err = std::max(err, std::abs(e) / scale);
    }

    if (err <= 1.0) {
      t += h;
      y = y_new;
      k1 = k7;
      const double grow = err == 0.0 ? 5.0 : std::min(5.0, 0.9 * std::pow(err, -0.2));
      h *= grow;
    } else {
      h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
      if (h < opt.min_step) {
        throw IntegrationError("Bloch integration step underflow at t = " + std::to_string(t) + " s",
                               t);
      }
    }
  }
  return y;
}

State integrate_rk4(const Rhs& f, State y, double t0, double t1, const BlochOptions& opt,
                    double rate) {
  const double period = rate > 0.0 ? kTwoPi / rate : (t1 - t0);
  const double max_step = opt.fixed_step_fraction * period;
  const auto steps = static_cast<long>(std::ceil((t1 - t0) / max_step));
  const double h = (t1 - t0) / static_cast<double>(std::max(1L, steps));
  double t = t0;
  for (long i = 0; i < std::max(1L, steps); ++i) {
    const State k1 = f(t, y);
    const State k2 = f(t + 0.5 * h, axpy(y, h, {{0.5, &k1}}));
    const State k3 = f(t + 0.5 * h, axpy(y, h, {{0.5, &k2}}));
    const State k4 = f(t + h, axpy(y, h, {{1.0, &k3}}));
    y = axpy(y, h, {{1.0 / 6, &k1}, {1.0 / 3, &k2}, {1.0 / 3, &k3}, {1.0 / 6, &k4}});
    t = t0 + h * static_cast<double>(i + 1);
  }
  return y;
}

}  // namespace

double BlochVector::norm() const { return std::sqrt(u * u + v * v + w * w); }

BlochVector propagate(const PulseWaveform& pulse, double atom_detuning, const BlochVector& initial,
                      const BlochOptions& options) {
  if (std::abs(initial.norm() - 1.0) > 1e-9) {
    throw ParameterError("Bloch propagation needs a unit initial vector");
  }
  const Rhs f{pulse, atom_detuning, options.population_decay_rate, options.dephasing_rate};
  const double rate = max_rate(pulse, atom_detuning);
  State y{initial.u, initial.v, initial.w};
  const auto cuts = pulse.segment_boundaries();
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    y = options.method == BlochOptions::Method::fixed_rk4
            ? integrate_rk4(f, y, cuts[i], cuts[i + 1], options, rate)
            : integrate_dopri5(f, y, cuts[i], cuts[i + 1], options, rate);
  }
  return {y[0], y[1], y[2]};
}

double inversion_efficiency(const PulseWaveform& pulse, double atom_detuning,
                            const BlochOptions& options) {
  const BlochVector r = propagate(pulse, atom_detuning, BlochVector::ground(), options);
  const double eff = 0.5 * (1.0 + r.w);
  if (eff < -1e-8 || eff > 1.0 + 1e-8) {
    throw IntegrationError("inversion efficiency outside [0, 1] beyond tolerance", pulse.duration());
  }
  return std::clamp(eff, 0.0, 1.0);
}

}  // namespace afc
