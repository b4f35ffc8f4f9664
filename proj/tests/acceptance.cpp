// Acceptance gate: one PASS/FAIL line per criterion. Exit status is the number of failures.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "afcsim/beams.hpp"
#include "afcsim/bloch.hpp"
#include "afcsim/efficiency.hpp"
#include "afcsim/model.hpp"
#include "afcsim/spectral.hpp"
#include "afcsim/sweeps.hpp"
#include "afcsim/units.hpp"

using namespace afc;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Largest | |r| - 1 | over every Bloch vector this program propagates directly.
double g_norm_dev = 0.0;

BlochVector tracked(const PulseWaveform& p, double delta) {
  const BlochVector r = propagate(p, delta, BlochVector::ground());
  g_norm_dev = std::max(g_norm_dev, std::abs(r.norm() - 1.0));
  return r;
}

double rabi_w(double rabi, double detuning, double t) {
  const double g = std::sqrt(rabi * rabi + detuning * detuning);
  const double s = std::sin(0.5 * g * t);
  return -1.0 + 2.0 * rabi * rabi / (g * g) * s * s;
}

Outcome c1_rabi_oracle() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  int n = 0;
  for (double f : {10.0, 100.0, 500.0}) {
    for (double d : {0.0, 50.0, -50.0, 300.0, -300.0}) {
      for (double t : {1.0, 5.0, 20.0}) {
        const BlochVector r = tracked(PulseWaveform::square(khz(f), us(t), 0.0), khz(d));
        worst = std::max(worst, std::abs(r.w - rabi_w(khz(f), khz(d), us(t))));
        ++n;
      }
    }
  }
  const double dt = seconds_since(t0);
  return {n == 45 && worst < 1e-6 && dt < 5.0,
          fmt("%d points, max |w - oracle| = %.3g (< 1e-6), %.3f s (< 5 s)", n, worst, dt)};
}

Outcome c3_adiabatic() {
  const ModelConfig m = ModelConfig::defaults();
  double worst = 0.0, worst_on = 0.0;
  for (double f : {100.0, 200.0, 400.0, 532.0, 600.0}) {
    HshParams p{khz(f), us(60), 0.7, mhz(1.5), 5.3};
    const PulseWaveform w = PulseWaveform::hsh(p);
    const double eq = analytical_hsh_efficiency(p.peak_rabi, p.square_duration(), p.chirp_span);
    // Resonant atom, and the input-spectrum average at the beam center.
    const double on = 0.5 * (1.0 + tracked(w, 0.0).w);
    const QuadratureRule rule = spectral_rule({m.resolved_spectrum_fwhm(), 0.0});
    double avg = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i) {
      avg += rule.weights[i] * 0.5 * (1.0 + tracked(w, rule.nodes[i]).w);
    }
    worst_on = std::max(worst_on, std::abs(on - eq));
    worst = std::max(worst, std::abs(avg - eq));
  }
  return {worst < 0.01 && worst_on < 0.01,
          fmt("max |bloch - analytical| = %.3g resonant, %.3g spectrally averaged (< 0.01)", worst_on,
              worst)};
}

Outcome c2_norm() {
  // Nominal optical and spin pulses over their spectral nodes, on top of the C1 and C3 runs.
  const ModelConfig m = ModelConfig::defaults();
  const OpticalControlConfig o = m.optical();
  const PulseWaveform optical = PulseWaveform::hsh(o.pulse);
  for (double delta : spectral_rule(o.spectrum).nodes) {
    tracked(optical, delta);
    tracked(optical.with_peak_rabi(0.3 * o.peak_rabi), delta);
  }
  const SpinControlConfig s = m.spin();
  const PulseWaveform spin = PulseWaveform::hsh(s.pulse).with_filter(
      {s.circuit.resonance - s.pulse_center, s.circuit.fwhm});
  for (double delta : spectral_rule(s.line).nodes) {
    tracked(spin, delta);
  }
  return {g_norm_dev < 1e-8, fmt("max ||r| - 1| = %.3g over all direct propagations (< 1e-8)", g_norm_dev)};
}

Outcome c4_waist() {
  const double w = optimal_input_waist(mm(12.5), nm(580));
  const GaussianBeam b{w, nm(580), 0.0};
  const double zr_rel = std::abs(b.rayleigh_length() - mm(6.25)) / mm(6.25);
  return {std::abs(w - um(33.97)) < um(0.05) && zr_rel < 1e-12,
          fmt("w0 = %.4f um (33.97 +- 0.05), |z_R - L/2|/(L/2) = %.2g", w * 1e6, zr_rel)};
}

SweepResult preset(const std::string& name, std::function<void(ModelConfig&)> tweak = {}) {
  ModelConfig m = ModelConfig::defaults();
  SweepSpec s = make_preset(name, m);
  if (tweak) {
    tweak(m);
  }
  s.base = m;
  return run_sweep(s);
}

Outcome c5_chirp_sweep() {
  const auto t0 = std::chrono::steady_clock::now();
  const SweepResult r = preset("fig4a");
  const auto best = std::max_element(r.rows.begin(), r.rows.end(), [](auto& a, auto& b) {
    return a.eta_opt_spin < b.eta_opt_spin;
  });
  const double peak = best->eta_opt_spin, at = to_hz(best->value) / 1e3;
  const double dt = seconds_since(t0);
  return {peak >= 0.94 && peak <= 0.98 && at >= 250 && at <= 400 && dt < 300,
          fmt("peak eta_opt_spin = %.4f in [0.94, 0.98] at %.0f kHz in [250, 400], %.1f s", peak, at, dt)};
}

bool non_monotonic(const std::vector<double>& y) {
  bool up = false, down = false;
  for (std::size_t i = 1; i < y.size(); ++i) {
    up = up || y[i] > y[i - 1] + 1e-6;
    down = down || y[i] < y[i - 1] - 1e-6;
  }
  return up && down;
}

Outcome c6_duration_plateau() {
  const SweepResult bloch = preset("fig5");
  const SweepResult analytical = preset("fig5", [](ModelConfig& m) {
    m.optical_mode = EvaluationMode::analytical;
  });
  double sum = 0.0;
  int n = 0;
  std::vector<double> short_b, short_a;
  for (std::size_t i = 0; i < bloch.rows.size(); ++i) {
    const double tc = bloch.rows[i].value;
    if (tc >= us(10) - 1e-12 && tc <= us(20) + 1e-12) {
      sum += bloch.rows[i].eta_opt_spin;
      ++n;
    }
    if (tc < us(8)) {
      short_b.push_back(bloch.rows[i].eta_opt_spin);
      short_a.push_back(analytical.rows[i].eta_opt_spin);
    }
  }
  const double mean = sum / n;
  const bool osc_b = non_monotonic(short_b), osc_a = non_monotonic(short_a);
  return {mean >= 0.93 && mean <= 0.98 && osc_b && !osc_a,
          fmt("plateau mean (10-20 us, %d pts) = %.4f in [0.93, 0.98]; below 8 us bloch %s, "
              "analytical %s",
              n, mean, osc_b ? "non-monotonic" : "monotonic", osc_a ? "non-monotonic" : "monotonic")};
}

Outcome c7_bandwidth() {
  const SweepResult r = preset("fig6");
  std::vector<double> x, y;
  for (const auto& row : r.rows) {
    x.push_back(row.value);
    y.push_back(row.eta_opt_spin);
  }
  const double f = to_hz(curve_fwhm(x, y)) / 1e6;
  return {std::abs(f - 1.33) <= 0.10, fmt("FWHM = %.4f MHz (1.33 +- 0.10)", f)};
}

double eta_oc_sq(double waist, double theta) {
  ModelConfig m = ModelConfig::defaults();
  m.optical_mode = EvaluationMode::analytical;
  m.control_waist = waist;
  m.angle = theta;
  return std::pow(evaluate_optical(m), 2);
}

Outcome c8_crossed_waist() {
  ModelConfig m = ModelConfig::defaults();
  m.optical_mode = EvaluationMode::analytical;
  const double delta = eta_oc_sq(um(160), deg(2)) - eta_oc_sq(um(120), deg(2));
  const WaistOptimum w = optimize_control_waist(m, deg(2));
  return {std::abs(delta - 0.05) <= 0.02 && std::abs(w.waist - um(160)) <= um(20),
          fmt("eta(160 um) - eta(120 um) = %+.4f (+0.05 +- 0.02); w_opt(2 deg) = %.1f um (160 +- 20)",
              delta, w.waist * 1e6)};
}

Outcome c9_waist_properties() {
  ModelConfig m = ModelConfig::defaults();
  m.optical_mode = EvaluationMode::analytical;
  std::vector<WaistOptimum> opt;
  for (double a : {0.0, 0.5, 1.0}) {
    opt.push_back(optimize_control_waist(m, deg(a)));
  }
  const bool waist_ok = opt[1].waist >= opt[0].waist && opt[2].waist >= opt[1].waist;
  const bool peak_ok = opt[1].eta_oc_squared <= opt[0].eta_oc_squared &&
                       opt[2].eta_oc_squared <= opt[1].eta_oc_squared;
  const SweepResult b = preset("fig3b");
  double lo = 1.0, hi = 0.0;
  for (const auto& row : b.rows) {
    lo = std::min(lo, row.eta_opt_spin);
    hi = std::max(hi, row.eta_opt_spin);
  }
  return {waist_ok && peak_ok && hi - lo < 0.02,
          fmt("w_opt = %.1f/%.1f/%.1f um, peak = %.4f/%.4f/%.4f at 0/0.5/1 deg; "
              "3b spread = %.4f (< 0.02)",
              opt[0].waist * 1e6, opt[1].waist * 1e6, opt[2].waist * 1e6, opt[0].eta_oc_squared,
              opt[1].eta_oc_squared, opt[2].eta_oc_squared, hi - lo)};
}

Outcome c10_consistency() {
  const OpticalControlConfig o = ModelConfig::defaults().optical();
  const RadialEfficiencyMap map = radial_efficiency_map(o);
  const double radial = radial_average(map, o), crossed = crossed_beam_average(map, 0.0, o);
  return {std::abs(radial - crossed) < 1e-3,
          fmt("bloch mode: radial %.6f, cartesian %.6f, diff %.2g (< 1e-3)", radial, crossed,
              std::abs(radial - crossed))};
}

Outcome c11_afc_fit() {
  const AfcDecayParams truth{0.194, us(116)};
  std::vector<DecayPoint> pts;
  for (double d : {3.0, 10.0, 20.0, 30.0}) {
    pts.push_back({us(d), afc_decay(truth, us(d))});
  }
  const AfcFit f = fit_afc_decay(pts);
  const double e_eta = std::abs(f.params.eta0 / truth.eta0 - 1.0);
  const double e_t2 = std::abs(f.params.t2_afc / truth.t2_afc - 1.0);
  const std::vector<DecayPoint> two{{us(3), 0.179}, {us(30), 0.074}};
  const AfcFit g = fit_afc_decay(two);
  const double t2 = g.params.t2_afc * 1e6, eta0 = g.params.eta0;
  return {e_eta < 1e-6 && e_t2 < 1e-6 && std::abs(t2 / 116 - 1) < 0.10 && std::abs(eta0 / 0.194 - 1) < 0.05,
          fmt("roundtrip rel err %.2g/%.2g (< 1e-6); two-point T2 = %.1f us (116 +- 10%%), "
              "eta0 = %.4f (0.194 +- 5%%)",
              e_eta, e_t2, t2, eta0)};
}

Outcome c12_composition() {
  // eta_opt_spin = 0.96 split evenly between the optical and spin factors.
  const double q = std::pow(0.96, 0.25);
  const double tot = compose_total(0.074, q, q, 1.0);
  return {std::abs(tot - 0.071) <= 0.001, fmt("eta_tot = %.5f (0.071 +- 0.001)", tot)};
}

Outcome c13_crystal_length() {
  const SweepResult r = preset("fig8");
  double short_eta = 0.0, long_eta = 0.0;
  for (const auto& row : r.rows) {
    if (std::abs(row.value - mm(2.5)) < 1e-12) short_eta = row.eta_opt_spin;
    if (std::abs(row.value - mm(12.5)) < 1e-12) long_eta = row.eta_opt_spin;
  }
  return {short_eta > long_eta,
          fmt("theta = 1 deg optimized: L = 2.5 mm -> %.4f, L = 12.5 mm -> %.4f", short_eta, long_eta)};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    Outcome (*run)();
  };
  // C2 runs after C1 and C3 so it sees their propagations.
  const Criterion criteria[] = {
      {1, "bloch oracle equivalence", c1_rabi_oracle},
      {3, "adiabatic-limit agreement", c3_adiabatic},
      {2, "norm conservation", c2_norm},
      {4, "optimal input waist", c4_waist},
      {5, "rf chirp sweep peak", c5_chirp_sweep},
      {6, "optical duration plateau", c6_duration_plateau},
      {7, "detuning bandwidth", c7_bandwidth},
      {8, "crossed-beam waist delta", c8_crossed_waist},
      {9, "waist and input-mode properties", c9_waist_properties},
      {10, "crossed/radial consistency", c10_consistency},
      {11, "afc decay fit", c11_afc_fit},
      {12, "total efficiency composition", c12_composition},
      {13, "crystal length property", c13_crystal_length},
  };
  std::vector<std::pair<int, std::string>> lines;
  int failures = 0;
  for (const auto& c : criteria) {
    Outcome o{false, ""};
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += o.pass ? 0 : 1;
    lines.emplace_back(c.id, fmt("C%-2d %s  %s: %s", c.id, o.pass ? "PASS" : "FAIL", c.name, o.detail.c_str()));
  }
  std::sort(lines.begin(), lines.end());
  for (const auto& [id, line] : lines) {
    std::printf("%s\n", line.c_str());
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(lines.size()) - failures, lines.size());
  return failures;
}
