#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

namespace afc {

/// Single-pulse and composed efficiencies of the spin-wave storage sequence.
struct EfficiencyResult {
  double eta_oc = 0.0;
  double eta_sc = 0.0;
  double eta_opt_spin = 0.0;
  std::optional<double> eta_afc;
  double eta_spin = 1.0;
  std::optional<double> eta_tot;
};

/// Two optical and two spin inversions: eta_oc^2 * eta_sc^2.
double compose_opt_spin(double eta_oc, double eta_sc);

/// Total storage efficiency eta_afc * eta_oc^2 * eta_sc^2 * eta_spin.
double compose_total(double eta_afc, double eta_oc, double eta_sc, double eta_spin);

/// Fills eta_opt_spin, and eta_tot when eta_afc is present.
EfficiencyResult compose(double eta_oc, double eta_sc, std::optional<double> eta_afc,
                         double eta_spin = 1.0);

/// Echo efficiency decay eta0 * exp(-k * delay / t2_afc). k = 4 by default.
struct AfcDecayParams {
  double eta0 = 0.0;
  double t2_afc = 0.0;  ///< seconds
  double exponent_factor = 4.0;

  void validate() const;
};

double afc_decay(const AfcDecayParams& params, double delay);

struct DecayPoint {
  double delay = 0.0;  ///< seconds
  double eta = 0.0;
};

struct AfcFit {
  AfcDecayParams params;
  double rms_residual = 0.0;
  int iterations = 0;
};

/// Least-squares fit of afc_decay. Two points are solved exactly; more points start from
/// a log-linear fit and are refined by damped Gauss-Newton on the linear residuals.
AfcFit fit_afc_decay(std::span<const DecayPoint> points, double exponent_factor = 4.0);

/// Reads two-column CSV rows (delay_us, efficiency). Blank, '#' and header lines are skipped.
std::vector<DecayPoint> read_decay_csv(std::istream& in);

}  // namespace afc
