#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "afcsim/beams.hpp"
#include "afcsim/bloch.hpp"
#include "afcsim/pulses.hpp"
#include "afcsim/quadrature.hpp"
#include "afcsim/spectral.hpp"

namespace afc {

enum class EvaluationMode { bloch, analytical };

const char* to_string(EvaluationMode mode);

struct GridResolution {
  std::size_t radial_nodes = 64;
  std::size_t z_nodes = 41;
  std::size_t cartesian_nodes = 81;
  std::size_t spectral_nodes = kDefaultSpectralNodes;
  /// Uniform Rabi samples used to tabulate Bloch efficiencies; 0 evaluates every node directly.
  std::size_t rabi_table_nodes = 129;
};

/// Everything needed to evaluate the single optical control pulse efficiency.
struct OpticalControlConfig {
  GaussianBeam control;
  double peak_rabi = 0.0;  ///< Omega_c^0 at the control waist, rad/s
  HshParams pulse;         ///< peak_rabi inside is replaced by the local value
  GaussianBeam input;
  GaussianSpectrum spectrum;
  CrystalGeometry crystal;
  EvaluationMode mode = EvaluationMode::bloch;
  GridResolution grid;
  BlochOptions bloch;

  void validate() const;
};

/// Spectrally averaged single-pulse efficiency for an atom driven at `local_rabi`.
double local_efficiency(const OpticalControlConfig& cfg, double local_rabi);

/// Local efficiency as a function of Rabi frequency on [0, max_rabi].
///
/// In bloch mode with a nonzero table size the curve is sampled once and spline
/// interpolated, so every spatial point reuses the same Bloch runs.
class RabiEfficiencyCurve {
 public:
  RabiEfficiencyCurve(const OpticalControlConfig& cfg, double max_rabi);

  double operator()(double local_rabi) const;
  double max_rabi() const { return max_rabi_; }

 private:
  OpticalControlConfig cfg_;
  double max_rabi_;
  bool tabulated_ = false;
  CubicSpline table_;
};

/// Spectrally averaged efficiency on a (z, r) grid. Values are stored z-major.
class RadialEfficiencyMap {
 public:
  RadialEfficiencyMap(std::vector<double> r_grid, std::vector<double> z_grid,
                      std::vector<double> values);

  const std::vector<double>& r_grid() const { return r_; }
  const std::vector<double>& z_grid() const { return z_; }
  double r_max() const { return r_.back(); }
  double at(std::size_t iz, std::size_t ir) const { return values_[iz * r_.size() + ir]; }
  /// Cubic interpolation in r within slab iz.
  double interpolate(std::size_t iz, double r) const;

  /// CSV rows (r_m, z_m, eta).
  void write_csv(std::ostream& out) const;

 private:
  std::vector<double> r_;
  std::vector<double> z_;
  std::vector<double> values_;
  std::vector<CubicSpline> rows_;
};

/// Truncation radius of the radial average: 3 times the largest input radius in the crystal.
double input_truncation_radius(const OpticalControlConfig& cfg);

/// Largest transverse offset between the modes inside the crystal at angle theta.
double max_displacement(const OpticalControlConfig& cfg, double theta);

/// Builds the map out to the radius needed for crossed beams up to `max_theta`.
RadialEfficiencyMap radial_efficiency_map(const OpticalControlConfig& cfg, double max_theta = 0.0);
RadialEfficiencyMap radial_efficiency_map(const OpticalControlConfig& cfg,
                                          const RabiEfficiencyCurve& curve, double max_theta = 0.0);

/// Co-linear single-pulse efficiency eta_OC: input-intensity weighted r-z average.
double radial_average(const RadialEfficiencyMap& map, const OpticalControlConfig& cfg);

/// Crossed-beam eta_OC: the control axis is displaced by z*tan(theta) along x relative
/// to the input axis, and the map is interpolated on a Cartesian grid.
double crossed_beam_average(const RadialEfficiencyMap& map, double theta,
                            const OpticalControlConfig& cfg);

/// Convenience: builds the map and averages, dispatching on theta.
double optical_control_efficiency(const OpticalControlConfig& cfg, double theta = 0.0);

}  // namespace afc
