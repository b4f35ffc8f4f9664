#include "afcsim/spatial.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <utility>

#include "afcsim/errors.hpp"
#include "afcsim/parallel.hpp"
#include "afcsim/units.hpp"

namespace afc {

const char* to_string(EvaluationMode mode) {
  return mode == EvaluationMode::bloch ? "bloch" : "analytical";
}

void OpticalControlConfig::validate() const {
  control.validate();
  input.validate();
  crystal.validate();
  spectrum.validate();
  HshParams p = pulse;
  p.peak_rabi = peak_rabi;
  p.validate();
  if (std::abs(control.wavelength - input.wavelength) > 1e-12 * input.wavelength) {
    throw ParameterError("control and input beams must share the wavelength");
  }
  if (mode == EvaluationMode::analytical && !(pulse.chirp_span > 0.0)) {
    throw ParameterError("analytical mode needs a positive optical chirp span");
  }
  if (grid.radial_nodes == 0 || grid.cartesian_nodes == 0 || grid.spectral_nodes == 0) {
    throw ParameterError("grid node counts must be positive");
  }
  if (grid.z_nodes < 3 || grid.z_nodes % 2 == 0) {
    throw ParameterError("grid.z_nodes must be odd and at least 3");
  }
  if (grid.rabi_table_nodes == 1) {
    throw ParameterError("grid.rabi_table_nodes must be 0 or at least 2");
  }
}

double local_efficiency(const OpticalControlConfig& cfg, double local_rabi) {
  if (cfg.mode == EvaluationMode::analytical) {
    return analytical_hsh_efficiency(local_rabi, cfg.pulse.square_duration(), cfg.pulse.chirp_span);
  }
  if (local_rabi <= 0.0) {
    return 0.0;
  }
  HshParams p = cfg.pulse;
  p.peak_rabi = local_rabi;
  const PulseWaveform pulse = PulseWaveform::hsh(p);
  const QuadratureRule rule = spectral_rule(cfg.spectrum, cfg.grid.spectral_nodes);
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    try {
      sum += rule.weights[i] * inversion_efficiency(pulse, rule.nodes[i], cfg.bloch);
    } catch (const IntegrationError& e) {
      char where[160];
      std::snprintf(where, sizeof where, " (local Rabi/2pi = %.6g Hz, detuning/2pi = %.6g Hz)",
                    to_hz(local_rabi), to_hz(rule.nodes[i]));
      throw IntegrationError(e.what() + std::string(where), e.time_reached());
    }
  }
  return std::clamp(sum, 0.0, 1.0);
}

RabiEfficiencyCurve::RabiEfficiencyCurve(const OpticalControlConfig& cfg, double max_rabi)
    : cfg_(cfg), max_rabi_(max_rabi) {
  cfg_.validate();
  const std::size_t n = cfg_.grid.rabi_table_nodes;
  if (cfg_.mode != EvaluationMode::bloch || n < 2 || !(max_rabi > 0.0)) {
    return;
  }
  std::vector<double> rabi(n);
  std::vector<double> eff(n);
  for (std::size_t k = 0; k < n; ++k) {
    rabi[k] = max_rabi * static_cast<double>(k) / static_cast<double>(n - 1);
  }
  parallel_for(n, [&](std::size_t k) { eff[k] = local_efficiency(cfg_, rabi[k]); });
  table_ = CubicSpline(std::move(rabi), std::move(eff));
  tabulated_ = true;
}

double RabiEfficiencyCurve::operator()(double local_rabi) const {
  if (tabulated_ && local_rabi <= max_rabi_ * (1.0 + 1e-12)) {
    return std::clamp(table_(local_rabi), 0.0, 1.0);
  }
  return local_efficiency(cfg_, local_rabi);
}

RadialEfficiencyMap::RadialEfficiencyMap(std::vector<double> r_grid, std::vector<double> z_grid,
                                         std::vector<double> values)
    : r_(std::move(r_grid)), z_(std::move(z_grid)), values_(std::move(values)) {
  if (r_.size() < 2 || z_.empty() || values_.size() != r_.size() * z_.size()) {
    throw ParameterError("radial efficiency map: inconsistent grid sizes");
  }
  for (double v : values_) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw ParameterError("radial efficiency map: values must lie in [0, 1]");
    }
  }
  rows_.reserve(z_.size());
  for (std::size_t iz = 0; iz < z_.size(); ++iz) {
    std::vector<double> row(values_.begin() + static_cast<long>(iz * r_.size()),
                            values_.begin() + static_cast<long>((iz + 1) * r_.size()));
    rows_.emplace_back(r_, std::move(row));
  }
}

double RadialEfficiencyMap::interpolate(std::size_t iz, double r) const {
  if (r > r_max() * (1.0 + 1e-9)) {
    throw CoverageError("radial map queried beyond its radial extent");
  }
  return std::clamp(rows_[iz](r), 0.0, 1.0);
}

void RadialEfficiencyMap::write_csv(std::ostream& out) const {
  out << "r_m,z_m,eta\n";
  char line[96];
  for (std::size_t iz = 0; iz < z_.size(); ++iz) {
    for (std::size_t ir = 0; ir < r_.size(); ++ir) {
      std::snprintf(line, sizeof line, "%.9g,%.9g,%.9g\n", r_[ir], z_[iz], at(iz, ir));
      out << line;
    }
  }
}

double input_truncation_radius(const OpticalControlConfig& cfg) {
  const double w = std::max(beam_radius(cfg.input, cfg.crystal.z_min()),
                            beam_radius(cfg.input, cfg.crystal.z_max()));
  return 3.0 * std::max(w, cfg.input.waist);
}

double max_displacement(const OpticalControlConfig& cfg, double theta) {
  return 0.5 * cfg.crystal.length * std::abs(std::tan(theta));
}

namespace {

std::vector<double> map_radii(const OpticalControlConfig& cfg, double max_theta) {
  const double r_trunc = input_truncation_radius(cfg);
  const QuadratureRule rule = gauss_legendre(cfg.grid.radial_nodes, 0.0, r_trunc);
  std::vector<double> r;
  r.reserve(rule.size() + 2);
  r.push_back(0.0);
  r.insert(r.end(), rule.nodes.begin(), rule.nodes.end());
  r.push_back(r_trunc);
  const double r_max = r_trunc + max_displacement(cfg, max_theta);
  if (r_max > r_trunc * (1.0 + 1e-12)) {
    const double spacing = r_trunc / static_cast<double>(cfg.grid.radial_nodes);
    const auto extra = static_cast<std::size_t>(std::ceil((r_max - r_trunc) / spacing));
    for (std::size_t i = 1; i <= extra; ++i) {
      r.push_back(r_trunc + (r_max - r_trunc) * static_cast<double>(i) / static_cast<double>(extra));
    }
  }
  return r;
}

void check_z_coverage(const RadialEfficiencyMap& map, const OpticalControlConfig& cfg) {
  const auto& z = map.z_grid();
  const double tol = 1e-9 * cfg.crystal.length;
  if (z.size() < 3 || z.size() % 2 == 0 || std::abs(z.front() - cfg.crystal.z_min()) > tol ||
      std::abs(z.back() - cfg.crystal.z_max()) > tol) {
    throw CoverageError("radial map z grid does not span the crystal on odd uniform nodes");
  }
}

}  // namespace

RadialEfficiencyMap radial_efficiency_map(const OpticalControlConfig& cfg, double max_theta) {
  return radial_efficiency_map(cfg, RabiEfficiencyCurve(cfg, cfg.peak_rabi), max_theta);
}

RadialEfficiencyMap radial_efficiency_map(const OpticalControlConfig& cfg,
                                          const RabiEfficiencyCurve& curve, double max_theta) {
  cfg.validate();
  std::vector<double> r = map_radii(cfg, max_theta);
  const QuadratureRule zrule = simpson(cfg.grid.z_nodes, cfg.crystal.z_min(), cfg.crystal.z_max());
  std::vector<double> values(r.size() * zrule.size());
  parallel_for(zrule.size(), [&](std::size_t iz) {
    const double z = zrule.nodes[iz];
    for (std::size_t ir = 0; ir < r.size(); ++ir) {
      const double rabi = control_rabi(cfg.control, cfg.peak_rabi, r[ir], z);
      try {
        values[iz * r.size() + ir] = curve(rabi);
      } catch (const IntegrationError& e) {
        char where[96];
        std::snprintf(where, sizeof where, " at r = %.6g m, z = %.6g m", r[ir], z);
        throw IntegrationError(e.what() + std::string(where), e.time_reached());
      }
    }
  });
  return RadialEfficiencyMap(std::move(r), zrule.nodes, std::move(values));
}

double radial_average(const RadialEfficiencyMap& map, const OpticalControlConfig& cfg) {
  check_z_coverage(map, cfg);
  const double r_trunc = input_truncation_radius(cfg);
  if (map.r_max() < r_trunc * (1.0 - 1e-9)) {
    throw CoverageError("radial map does not reach 3 input radii");
  }
  const QuadratureRule rrule = gauss_legendre(cfg.grid.radial_nodes, 0.0, r_trunc);
  const QuadratureRule zrule = simpson(map.z_grid().size(), cfg.crystal.z_min(), cfg.crystal.z_max());
  double total = 0.0;
  for (std::size_t iz = 0; iz < zrule.size(); ++iz) {
    const double z = zrule.nodes[iz];
    double slab = 0.0;
    for (std::size_t ir = 0; ir < rrule.size(); ++ir) {
      const double r = rrule.nodes[ir];
      slab += rrule.weights[ir] * kTwoPi * r * input_intensity(cfg.input, r, z) *
              map.interpolate(iz, r);
    }
    total += zrule.weights[iz] * slab;
  }
  return std::clamp(total / cfg.crystal.length, 0.0, 1.0);
}

double crossed_beam_average(const RadialEfficiencyMap& map, double theta,
                            const OpticalControlConfig& cfg) {
  if (!(theta >= 0.0)) {
    throw ParameterError("crossed-beam angle must be >= 0");
  }
  check_z_coverage(map, cfg);
  if (input_truncation_radius(cfg) + max_displacement(cfg, theta) > map.r_max() * (1.0 + 1e-9)) {
    throw CoverageError("radial map too small for the crossed-beam displacement");
  }
  const double tan_theta = std::tan(theta);
  const QuadratureRule zrule = simpson(map.z_grid().size(), cfg.crystal.z_min(), cfg.crystal.z_max());
  const QuadratureRule unit = gauss_legendre(cfg.grid.cartesian_nodes, -1.0, 1.0);
  std::vector<double> slabs(zrule.size(), 0.0);
  parallel_for(zrule.size(), [&](std::size_t iz) {
    const double z = zrule.nodes[iz];
    const double w = beam_radius(cfg.input, z);
    const double extent = 3.0 * w;
    const double shift = z * tan_theta;
    const double peak = 2.0 / (kPi * w * w);
    double slab = 0.0;
    for (std::size_t ix = 0; ix < unit.size(); ++ix) {
      const double x = extent * unit.nodes[ix];
      for (std::size_t iy = 0; iy < unit.size(); ++iy) {
        const double y = extent * unit.nodes[iy];
        const double rho2 = x * x + y * y;
        if (rho2 > extent * extent) {
          continue;
        }
        const double weight = extent * extent * unit.weights[ix] * unit.weights[iy];
        const double intensity = peak * std::exp(-2.0 * rho2 / (w * w));
        const double dx = x - shift;
        slab += weight * intensity * map.interpolate(iz, std::sqrt(dx * dx + y * y));
      }
    }
    slabs[iz] = slab;
  });
  double total = 0.0;
  for (std::size_t iz = 0; iz < zrule.size(); ++iz) {
    total += zrule.weights[iz] * slabs[iz];
  }
  return std::clamp(total / cfg.crystal.length, 0.0, 1.0);
}

double optical_control_efficiency(const OpticalControlConfig& cfg, double theta) {
  const RadialEfficiencyMap map = radial_efficiency_map(cfg, theta);
  return theta == 0.0 ? radial_average(map, cfg) : crossed_beam_average(map, theta, cfg);
}

}  // namespace afc
