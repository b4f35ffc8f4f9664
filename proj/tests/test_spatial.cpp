#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>

#include "afcsim/errors.hpp"
#include "afcsim/model.hpp"
#include "afcsim/spatial.hpp"
#include "afcsim/units.hpp"

using namespace afc;

namespace {

OpticalControlConfig analytical_cfg(double control_waist = um(60)) {
  ModelConfig m = ModelConfig::defaults();
  m.control_waist = control_waist;
  m.optical_mode = EvaluationMode::analytical;
  return m.optical();
}

}  // namespace

TEST_SUITE("spatial") {

TEST_CASE("zero control field gives a zero map") {
  OpticalControlConfig c = analytical_cfg();
  c.peak_rabi = 0.0;
  const auto map = radial_efficiency_map(c);
  for (std::size_t iz = 0; iz < map.z_grid().size(); ++iz) {
    for (std::size_t ir = 0; ir < map.r_grid().size(); ++ir) {
      CHECK(map.at(iz, ir) == 0.0);
    }
  }
  CHECK(radial_average(map, c) == 0.0);
}

TEST_CASE("analytical map at the origin is the analytical efficiency") {
  OpticalControlConfig c = analytical_cfg();
  c.peak_rabi = khz(150);  // away from saturation so the check is informative
  const auto map = radial_efficiency_map(c);
  const auto& z = map.z_grid();
  const auto iz = static_cast<std::size_t>(std::find_if(z.begin(), z.end(), [](double v) {
                                             return std::abs(v) < 1e-12;
                                           }) - z.begin());
  REQUIRE(iz < z.size());
  REQUIRE(map.r_grid().front() == 0.0);
  CHECK(map.at(iz, 0) == doctest::Approx(analytical_hsh_efficiency(khz(150), c.pulse.square_duration(),
                                                                   c.pulse.chirp_span)));
}

TEST_CASE("unit efficiency map averages to one") {
  const OpticalControlConfig c = analytical_cfg();
  const auto ref = radial_efficiency_map(c);
  std::vector<double> ones(ref.r_grid().size() * ref.z_grid().size(), 1.0);
  const RadialEfficiencyMap map(ref.r_grid(), ref.z_grid(), ones);
  CHECK(std::abs(radial_average(map, c) - 1.0) < 1e-6);
  CHECK(std::abs(crossed_beam_average(map, 0.0, c) - 1.0) < 1e-6);
}

TEST_CASE("wide control beam reduces to the on-axis efficiency") {
  ModelConfig m = ModelConfig::defaults();
  m.optical_mode = EvaluationMode::analytical;
  m.control_waist = mm(5);
  m.rabi_scaling = false;
  m.reference_rabi = khz(120);
  const OpticalControlConfig c = m.optical();
  const double on_axis = analytical_hsh_efficiency(khz(120), c.pulse.square_duration(), c.pulse.chirp_span);
  CHECK(optical_control_efficiency(c) == doctest::Approx(on_axis).epsilon(1e-4));
}

TEST_CASE("crossed and radial averages agree at zero angle") {
  for (double w : {um(40), um(60), um(120)}) {
    const OpticalControlConfig c = analytical_cfg(w);
    const auto map = radial_efficiency_map(c);
    CHECK(std::abs(crossed_beam_average(map, 0.0, c) - radial_average(map, c)) < 1e-3);
  }
}

TEST_CASE("displacement at the exit face") {
  const OpticalControlConfig c = analytical_cfg();
  CHECK(max_displacement(c, deg(0.5)) == doctest::Approx(um(54.5)).epsilon(1e-3));
}

TEST_CASE("efficiency decreases with angle") {
  const OpticalControlConfig c = analytical_cfg(um(120));
  const auto map = radial_efficiency_map(c, deg(2.0));
  double prev = radial_average(map, c);
  const double at_zero = prev;
  for (double a : {0.25, 0.5, 1.0, 2.0}) {
    const double e = crossed_beam_average(map, deg(a), c);
    CHECK(e >= 0.0);
    CHECK(e <= 1.0);
    CHECK(e <= prev + 1e-12);
    prev = e;
  }
  CHECK(crossed_beam_average(map, deg(1.0), c) < at_zero);
}

TEST_CASE("grid refinement changes eta_OC by less than 1e-3") {
  for (double theta : {0.0, deg(1.0)}) {
    OpticalControlConfig c = analytical_cfg(um(120));
    const double coarse = optical_control_efficiency(c, theta);
    c.grid.radial_nodes *= 2;
    c.grid.z_nodes = 2 * c.grid.z_nodes - 1;
    c.grid.cartesian_nodes = 2 * c.grid.cartesian_nodes - 1;
    const double fine = optical_control_efficiency(c, theta);
    CHECK(std::abs(fine - coarse) < 1e-3);
  }
}

TEST_CASE("bloch rabi table matches direct evaluation") {
  ModelConfig m = ModelConfig::defaults();
  const OpticalControlConfig c = m.optical();
  const RabiEfficiencyCurve curve(c, c.peak_rabi);
  for (double f : {0.13, 0.41, 0.77, 0.98}) {
    const double rabi = f * c.peak_rabi;
    CHECK(std::abs(curve(rabi) - local_efficiency(c, rabi)) < 1e-5);
  }
}

TEST_CASE("map coverage and export") {
  const OpticalControlConfig c = analytical_cfg();
  const auto map = radial_efficiency_map(c);
  CHECK_THROWS_AS(map.interpolate(0, 2.0 * map.r_max()), CoverageError);
  CHECK_THROWS_AS(crossed_beam_average(map, deg(2.0), c), CoverageError);
  std::ostringstream s;
  map.write_csv(s);
  std::string header;
  std::getline(std::istringstream(s.str()) >> std::ws, header);
  CHECK(header == "r_m,z_m,eta");
}

}
