#include <cmath>

#include <doctest.h>

#include "afcsim/model.hpp"
#include "afcsim/spincontrol.hpp"
#include "afcsim/units.hpp"

using namespace afc;

namespace {

SpinControlConfig nominal() { return ModelConfig::defaults().spin(); }

}  // namespace

TEST_SUITE("spincontrol") {

TEST_CASE("circuit response") {
  const RfCircuit c{mhz(34), khz(190), khz(42)};
  CHECK(circuit_rabi(c, mhz(34)) == doctest::Approx(khz(42)));
  CHECK(circuit_rabi(c, mhz(34) + khz(95)) == doctest::Approx(khz(21)));
  CHECK(circuit_rabi(c, mhz(34) - khz(95)) == doctest::Approx(khz(21)));
  // 95^2 / (175^2 + 95^2) evaluated by hand.
  CHECK(circuit_rabi(c, mhz(34) + khz(175)) / khz(42) == doctest::Approx(0.228).epsilon(2e-3));
  for (double d : {10.0, 80.0, 300.0}) {
    CHECK(circuit_rabi(c, mhz(34) + khz(d)) == doctest::Approx(circuit_rabi(c, mhz(34) - khz(d))));
    CHECK(circuit_rabi(c, mhz(34) + khz(d)) < khz(42));
  }
}

TEST_CASE("zero rf amplitude") {
  SpinControlConfig s = nominal();
  s.circuit.peak_rabi = 0.0;
  CHECK(spin_control_efficiency(s) == 0.0);
}

TEST_CASE("flat circuit with a long adiabatic pulse approaches unity") {
  SpinControlConfig s = nominal();
  s.circuit.fwhm = mhz(1000);
  s.circuit.peak_rabi = khz(60);
  s.pulse.cutoff_duration = us(1000);
  s.pulse.chirp_span = mhz(1);
  CHECK(spin_control_efficiency(s) > 0.99);
}

TEST_CASE("efficiency versus chirp span rises then falls") {
  auto at = [](double span) {
    SpinControlConfig s = nominal();
    s.pulse.chirp_span = khz(span);
    return spin_control_efficiency(s);
  };
  const double mid = at(300);
  CHECK(at(150) < mid);
  CHECK(at(600) < mid);
}

TEST_CASE("wider spin line is harder to invert") {
  double prev = 1.0;
  for (double lw : {60.0, 123.0, 250.0}) {
    SpinControlConfig s = nominal();
    s.line.fwhm = khz(lw);
    const double e = spin_control_efficiency(s);
    CHECK(e <= prev + 1e-9);
    prev = e;
  }
}

TEST_CASE("both filter modes give valid efficiencies") {
  SpinControlConfig s = nominal();
  const double inst = spin_control_efficiency(s);
  s.filter_mode = CircuitFilterMode::static_detuning;
  const double stat = spin_control_efficiency(s);
  CHECK(inst > 0.0);
  CHECK(inst <= 1.0);
  CHECK(stat > 0.0);
  CHECK(stat <= 1.0);
}

}
