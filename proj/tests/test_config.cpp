#include <string>

#include <doctest.h>

#include "afcsim/config.hpp"
#include "afcsim/units.hpp"

using namespace afc;

TEST_SUITE("config") {

TEST_CASE("empty config gives the nominal parameter set") {
  const RunConfig c = parse_config_text("");
  const ModelConfig& m = c.model;
  CHECK(m.input_waist == doctest::Approx(um(34)));
  CHECK(m.control_waist == doctest::Approx(um(60)));
  CHECK(to_hz(m.control_peak_rabi()) == doctest::Approx(532e3));
  CHECK(m.optical_pulse.cutoff_duration == doctest::Approx(us(15)));
  CHECK(m.optical_pulse.square_fraction == 0.7);
  CHECK(to_hz(m.optical_pulse.chirp_span) == doctest::Approx(1.5e6));
  CHECK(to_hz(m.resolved_spectrum_fwhm()) == doctest::Approx(110e3).epsilon(5e-3));
  CHECK(to_hz(m.circuit.peak_rabi) == doctest::Approx(42e3));
  CHECK(m.spin_pulse.cutoff_duration == doctest::Approx(us(200)));
  CHECK(m.spin_pulse.square_fraction == 0.75);
  CHECK(to_hz(m.spin_pulse.chirp_span) == doctest::Approx(350e3));
  CHECK(to_hz(m.spin_linewidth) == doctest::Approx(123e3));
  CHECK(to_hz(m.circuit.fwhm) == doctest::Approx(190e3));
  CHECK(m.crystal_length == doctest::Approx(mm(12.5)));
  CHECK(m.wavelength == doctest::Approx(nm(580)));
}

TEST_CASE("control waist override rescales the rabi frequency") {
  const RunConfig c = parse_config_text("control_waist = 120 um, rabi_scaling = true");
  CHECK(to_hz(c.model.control_peak_rabi()) == doctest::Approx(266e3));
}

TEST_CASE("crossed beams default to a 120 um control waist") {
  CHECK(parse_config_text("angle = 1 deg").model.control_waist == doctest::Approx(um(120)));
  CHECK(parse_config_text("angle = 1 deg\ncontrol_waist = 80 um").model.control_waist ==
        doctest::Approx(um(80)));
}

TEST_CASE("parse errors name the key and the reason") {
  try {
    parse_config_text("square_fraction = 1.2");
    FAIL("expected a config error");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("f_sq") != std::string::npos);
    CHECK(e.key().find("square_fraction") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_config_text("no_such_key = 3"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("control_waist = 120"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("control_waist = 120 kHz"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("chirp_span = 1 MHz"), ConfigError);  // ambiguous
  CHECK_THROWS_AS(parse_config_text("optical.duration = -1 us"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("control_waist 120 um"), ConfigError);
}

TEST_CASE("units") {
  CHECK(parse_quantity("120 um", Dimension::length) == doctest::Approx(120e-6));
  CHECK(parse_quantity("120 \xC2\xB5m", Dimension::length) == doctest::Approx(120e-6));
  CHECK(parse_quantity("1.5 MHz", Dimension::frequency) == doctest::Approx(mhz(1.5)));
  CHECK(parse_quantity("2 rad/s", Dimension::frequency) == doctest::Approx(2.0));
  CHECK(parse_quantity("15 us", Dimension::time) == doctest::Approx(15e-6));
  CHECK(parse_quantity("2 deg", Dimension::angle) == doctest::Approx(deg(2.0)));
  CHECK_THROWS_AS(parse_quantity("2", Dimension::angle), ConfigError);
}

TEST_CASE("json input, nested or dotted") {
  RunConfig a;
  apply_json(a, R"({"optical": {"control_waist": "90 um", "mode": "analytical"}, "spin.linewidth": "100 kHz"})");
  finalize(a);
  CHECK(a.model.control_waist == doctest::Approx(um(90)));
  CHECK(a.model.optical_mode == EvaluationMode::analytical);
  CHECK(to_hz(a.model.spin_linewidth) == doctest::Approx(100e3));
  RunConfig b;
  apply_json(b, R"({"config": {"grid.z_nodes": 21, "optical.rabi_scaling": false}})");
  finalize(b);
  CHECK(b.model.grid.z_nodes == 21);
  CHECK_FALSE(b.model.rabi_scaling);
}

TEST_CASE("describe output parses back to the same configuration") {
  RunConfig a = parse_config_text(
      "control_waist = 85 um\nangle = 0.7 deg\nfilter_mode = static\neta_afc = 0.1\nmethod = rk4");
  RunConfig b;
  for (const auto& [key, value] : describe(a)) {
    apply_setting(b, key, value);
  }
  finalize(b);
  CHECK(describe(a) == describe(b));
  CHECK(b.model.filter_mode == CircuitFilterMode::static_detuning);
  REQUIRE(b.model.eta_afc);
  CHECK(*b.model.eta_afc == doctest::Approx(0.1));
  CHECK(b.model.bloch.method == BlochOptions::Method::fixed_rk4);
}

TEST_CASE("every key is resolvable") {
  for (const auto& k : config_keys()) {
    CHECK(resolve_key(k) == k);
  }
  CHECK(resolve_key("control_waist") == "optical.control_waist");
  CHECK_THROWS_AS(resolve_key("peak_rabi"), ConfigError);
}

}
