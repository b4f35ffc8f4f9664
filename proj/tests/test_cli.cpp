#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>

#include "afcsim/cli.hpp"
#include "afcsim/efficiency.hpp"
#include "afcsim/units.hpp"

using namespace afc;
namespace fs = std::filesystem;

namespace {

struct Run {
  int status;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int s = run_cli(args, out, err);
  return {s, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "afcsim-cli-tests";
  fs::create_directories(dir);
  return dir / name;
}

std::string read(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::string> data_lines(const std::string& text) {
  std::vector<std::string> v;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '#') {
      v.push_back(line);
    }
  }
  return v;
}

double value_of(const std::string& text, const std::string& key) {
  const auto pos = text.find(key + " = ");
  REQUIRE(pos != std::string::npos);
  return std::stod(text.substr(pos + key.size() + 3));
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("simulate prints the composed efficiencies") {
  const Run r = run({"simulate", "--mode", "analytical"});
  CHECK(r.status == kExitOk);
  const double oc = value_of(r.out, "eta_oc");
  const double sc = value_of(r.out, "eta_sc");
  CHECK(value_of(r.out, "eta_opt_spin") == doctest::Approx(oc * oc * sc * sc).epsilon(1e-8));
}

TEST_CASE("simulate with eta_afc reports eta_tot as json") {
  const Run r = run({"simulate", "--mode", "analytical", "--format", "json", "eta_afc=0.074"});
  CHECK(r.status == kExitOk);
  CHECK(r.out.find("\"eta_tot\"") != std::string::npos);
  CHECK(r.out.find("\"config\"") != std::string::npos);
}

TEST_CASE("config errors exit with status 2") {
  CHECK(run({"simulate", "square_fraction=1.2"}).status == kExitConfigError);
  CHECK(run({"simulate", "bogus=1"}).status == kExitConfigError);
  CHECK(run({"simulate", "--config", scratch("missing.cfg").string()}).status == kExitConfigError);
  CHECK(run({"frobnicate"}).status == kExitConfigError);
  CHECK(run({"sweep", "--preset", "fig9"}).status == kExitConfigError);
  const Run r = run({"simulate", "control_waist=12"});
  CHECK(r.status == kExitConfigError);
  CHECK(r.err.find("optical.control_waist") != std::string::npos);
}

TEST_CASE("model errors exit with status 3 and leave no partial output") {
  const fs::path out = scratch("flat.csv");
  fs::remove(out);
  const Run r = run({"sweep", "--param", "angle", "--values", "0 deg,1 deg", "--optimize-waist",
                     "--mode", "analytical", "optical.peak_rabi=0 Hz", "--out", out.string()});
  CHECK(r.status == kExitModelError);
  CHECK_FALSE(r.err.empty());
  CHECK_FALSE(fs::exists(out));
}

TEST_CASE("config file then overrides") {
  const fs::path cfg = scratch("run.cfg");
  std::ofstream(cfg) << "# test\noptical.mode = analytical\ncontrol_waist = 80 um\n";
  const Run a = run({"simulate", "--config", cfg.string(), "--format", "json"});
  CHECK(a.status == kExitOk);
  CHECK(a.out.find("\"optical.control_waist\": \"8e-05 m\"") != std::string::npos);
  const Run b = run({"simulate", "--config", cfg.string(), "--format", "json", "control_waist=90 um"});
  CHECK(b.out.find("\"optical.control_waist\": \"9e-05 m\"") != std::string::npos);
}

TEST_CASE("fit-afc recovers synthetic parameters") {
  const fs::path data = scratch("decay.csv");
  {
    std::ofstream f(data);
    f << "delay_us,efficiency\n";
    const AfcDecayParams p{0.194, us(116)};
    for (double d : {3.0, 10.0, 20.0, 30.0}) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", d, afc_decay(p, us(d)));
      f << buf;
    }
  }
  const Run r = run({"fit-afc", "--data", data.string()});
  CHECK(r.status == kExitOk);
  CHECK(value_of(r.out, "eta0") == doctest::Approx(0.194).epsilon(1e-6));
  CHECK(value_of(r.out, "t2_afc_us") == doctest::Approx(116).epsilon(1e-6));
  CHECK(value_of(r.out, "rms_residual") < 1e-10);
}

TEST_CASE("fig4a sweep writes one row per chirp value and is byte reproducible") {
  const fs::path a = scratch("fig4a_a.csv");
  const fs::path b = scratch("fig4a_b.csv");
  REQUIRE(run({"sweep", "--preset", "fig4a", "--out", a.string()}).status == kExitOk);
  REQUIRE(run({"sweep", "--preset", "fig4a", "--out", b.string()}).status == kExitOk);
  const std::string text = read(a);
  CHECK(text == read(b));
  CHECK(text.find("# optical.control_waist = ") != std::string::npos);
  const auto lines = data_lines(text);
  REQUIRE(lines.size() == 22);
  CHECK(lines[0].rfind("parameter,value,eta_oc,eta_sc,eta_opt_spin,eta_tot", 0) == 0);
  CHECK(lines[1].rfind("rf_chirp_span,100000,", 0) == 0);
  CHECK(lines[21].rfind("rf_chirp_span,600000,", 0) == 0);
}

TEST_CASE("sweep json embeds the configuration") {
  const Run r = run({"sweep", "--param", "control_waist", "--range", "40 um:80 um:3", "--mode",
                     "analytical", "--optical-only", "--format", "json"});
  CHECK(r.status == kExitOk);
  CHECK(r.out.find("\"config\"") != std::string::npos);
  CHECK(r.out.find("\"rows\"") != std::string::npos);
  CHECK(r.out.find("\"value_unit\": \"m\"") != std::string::npos);
}

TEST_CASE("optimize-waist and profiles") {
  const Run w = run({"optimize-waist", "--mode", "analytical", "angle=1 deg"});
  CHECK(w.status == kExitOk);
  CHECK(value_of(w.out, "w_opt_m") > um(60));
  const Run p = run({"profiles", "--preset", "fig9", "--mode", "analytical", "--points", "11"});
  CHECK(p.status == kExitOk);
  CHECK(p.out.find("# theta_deg = 0.5") != std::string::npos);
  const auto lines = data_lines(p.out);
  REQUIRE(lines.size() == 12);
  CHECK(lines[0] == "x_m,input_intensity,control_intensity,efficiency");
}

}
