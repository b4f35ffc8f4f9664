#include "afcsim/io.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <system_error>

#include <json.hpp>

#include "afcsim/errors.hpp"
#include "afcsim/units.hpp"

namespace afc {

namespace {

void write_config_comments(std::ostream& out, const RunConfig& cfg) {
  for (const auto& [key, value] : describe(cfg)) {
    out << "# " << key << " = " << value << '\n';
  }
}

nlohmann::ordered_json config_json(const RunConfig& cfg) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& [key, value] : describe(cfg)) {
    j[key] = value;
  }
  return j;
}

nlohmann::ordered_json optional_json(const std::optional<double>& v) {
  return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

}  // namespace

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

void write_sweep_csv(std::ostream& out, const SweepResult& result, const RunConfig& cfg,
                     std::string_view preset) {
  out << "# afc-pulse-sim sweep\n";
  if (!preset.empty()) {
    out << "# preset = " << preset << '\n';
  }
  out << "# parameter = " << to_string(result.parameter) << '\n';
  out << "# value_unit = " << value_unit(result.parameter) << '\n';
  out << "# mode = " << to_string(result.mode) << '\n';
  write_config_comments(out, cfg);
  out << "parameter,value,eta_oc,eta_sc,eta_opt_spin,eta_tot,control_waist_m\n";
  for (const auto& row : result.rows) {
    out << to_string(result.parameter) << ',' << format_number(to_output_unit(result.parameter, row.value))
        << ',' << format_number(row.eta_oc) << ',' << format_number(row.eta_sc) << ','
        << format_number(row.eta_opt_spin) << ',' << (row.eta_tot ? format_number(*row.eta_tot) : "")
        << ',' << format_number(row.control_waist) << '\n';
  }
}

void write_sweep_json(std::ostream& out, const SweepResult& result, const RunConfig& cfg,
                      std::string_view preset) {
  nlohmann::ordered_json j;
  j["parameter"] = to_string(result.parameter);
  j["value_unit"] = value_unit(result.parameter);
  j["preset"] = preset.empty() ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(preset);
  j["mode"] = to_string(result.mode);
  j["wall_seconds"] = result.wall_seconds;
  j["config"] = config_json(cfg);
  auto rows = nlohmann::ordered_json::array();
  for (const auto& row : result.rows) {
    nlohmann::ordered_json r;
    r["value"] = to_output_unit(result.parameter, row.value);
    r["eta_oc"] = row.eta_oc;
    r["eta_sc"] = row.eta_sc;
    r["eta_opt_spin"] = row.eta_opt_spin;
    r["eta_tot"] = optional_json(row.eta_tot);
    r["control_waist_m"] = row.control_waist;
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  out << j.dump(2) << '\n';
}

void write_profiles_csv(std::ostream& out, const std::vector<ProfileRow>& rows, const RunConfig& cfg,
                        double theta, double y, double z) {
  out << "# afc-pulse-sim profiles\n";
  out << "# theta_deg = " << format_number(theta * 180.0 / kPi) << '\n';
  out << "# y_m = " << format_number(y) << '\n';
  out << "# z_m = " << format_number(z) << '\n';
  write_config_comments(out, cfg);
  out << "x_m,input_intensity,control_intensity,efficiency\n";
  for (const auto& r : rows) {
    out << format_number(r.x) << ',' << format_number(r.input_intensity) << ','
        << format_number(r.control_intensity) << ',' << format_number(r.efficiency) << '\n';
  }
}

void write_result_text(std::ostream& out, const EfficiencyResult& r) {
  out << "eta_oc = " << format_number(r.eta_oc) << '\n';
  out << "eta_sc = " << format_number(r.eta_sc) << '\n';
  out << "eta_opt_spin = " << format_number(r.eta_opt_spin) << '\n';
  if (r.eta_afc) {
    out << "eta_afc = " << format_number(*r.eta_afc) << '\n';
    out << "eta_spin = " << format_number(r.eta_spin) << '\n';
  }
  if (r.eta_tot) {
    out << "eta_tot = " << format_number(*r.eta_tot) << '\n';
  }
}

void write_result_json(std::ostream& out, const EfficiencyResult& r, const RunConfig& cfg) {
  nlohmann::ordered_json j;
  j["eta_oc"] = r.eta_oc;
  j["eta_sc"] = r.eta_sc;
  j["eta_opt_spin"] = r.eta_opt_spin;
  j["eta_afc"] = optional_json(r.eta_afc);
  j["eta_spin"] = r.eta_spin;
  j["eta_tot"] = optional_json(r.eta_tot);
  j["config"] = config_json(cfg);
  out << j.dump(2) << '\n';
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  auto tmp = path;
  tmp += ".partial";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) {
      throw ModelError("cannot open '" + tmp.string() + "' for writing");
    }
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    f.flush();
    if (!f) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw ModelError("failed writing '" + tmp.string() + "'");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw ModelError("cannot move output into place at '" + path.string() + "'");
  }
}

}  // namespace afc
