#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "afcsim/config.hpp"
#include "afcsim/efficiency.hpp"
#include "afcsim/sweeps.hpp"

namespace afc {

/// Fixed nine significant digits, so identical inputs give byte-identical files.
std::string format_number(double v);

/// CSV with `#` lines carrying the resolved configuration. Wall time is left out to keep
/// the file deterministic.
void write_sweep_csv(std::ostream& out, const SweepResult& result, const RunConfig& cfg,
                     std::string_view preset = {});
void write_sweep_json(std::ostream& out, const SweepResult& result, const RunConfig& cfg,
                      std::string_view preset = {});

void write_profiles_csv(std::ostream& out, const std::vector<ProfileRow>& rows, const RunConfig& cfg,
                        double theta, double y, double z);

void write_result_text(std::ostream& out, const EfficiencyResult& r);
void write_result_json(std::ostream& out, const EfficiencyResult& r, const RunConfig& cfg);

/// Writes `content` to a sibling temporary file and renames it over `path`, so a failed run
/// never leaves a partial file behind.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace afc
