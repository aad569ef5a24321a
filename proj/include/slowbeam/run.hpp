#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "slowbeam/config.hpp"

// One function per CLI subcommand. Each writes its outputs and the manifest
// into the run directory and returns the scalar results that the CLI prints
// as machine-readable key=value lines.

namespace slowbeam::run {

using Summary = std::vector<std::pair<std::string, double>>;

Summary potential(const RunConfig& cfg, const std::filesystem::path& out);
Summary absorption(const RunConfig& cfg, const std::filesystem::path& out);
Summary stop_power(const RunConfig& cfg, const std::filesystem::path& out,
                   double e_kin_J, double speed_mps);  // speed > 0 overrides e_kin
Summary pulse_slow(const RunConfig& cfg, const std::filesystem::path& out, double v_mps);
Summary capture(const RunConfig& cfg, const std::filesystem::path& out, double speed_mps);

Summary sample_source(const RunConfig& cfg, const std::filesystem::path& out);
Summary fit_velocity(const RunConfig& cfg, const std::filesystem::path& out,
                     const std::filesystem::path& histogram_csv);
Summary selector_filter(const RunConfig& cfg, const std::filesystem::path& out,
                        const std::filesystem::path& samples_csv);
Summary synth_ramp(const RunConfig& cfg, const std::filesystem::path& out);
Summary fit_arrhenius(const RunConfig& cfg, const std::filesystem::path& out,
                      const std::filesystem::path& ramp_csv);
Summary focus_sim(const RunConfig& cfg, const std::filesystem::path& out);
Summary cool_sim(const RunConfig& cfg, const std::filesystem::path& out);
Summary threshold_scan(const RunConfig& cfg, const std::filesystem::path& out);

// Summarizes a finished run directory against its manifest; writes report.md.
// Returns 0 when every verdict passes, 2 when any fails or a table is
// corrupt. Throws ConfigError(MissingFile) when there is no manifest.
int report(const std::filesystem::path& run_dir, std::string& text_out);

}  // namespace slowbeam::run
