#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "bfsi/config.hpp"
#include "bfsi/diagnostics.hpp"
#include "bfsi/state.hpp"
#include "bfsi/verification.hpp"

namespace bfsi {

/// Shortest round-trippable decimal form (17 significant digits). Throws
/// QuadratureError on non-finite input: a NaN in an output file is a defect.
std::string format_full(double x);

struct RunArtifacts {
    std::filesystem::path trajectory_csv;
    std::filesystem::path diagnostics_csv;
    std::filesystem::path summary_json;
    std::vector<std::filesystem::path> plots;
};

/// Builds the summary document: config hash, stability constants, decay
/// fit, envelope verdicts, inequality-chain counts, corridor check, and the
/// limit position when K = 0.
nlohmann::json make_run_summary(const ValidatedConfig& cfg, const Trajectory& traj,
                                const std::vector<DiagnosticsRecord>& records,
                                const StabilityConstants& sc);

/// Writes trajectory.csv, diagnostics.csv, summary.json and (optionally)
/// SVG plots into out_dir. Output bytes are a pure function of the inputs.
RunArtifacts write_run_artifacts(const std::filesystem::path& out_dir,
                                 const ValidatedConfig& cfg, const Trajectory& traj,
                                 const std::vector<DiagnosticsRecord>& records,
                                 const nlohmann::json& summary, bool with_plots);

void write_study_csv(const std::filesystem::path& path, const RefinementStudy& study);

}  // namespace bfsi
