// Command-line surface: scenario execution (run), refinement studies
// (converge), closed-form bound tables (bounds) and the full verification
// suite (verify).

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "bfsi/diagnostics.hpp"
#include "bfsi/io.hpp"
#include "bfsi/scenarios.hpp"
#include "bfsi/solver.hpp"
#include "bfsi/verification.hpp"

namespace {

int exit_code_for(const bfsi::Error& e) {
    switch (e.category()) {
        case bfsi::ErrorCategory::io: return 3;
        case bfsi::ErrorCategory::solver: return 2;
        case bfsi::ErrorCategory::config:
        case bfsi::ErrorCategory::logic: return 1;
    }
    return 1;
}

int cmd_run(const std::string& config_path, const std::string& out_dir, bool plots) {
    const bfsi::SimConfig raw = bfsi::load_config_file(config_path);
    const bfsi::ValidatedConfig cfg = bfsi::validate_config(raw);

    const bfsi::Trajectory traj = bfsi::run_simulation(cfg);
    const double alpha = bfsi::empirical_alpha(traj);
    const bfsi::StabilityConstants sc = bfsi::stability_constants(cfg, alpha);
    const auto records = bfsi::evaluate_trajectory(traj, cfg, sc);
    const nlohmann::json summary = bfsi::make_run_summary(cfg, traj, records, sc);

    const bfsi::RunArtifacts artifacts =
        bfsi::write_run_artifacts(out_dir, cfg, traj, records, summary, plots);

    std::printf("run complete: %zu steps, t = %s\n", traj.size() - 1,
                bfsi::format_full(traj.back().t).c_str());
    std::printf("  final h = %s, g = %s, E = %s\n",
                bfsi::format_full(traj.back().h).c_str(),
                bfsi::format_full(traj.back().g).c_str(),
                bfsi::format_full(records.back().E).c_str());
    std::printf("  envelope verdict: %s\n",
                summary["decay"]["envelope"]["verdict"].get<std::string>().c_str());
    std::printf("  wrote %s\n", artifacts.trajectory_csv.string().c_str());
    std::printf("  wrote %s\n", artifacts.diagnostics_csv.string().c_str());
    std::printf("  wrote %s\n", artifacts.summary_json.string().c_str());
    for (const auto& p : artifacts.plots) {
        std::printf("  wrote %s\n", p.string().c_str());
    }
    return 0;
}

int cmd_converge(const std::string& config_path, const std::string& out_path,
                 int levels, const std::string& study_kind, int refine_factor) {
    if (levels < 3) {
        std::fprintf(stderr, "error: --levels must be at least 3\n");
        return 1;
    }
    const bfsi::SimConfig raw = bfsi::load_config_file(config_path);
    bfsi::validate_config(raw);  // fail early with field-level messages

    std::string kind = study_kind;
    if (kind == "auto") {
        if (raw.forcing.present()) {
            kind = (raw.scheme == bfsi::Scheme::crank_nicolson_picard) ? "spatial"
                                                                       : "temporal";
        } else {
            kind = "self";
        }
    }

    bfsi::RefinementStudy study;
    if (kind == "spatial") {
        study = bfsi::run_mms_spatial_study(raw, levels);
    } else if (kind == "temporal") {
        study = bfsi::run_mms_temporal_study(raw, levels);
    } else if (kind == "self") {
        study = bfsi::run_self_convergence_study(raw, levels, refine_factor);
    } else {
        std::fprintf(stderr, "error: unknown --study kind '%s'\n", kind.c_str());
        return 1;
    }

    bfsi::write_study_csv(out_path, study);
    for (std::size_t k = 0; k < study.levels.size(); ++k) {
        std::printf("level %zu: n_cells = %d, dt = %g, error = %.6e\n", k,
                    study.levels[k].n_cells, study.levels[k].dt, study.errors[k]);
    }
    if (study.degenerate) {
        std::printf("study DEGENERATE: all errors are exactly zero\n");
    } else {
        std::printf("observed order (median): %.3f\n", study.observed_order);
    }
    std::printf("wrote %s\n", out_path.c_str());
    return 0;
}

int cmd_bounds(const std::string& config_path, const std::string& out_path,
               double t_max, int samples, double alpha) {
    if (samples < 2) {
        std::fprintf(stderr, "error: --samples must be at least 2\n");
        return 1;
    }
    const bfsi::SimConfig raw = bfsi::load_config_file(config_path);
    const bfsi::ValidatedConfig cfg = bfsi::validate_config(raw);
    const bfsi::StabilityConstants sc = bfsi::stability_constants(cfg, alpha);
    const bfsi::CorridorBounds corridor = bfsi::corridor_bounds(cfg);

    std::ofstream out(out_path);
    if (!out) throw bfsi::IoError("cannot open '" + out_path + "' for writing");
    out << "t,Q,C,eps,eta,kappa1,kappa2\n";
    for (int i = 0; i < samples; ++i) {
        const double t = t_max * static_cast<double>(i) / (samples - 1);
        out << bfsi::format_full(t) << ',' << bfsi::format_full(sc.Q) << ','
            << bfsi::format_full(sc.C) << ',' << bfsi::format_full(sc.eps) << ','
            << bfsi::format_full(sc.eta) << ','
            << bfsi::format_full(corridor.kappa1(t)) << ','
            << bfsi::format_full(corridor.kappa2(t)) << '\n';
    }
    std::printf("Q = %g, C = %g, eps = %g, eta = %g\n", sc.Q, sc.C, sc.eps, sc.eta);
    std::printf("wrote %s\n", out_path.c_str());
    return 0;
}

int cmd_verify() {
    const auto results =
        bfsi::run_acceptance_suite([](const bfsi::CriterionResult& r) {
            std::printf("%s  criterion %2d: %s (%s)\n", r.pass ? "PASS" : "FAIL",
                        r.id, r.name.c_str(), r.detail.c_str());
            std::fflush(stdout);
        });
    if (bfsi::all_passed(results)) {
        std::printf("all %zu criteria passed\n", results.size());
        return 0;
    }
    std::printf("FAILURES present\n");
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"1D viscous-Burgers / point-mass interaction laboratory"};
    app.require_subcommand(1);

    int seed = 0;  // reserved; the dynamics are deterministic
    app.add_option("--seed", seed, "reserved, unused")->group("");

    std::string config_path, out_dir = "out";
    bool plots = false;
    CLI::App* run = app.add_subcommand("run", "simulate a scenario and write artifacts");
    run->add_option("--config", config_path, "JSON scenario file")->required();
    run->add_option("--out", out_dir, "output directory");
    run->add_flag("--plots", plots, "also emit SVG plots");

    std::string conv_config, conv_out = "study.csv", study_kind = "auto";
    int levels = 3, refine_factor = 4;
    CLI::App* converge = app.add_subcommand("converge", "grid/time refinement study");
    converge->add_option("--config", conv_config, "JSON scenario file")->required();
    converge->add_option("--out", conv_out, "study CSV path");
    converge->add_option("--levels", levels, "number of refinement levels (>= 3)");
    converge->add_option("--study", study_kind,
                         "study kind: auto|spatial|temporal|self");
    converge->add_option("--refine-factor", refine_factor,
                         "reference-solution refinement factor (self study)");

    std::string bounds_config, bounds_out = "bounds.csv";
    double t_max = 10.0, alpha = 1.0;
    int samples = 101;
    CLI::App* bounds = app.add_subcommand(
        "bounds", "tabulate closed-form constants and corridor widths");
    bounds->add_option("--config", bounds_config, "JSON scenario file")->required();
    bounds->add_option("--out", bounds_out, "bounds CSV path");
    bounds->add_option("--t-max", t_max, "time horizon");
    bounds->add_option("--samples", samples, "number of samples");
    bounds->add_option("--alpha", alpha,
                       "wall-clearance lower bound used for eps/eta");

    CLI::App* verify = app.add_subcommand("verify", "run the verification suite");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (run->parsed()) return cmd_run(config_path, out_dir, plots);
        if (converge->parsed())
            return cmd_converge(conv_config, conv_out, levels, study_kind,
                                refine_factor);
        if (bounds->parsed())
            return cmd_bounds(bounds_config, bounds_out, t_max, samples, alpha);
        if (verify->parsed()) return cmd_verify();
    } catch (const bfsi::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return 1;
    }
    return 0;
}
