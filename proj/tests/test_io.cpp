#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "bfsi/diagnostics.hpp"
#include "bfsi/io.hpp"
#include "bfsi/scenarios.hpp"
#include "bfsi/solver.hpp"

using namespace bfsi;

namespace {

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct TempDir {
    explicit TempDir(const std::string& name)
        : path(std::filesystem::temp_directory_path() / name) {
        std::filesystem::remove_all(path);
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    std::filesystem::path path;
};

RunArtifacts produce(const std::filesystem::path& dir, const SimConfig& raw,
                     bool plots) {
    const ValidatedConfig cfg = validate_config(raw);
    const Trajectory traj = run_simulation(cfg);
    const StabilityConstants sc = stability_constants(cfg, empirical_alpha(traj));
    const auto records = evaluate_trajectory(traj, cfg, sc);
    const nlohmann::json summary = make_run_summary(cfg, traj, records, sc);
    return write_run_artifacts(dir, cfg, traj, records, summary, plots);
}

}  // namespace

TEST_CASE("format_full round-trips and rejects non-finite values") {
    for (double x : {0.0, 1.0, -2.5, 1e-300, 3.141592653589793, 0.1}) {
        const std::string s = format_full(x);
        CHECK(std::stod(s) == x);
    }
    CHECK_THROWS_AS(format_full(std::nan("")), QuadratureError);
    CHECK_THROWS_AS(format_full(std::numeric_limits<double>::infinity()),
                    QuadratureError);
}

TEST_CASE("run artifacts: layout, headers, and content") {
    TempDir dir("bfsi_io_test");
    const SimConfig cfg = scenarios::wave(1.0, 0.0, 16, 1e-2, 0.5);
    const RunArtifacts art = produce(dir.path, cfg, true);

    REQUIRE(std::filesystem::exists(art.trajectory_csv));
    REQUIRE(std::filesystem::exists(art.diagnostics_csv));
    REQUIRE(std::filesystem::exists(art.summary_json));
    CHECK(art.plots.size() == 3);

    const std::string traj_csv = slurp(art.trajectory_csv);
    CHECK(traj_csv.rfind("t,h,g,E,diss_cum,u,P,A1,A2,V_eps,jump,kappa1,kappa2,residual\n",
                         0) == 0);
    // header + one row per state (51 states for 50 steps)
    const auto lines = std::count(traj_csv.begin(), traj_csv.end(), '\n');
    CHECK(lines == 52);

    const nlohmann::json summary = nlohmann::json::parse(slurp(art.summary_json));
    CHECK(summary.contains("config_hash"));
    CHECK(summary["config_hash"] == config_hash(cfg));
    CHECK(summary.contains("stability_constants"));
    CHECK(summary.contains("decay"));
    CHECK(summary["checks"]["collision"] == false);
}

TEST_CASE("equilibrium summary: zero energy, zero violations") {
    TempDir dir("bfsi_io_eq");
    const SimConfig cfg = scenarios::equilibrium(5.0, 0.3, 16, 1e-2, 0.2);
    const RunArtifacts art = produce(dir.path, cfg, false);
    const nlohmann::json summary = nlohmann::json::parse(slurp(art.summary_json));
    CHECK(summary["decay"]["violations"] == 0);
    CHECK(summary["energy"]["E0"] == 0.0);
    CHECK(summary["decay"]["envelope"]["verdict"] == "PASS");

    // E column all zero
    std::istringstream csv(slurp(art.trajectory_csv));
    std::string line;
    std::getline(csv, line);  // header
    while (std::getline(csv, line)) {
        std::istringstream row(line);
        std::string cell;
        for (int c = 0; c < 4; ++c) std::getline(row, cell, ',');
        CHECK(std::stod(cell) == 0.0);
    }
}

TEST_CASE("identical runs produce identical bytes") {
    TempDir dir_a("bfsi_io_det_a");
    TempDir dir_b("bfsi_io_det_b");
    const SimConfig cfg = scenarios::wave(0.0, 0.0, 16, 1e-2, 0.3);
    const RunArtifacts a = produce(dir_a.path, cfg, false);
    const RunArtifacts b = produce(dir_b.path, cfg, false);
    CHECK(slurp(a.trajectory_csv) == slurp(b.trajectory_csv));
    CHECK(slurp(a.diagnostics_csv) == slurp(b.diagnostics_csv));
    CHECK(slurp(a.summary_json) == slurp(b.summary_json));
}

TEST_CASE("study CSV carries the degenerate flag") {
    TempDir dir("bfsi_io_study");
    const RefinementStudy study =
        run_self_convergence_study(scenarios::equilibrium(5.0, 0.3, 8, 1e-2, 0.05), 3);
    const auto path = dir.path / "study.csv";
    write_study_csv(path, study);
    const std::string csv = slurp(path);
    CHECK(csv.find("DEGENERATE") != std::string::npos);
    CHECK(csv.rfind("level,n_cells,dt,error,order_vs_prev,status\n", 0) == 0);
}

TEST_CASE("K=0 summary reports the limit position and fitted rate") {
    TempDir dir("bfsi_io_k0");
    const SimConfig cfg = scenarios::wave(0.0, 0.0, 32, 1e-2, 8.0);
    const RunArtifacts art = produce(dir.path, cfg, false);
    const nlohmann::json summary = nlohmann::json::parse(slurp(art.summary_json));
    REQUIRE(summary.contains("h_star"));
    CHECK(summary["h_star"]["violations_theorem"] == 0);
    CHECK(summary["decay"]["fitted_rate"].get<double>() >= 0.25);
    CHECK(summary["decay"]["envelope"]["verdict"] == "PASS");
}
