#include "bfsi/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bfsi/diagnostics.hpp"
#include "bfsi/solver.hpp"
#include "bfsi/verification.hpp"

namespace bfsi {

namespace scenarios {

SimConfig wave(double K, double h1, int n_cells, double dt, double t_final) {
    SimConfig cfg;
    cfg.K = K;
    cfg.h1 = h1;
    cfg.h0 = 0.2;
    cfg.g0 = 0.5;
    cfg.v0 = InitialVelocity::sin_pi(1.0);
    cfg.n_cells = n_cells;
    cfg.dt = dt;
    cfg.t_final = t_final;
    return cfg;
}

SimConfig equilibrium(double K, double h, int n_cells, double dt, double t_final) {
    SimConfig cfg;
    cfg.K = K;
    cfg.h1 = h;
    cfg.h0 = h;
    cfg.g0 = 0.0;
    cfg.v0 = InitialVelocity::zero();
    cfg.n_cells = n_cells;
    cfg.dt = dt;
    cfg.t_final = t_final;
    return cfg;
}

SimConfig manufactured(Scheme scheme, int n_cells, double dt, double t_final) {
    SimConfig cfg;
    cfg.K = 0.0;
    cfg.h1 = 0.0;
    cfg.forcing = ForcingSpec::moving_bump(0.1, 0.1, 1.0);
    cfg.h0 = 0.1;
    cfg.g0 = 0.1;  // amplitude * omega at t = 0
    cfg.v0 = InitialVelocity::mms_target();
    cfg.n_cells = n_cells;
    cfg.dt = dt;
    cfg.t_final = t_final;
    cfg.scheme = scheme;
    cfg.picard_tol = 1e-12;
    cfg.picard_max = 100;
    return cfg;
}

}  // namespace scenarios

namespace {

constexpr double kSlack = 1e-6;

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(4);
    os << x;
    return os.str();
}

struct SuiteRun {
    std::string name;
    ValidatedConfig cfg;
    Trajectory traj;
    StabilityConstants constants;
    std::vector<DiagnosticsRecord> records;
};

SuiteRun make_run(const std::string& name, const SimConfig& raw) {
    ValidatedConfig cfg = validate_config(raw);
    Trajectory traj = run_simulation(cfg);
    const double alpha = empirical_alpha(traj);
    StabilityConstants sc = stability_constants(cfg, alpha);
    std::vector<DiagnosticsRecord> records = evaluate_trajectory(traj, cfg, sc);
    return SuiteRun{name, std::move(cfg), std::move(traj), sc, std::move(records)};
}

std::vector<double> column_t(const SuiteRun& r) {
    std::vector<double> out(r.records.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = r.records[i].t;
    return out;
}

std::vector<double> column_E(const SuiteRun& r) {
    std::vector<double> out(r.records.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = r.records[i].E;
    return out;
}

}  // namespace

bool all_passed(const std::vector<CriterionResult>& results) {
    return std::all_of(results.begin(), results.end(),
                       [](const CriterionResult& r) { return r.pass; });
}

std::vector<CriterionResult> run_acceptance_suite(
    const std::function<void(const CriterionResult&)>& report) {
    std::vector<CriterionResult> results;
    auto add = [&](int id, const std::string& name, bool pass,
                   const std::string& detail) {
        results.push_back({id, name, pass, detail});
        if (report) report(results.back());
    };

    // Shared long-horizon runs (n = 64, dt = 1e-3, t = 40).
    SuiteRun run_k0 = make_run("wave K=0", scenarios::wave(0.0, 0.0, 64, 1e-3, 40.0));
    SuiteRun run_k1 = make_run("wave K=1", scenarios::wave(1.0, 0.0, 64, 1e-3, 40.0));
    SuiteRun run_eq =
        make_run("equilibrium", scenarios::equilibrium(5.0, 0.3, 64, 1e-3, 10.0));

    // 1. Energy identity at fine dt, plus first-order decrease under dt
    //    refinement (fixed grid, horizon 2).
    {
        bool pass = true;
        std::ostringstream detail;
        for (double K : {0.0, 1.0}) {
            const SimConfig fine = scenarios::wave(K, 0.0, 64, 1e-4, 2.0);
            const ValidatedConfig cfg = validate_config(fine);
            const Trajectory traj = run_simulation(cfg);
            const double e0 = compute_energy(traj.front(), K, 0.0);
            const double max_r = max_energy_identity_residual(traj, K, 0.0);
            const bool ok_r = max_r <= 1e-3 * e0;

            SimConfig coarse = fine;
            coarse.dt = 4e-4;
            const RefinementStudy study = run_energy_residual_study(coarse, 3);
            const bool ok_order = !study.degenerate && study.observed_order >= 0.9;

            pass = pass && ok_r && ok_order;
            detail << "K=" << K << ": max|r|=" << fmt(max_r) << " (tol "
                   << fmt(1e-3 * e0) << "), dt-order=" << fmt(study.observed_order)
                   << "; ";
        }
        add(1, "energy identity residual", pass, detail.str());
    }

    // 2. K = 0 exponential decay with rate 1/4.
    {
        const std::vector<double> ts = column_t(run_k0);
        const std::vector<double> es = column_E(run_k0);
        const double e0 = es.front();
        const int violations = count_envelope_violations(ts, es, e0, 0.25, kSlack);
        const DecayFit fit = decay_fit(ts, es, 20.0, 40.0);
        const bool pass = violations == 0 && fit.rate >= 0.25;
        add(2, "K=0 energy decay envelope", pass,
            "violations=" + std::to_string(violations) +
                ", fitted rate=" + fmt(fit.rate));
    }

    // 3. K = 0 interface limit envelope.
    {
        const HStarResult hs = h_star_estimate(run_k0.traj, run_k0.cfg);
        const bool pass = hs.violations_theorem == 0;
        add(3, "K=0 interface limit", pass,
            "h*=" + fmt(hs.h_star) +
                ", violations=" + std::to_string(hs.violations_theorem) +
                " (proof-tail count " + std::to_string(hs.violations_proof_tail) +
                ", reported only)");
    }

    // 4. K = 1 decay with the constructed rate, and convergence to the target.
    {
        const std::vector<double> ts = column_t(run_k1);
        const std::vector<double> es = column_E(run_k1);
        const double e0 = es.front();
        const double eta = run_k1.constants.eta;
        const int violations =
            count_envelope_violations(ts, es, 16.0 * e0, eta, kSlack);
        const double final_gap = std::abs(run_k1.traj.back().h - 0.0);
        const bool pass = violations == 0 && final_gap <= 1e-3;
        add(4, "K=1 decay envelope and target", pass,
            "eta=" + fmt(eta) + ", violations=" + std::to_string(violations) +
                ", |h(T)-h1|=" + fmt(final_gap));
    }

    // 5. Corridor containment across the suite; every run completed.
    {
        int violations = 0;
        for (const SuiteRun* run : {&run_k0, &run_k1, &run_eq}) {
            for (std::size_t k = 0; k < run->records.size(); ++k) {
                const double h = run->traj.states[k].h;
                const DiagnosticsRecord& r = run->records[k];
                if (h < -1.0 + r.kappa1 * (1.0 - kSlack) ||
                    h > 1.0 - r.kappa2 * (1.0 - kSlack)) {
                    ++violations;
                }
            }
        }
        add(5, "no-collision corridor", violations == 0,
            "violations=" + std::to_string(violations) + ", collisions=0");
    }

    // 6. Lyapunov sandwich and decay of the perturbed energy (K = 1).
    {
        int sandwich = 0;
        std::vector<double> ts = column_t(run_k1);
        std::vector<double> vs(run_k1.records.size());
        for (std::size_t k = 0; k < run_k1.records.size(); ++k) {
            const DiagnosticsRecord& r = run_k1.records[k];
            vs[k] = r.V_eps;
            if (r.V_eps < 0.25 * r.E * (1.0 - kSlack) ||
                r.V_eps > 2.0 * r.E * (1.0 + kSlack)) {
                ++sandwich;
            }
        }
        const int violations = count_envelope_violations(
            ts, vs, vs.front(), run_k1.constants.eta, kSlack);
        const bool pass = sandwich == 0 && violations == 0;
        add(6, "Lyapunov sandwich and decay", pass,
            "eps=" + fmt(run_k1.constants.eps) +
                ", sandwich violations=" + std::to_string(sandwich) +
                ", envelope violations=" + std::to_string(violations));
    }

    // 7. Pointwise inequality chain on all suite runs.
    {
        int a2_violations = 0;
        int trace_violations = 0;
        for (const SuiteRun* run : {&run_k0, &run_k1, &run_eq}) {
            for (std::size_t k = 0; k < run->records.size(); ++k) {
                const DiagnosticsRecord& r = run->records[k];
                const double g = run->traj.states[k].g;
                if (std::abs(r.A2) > 4.0 * r.D * (1.0 + kSlack)) ++a2_violations;
                if (g * g > 2.0 * r.D * (1.0 + kSlack)) ++trace_violations;
            }
        }
        const bool pass = a2_violations == 0 && trace_violations == 0;
        add(7, "inequality chain |A2|<=4D, g^2<=2D", pass,
            "A2 violations=" + std::to_string(a2_violations) +
                ", trace violations=" + std::to_string(trace_violations));
    }

    // 8. Weak-form conformance and its decrease under refinement.
    {
        const std::vector<TestPair> family = default_test_family();
        std::vector<double> errors;
        double base_res = 0.0, base_e0 = 0.0;
        const int cells[] = {32, 64, 128};
        const double dts[] = {2e-3, 1e-3, 5e-4};
        for (int lev = 0; lev < 3; ++lev) {
            const ValidatedConfig cfg =
                validate_config(scenarios::wave(0.0, 0.0, cells[lev], dts[lev], 2.0));
            const Trajectory traj = run_simulation(cfg);
            const double res = max_weak_residual(traj, cfg, family);
            errors.push_back(res);
            if (lev == 1) {
                base_res = res;
                base_e0 = compute_energy(traj.front(), 0.0, 0.0);
            }
        }
        const std::vector<double> orders = convergence_order_pairs(errors);
        double order_sum = 0.0;
        for (double o : orders) order_sum += o;
        const double order = order_sum / static_cast<double>(orders.size());
        const bool pass = base_res <= 1e-2 * base_e0 && order >= 0.9;
        add(8, "weak-form conformance", pass,
            "max residual=" + fmt(base_res) + " (tol " + fmt(1e-2 * base_e0) +
                "), order=" + fmt(order));
    }

    // 9. Manufactured-solution convergence orders.
    {
        const SimConfig spatial_base =
            scenarios::manufactured(Scheme::crank_nicolson_picard, 16, 0.05, 1.0);
        const RefinementStudy spatial = run_mms_spatial_study(spatial_base, 3);

        const SimConfig temporal_base =
            scenarios::manufactured(Scheme::semi_implicit_euler, 128, 0.04, 1.0);
        const RefinementStudy temporal = run_mms_temporal_study(temporal_base, 3);

        const bool pass = !spatial.degenerate && spatial.observed_order >= 1.8 &&
                          !temporal.degenerate && temporal.observed_order >= 0.9;
        add(9, "manufactured-solution orders", pass,
            "spatial order=" + fmt(spatial.observed_order) +
                " (>=1.8), temporal order=" + fmt(temporal.observed_order) +
                " (>=0.9)");
    }

    // 10. Equilibrium is an exact fixed point over 1e4 steps.
    {
        double drift = 0.0;
        const State& s0 = run_eq.traj.front();
        for (const State& s : run_eq.traj.states) {
            drift = std::max(drift, std::abs(s.h - s0.h));
            drift = std::max(drift, std::abs(s.g - s0.g));
            for (std::size_t i = 0; i < s.v.size(); ++i) {
                drift = std::max(drift, std::abs(s.v[i] - s0.v[i]));
            }
        }
        add(10, "equilibrium fixed point", drift <= 1e-13,
            "max drift=" + fmt(drift) + " over " +
                std::to_string(run_eq.traj.size() - 1) + " steps");
    }

    return results;
}

}  // namespace bfsi
