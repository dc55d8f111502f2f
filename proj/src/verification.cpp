#include "bfsi/verification.hpp"

#include <algorithm>
#include <cmath>

#include "bfsi/control.hpp"
#include "bfsi/diagnostics.hpp"
#include "bfsi/geometry.hpp"
#include "bfsi/grid.hpp"
#include "bfsi/kernels.hpp"
#include "bfsi/operators.hpp"
#include "bfsi/solver.hpp"

namespace bfsi {

namespace {

std::vector<double> trapezoid_weights(const State& s) {
    const ReferenceGrid grid((static_cast<int>(s.v.size()) - 1) / 2);
    return assemble(grid, GeometrySnapshot(s.h)).fluid_mass;
}

SimConfig refined_copy(const SimConfig& base, int n_cells, double dt) {
    if (base.v0.kind == InitialVelocity::Kind::samples) {
        throw DomainError("nodal v0 cannot be re-sampled onto a refined grid");
    }
    SimConfig cfg = base;
    cfg.n_cells = n_cells;
    cfg.dt = dt;
    return cfg;
}

double median(std::vector<double> values) {
    if (values.empty()) throw DegenerateStudy("no order pairs");
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    if (n % 2 == 1) return values[n / 2];
    return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

void finish_study(RefinementStudy& study) {
    study.degenerate =
        std::all_of(study.errors.begin(), study.errors.end(),
                    [](double e) { return e == 0.0; });
    if (study.degenerate) return;
    study.pair_orders = convergence_order_pairs(study.errors);
    study.observed_order = median(study.pair_orders);
}

}  // namespace

Trajectory reference_solve(const ValidatedConfig& cfg, int refine_factor) {
    if (refine_factor < 4) throw DomainError("refine_factor >= 4 required");
    const SimConfig& c = cfg.get();
    const SimConfig fine = refined_copy(
        c, c.n_cells * refine_factor,
        c.dt / (static_cast<double>(refine_factor) * refine_factor));
    // Oracle runs keep only the endpoints; storing every state of a
    // factor-16 time refinement would dominate memory.
    return run_simulation(validate_config(fine), RunOptions::endpoints_only());
}

double state_distance(const State& coarse, const State& fine, int factor) {
    const std::size_t nc = coarse.v.size();
    if (fine.v.size() != static_cast<std::size_t>(factor) * (nc - 1) + 1) {
        throw DomainError("reference grid does not refine the coarse grid");
    }
    const std::vector<double> weights = trapezoid_weights(coarse);
    double acc = 0.0;
    for (std::size_t i = 0; i < nc; ++i) {
        const double d = coarse.v[i] - fine.v[i * static_cast<std::size_t>(factor)];
        acc += weights[i] * d * d;
    }
    return std::sqrt(acc) + std::abs(coarse.h - fine.h) + std::abs(coarse.g - fine.g);
}

double mms_final_error(const ValidatedConfig& cfg) {
    const SimConfig& c = cfg.get();
    if (!c.forcing.present()) throw DomainError("mms_final_error requires forcing");
    const MmsSources mms = MmsSources::from_spec(c.forcing, c.K, c.h1);
    const Trajectory traj = run_simulation(cfg, RunOptions::endpoints_only());
    const State& s = traj.back();

    const ReferenceGrid grid(c.n_cells);
    const std::vector<double> y = physical_nodes(grid, s.h);
    const std::vector<double> weights = trapezoid_weights(s);
    double acc = 0.0;
    for (std::size_t i = 0; i < grid.n_nodes; ++i) {
        const double d = s.v[i] - mms.v_star(s.t, y[i]);
        acc += weights[i] * d * d;
    }
    return std::sqrt(acc) + std::abs(s.h - mms.h_star(s.t)) +
           std::abs(s.g - mms.g_star(s.t));
}

std::vector<double> convergence_order_pairs(std::span<const double> errors) {
    if (errors.size() < 2) throw DegenerateStudy("need at least two error levels");
    std::vector<double> orders;
    for (std::size_t k = 0; k + 1 < errors.size(); ++k) {
        if (errors[k] == 0.0 || errors[k + 1] == 0.0) {
            throw DegenerateStudy("zero error at level " + std::to_string(k));
        }
        orders.push_back(std::log2(errors[k] / errors[k + 1]));
    }
    return orders;
}

double convergence_order(const RefinementStudy& study) {
    if (study.degenerate) throw DegenerateStudy("study is degenerate (all errors zero)");
    return median(study.pair_orders);
}

RefinementStudy run_mms_spatial_study(const SimConfig& base, int n_levels) {
    if (n_levels < 3) throw DomainError("refinement studies need >= 3 levels");
    RefinementStudy study;
    study.kind = StudyKind::mms;
    for (int k = 0; k < n_levels; ++k) {
        const int n = base.n_cells << k;
        const double dt = base.dt / std::pow(4.0, k);
        study.levels.push_back({n, dt});
        study.errors.push_back(mms_final_error(validate_config(refined_copy(base, n, dt))));
    }
    finish_study(study);
    return study;
}

RefinementStudy run_mms_temporal_study(const SimConfig& base, int n_levels) {
    if (n_levels < 3) throw DomainError("refinement studies need >= 3 levels");
    RefinementStudy study;
    study.kind = StudyKind::mms;
    for (int k = 0; k < n_levels; ++k) {
        const double dt = base.dt / std::pow(2.0, k);
        study.levels.push_back({base.n_cells, dt});
        study.errors.push_back(
            mms_final_error(validate_config(refined_copy(base, base.n_cells, dt))));
    }
    finish_study(study);
    return study;
}

RefinementStudy run_self_convergence_study(const SimConfig& base, int n_levels,
                                           int refine_factor) {
    if (n_levels < 3) throw DomainError("refinement studies need >= 3 levels");
    RefinementStudy study;
    study.kind = StudyKind::self_reference;

    std::vector<Trajectory> runs;
    for (int k = 0; k < n_levels; ++k) {
        const int n = base.n_cells << k;
        const double dt = base.dt / std::pow(2.0, k);
        study.levels.push_back({n, dt});
        runs.push_back(run_simulation(validate_config(refined_copy(base, n, dt))));
    }

    const RefinementLevel finest = study.levels.back();
    const Trajectory reference =
        reference_solve(validate_config(refined_copy(base, finest.n_cells, finest.dt)),
                        refine_factor);
    const int n_ref = finest.n_cells * refine_factor;
    for (int k = 0; k < n_levels; ++k) {
        const int factor = n_ref / study.levels[static_cast<std::size_t>(k)].n_cells;
        study.errors.push_back(
            state_distance(runs[static_cast<std::size_t>(k)].back(), reference.back(),
                           factor));
    }
    finish_study(study);
    return study;
}

RefinementStudy run_energy_residual_study(const SimConfig& base, int n_levels) {
    if (n_levels < 3) throw DomainError("refinement studies need >= 3 levels");
    RefinementStudy study;
    study.kind = StudyKind::energy_residual;
    for (int k = 0; k < n_levels; ++k) {
        const double dt = base.dt / std::pow(2.0, k);
        study.levels.push_back({base.n_cells, dt});
        const Trajectory traj =
            run_simulation(validate_config(refined_copy(base, base.n_cells, dt)));
        study.errors.push_back(max_energy_identity_residual(traj, base.K, base.h1));
    }
    finish_study(study);
    return study;
}

double continuity_probe(const ValidatedConfig& cfg, double delta) {
    const SimConfig& c = cfg.get();
    if (c.forcing.present())
        throw DomainError("continuity_probe applies to unforced scenarios");
    if (!(delta >= 0.0)) throw DomainError("delta must be nonnegative");

    SimConfig perturbed = c;
    perturbed.h0 = c.h0 + delta;
    perturbed.g0 = c.g0 + delta;
    if (c.v0.kind == InitialVelocity::Kind::samples) {
        for (double& s : perturbed.v0.samples) s += delta;
    } else {
        const InitialVelocity original = c.v0;
        perturbed.v0 = InitialVelocity::custom(
            [original, delta](double y) { return original(y) + delta; });
    }

    const Trajectory base_run = run_simulation(cfg);
    const Trajectory pert_run = run_simulation(validate_config(perturbed));

    double metric = 0.0;
    const std::size_t n = std::min(base_run.size(), pert_run.size());
    for (std::size_t k = 0; k < n; ++k) {
        const State& a = base_run.states[k];
        const State& b = pert_run.states[k];
        double gap = std::abs(a.h - b.h) + std::abs(a.g - b.g);
        for (std::size_t i = 0; i < a.v.size(); ++i) {
            gap = std::max(gap, std::abs(a.v[i] - b.v[i]));
        }
        metric = std::max(metric, gap);
    }
    return metric;
}

}  // namespace bfsi
