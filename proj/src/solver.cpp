#include "bfsi/solver.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "bfsi/kernels.hpp"
#include "bfsi/tridiag.hpp"

namespace bfsi {

namespace {

std::string at_time(double t) { return " at t = " + std::to_string(t); }

void pin_wall_rows(Tridiagonal& m, std::vector<double>& rhs) {
    const std::size_t n = m.size();
    m.diag[0] = 1.0;
    m.upper[0] = 0.0;
    rhs[0] = 0.0;
    m.diag[n - 1] = 1.0;
    m.lower[n - 1] = 0.0;
    rhs[n - 1] = 0.0;
}

void check_finite_solution(const std::vector<double>& v, double t) {
    for (double x : v) {
        if (!std::isfinite(x))
            throw LinearSolveFailure("non-finite solution" + at_time(t));
    }
}

/// Adds dt * (fluid source + particle source) load to `rhs`, using the
/// forcing geometry split at the interface node.
void add_mms_loads(std::vector<double>& rhs, const MmsSources& mms, double t_load,
                   const ReferenceGrid& grid, const AssembledOperators& ops,
                   double dt) {
    const std::size_t ip = grid.particle_index;
    const std::vector<double> y = physical_nodes(grid, ops.geom.h);
    for (std::size_t i = 1; i + 1 < grid.n_nodes; ++i) {
        if (i == ip) continue;
        rhs[i] += dt * ops.fluid_mass[i] * mms.fluid_source(t_load, y[i]);
    }
    const double half_left = 0.5 * grid.dxi * ops.geom.j_left;
    const double half_right = 0.5 * grid.dxi * ops.geom.j_right;
    rhs[ip] += dt * (half_left * mms.fluid_source_left(t_load, y[ip]) +
                     half_right * mms.fluid_source_right(t_load, y[ip]) +
                     mms.particle_source(t_load));
}

State step_semi_implicit(const State& s, const ValidatedConfig& cfg,
                         const AssembledOperators& ops, const ControlLaw& law,
                         const MmsSources* mms, StepStats* stats) {
    const SimConfig& c = cfg.get();
    const double dt = c.dt;
    const std::size_t n = ops.n_nodes();
    const std::size_t ip = ops.particle_index();
    const ReferenceGrid grid(c.n_cells);

    const double u = control_force(law, s.t, s.h);

    // System: (M + dt*(A + C + G/2)) v_new = M v_old + dt loads.
    Tridiagonal system = ops.convection(s.v, s.g);
    system.add_scaled(ops.stiffness, 1.0);
    const std::vector<double> geo = ops.geometric_diagonal(s.g);
    for (std::size_t i = 0; i < n; ++i) {
        system.lower[i] *= dt;
        system.diag[i] = dt * (system.diag[i] + 0.5 * geo[i]) + ops.mass[i];
        system.upper[i] *= dt;
    }

    std::vector<double> rhs(n);
    for (std::size_t i = 0; i < n; ++i) rhs[i] = ops.mass[i] * s.v[i];
    rhs[ip] += dt * u;
    if (mms) add_mms_loads(rhs, *mms, s.t + dt, grid, ops, dt);
    pin_wall_rows(system, rhs);

    State out;
    out.t = s.t + dt;
    try {
        out.v = solve_tridiagonal(system, rhs);
    } catch (const LinearSolveFailure& e) {
        throw LinearSolveFailure(std::string(e.what()) + at_time(out.t));
    }
    check_finite_solution(out.v, out.t);

    out.v.front() = 0.0;
    out.v.back() = 0.0;
    out.g = out.v[ip];
    out.h = s.h + dt * out.g;
    if (!(out.h > -1.0 && out.h < 1.0)) {
        throw CollisionAbort(out.t, out.h,
                             "particle reached the wall: h = " + std::to_string(out.h) +
                                 at_time(out.t));
    }

    if (stats) {
        stats->picard_iterations = 0;
        stats->picard_residual = 0.0;
        stats->dissipation_rate = kernels::diff_sq_weighted(out.v, ops.inv_dy);
        stats->applied_control = u;
    }
    return out;
}

State step_crank_nicolson(const State& s, const ValidatedConfig& cfg,
                          const ControlLaw& law, const MmsSources* mms,
                          StepStats* stats) {
    const SimConfig& c = cfg.get();
    const double dt = c.dt;
    const ReferenceGrid grid(c.n_cells);
    const std::size_t n = grid.n_nodes;
    const std::size_t ip = grid.particle_index;
    const double t_mid = s.t + 0.5 * dt;
    const double t_new = s.t + dt;

    std::vector<double> v_next = s.v;
    double g_next = s.g;
    double h_next = s.h + dt * s.g;  // predictor

    double residual = 0.0;
    bool converged = false;
    int iterations = 0;
    double applied_u = 0.0;

    std::vector<double> vc(n), lv(n), rhs(n);
    for (int k = 0; k < c.picard_max; ++k) {
        ++iterations;
        const double h_mid = 0.5 * (s.h + h_next);
        if (!(h_mid > -1.0 && h_mid < 1.0)) {
            throw CollisionAbort(t_mid, h_mid,
                                 "particle reached the wall during the step" +
                                     at_time(t_mid));
        }
        const double g_mid = 0.5 * (s.g + g_next);
        const AssembledOperators ops = assemble(grid, GeometrySnapshot(h_mid));

        kernels::axpby(0.5, s.v, 0.5, v_next, vc);
        Tridiagonal transport = ops.convection(vc, g_mid);
        transport.add_scaled(ops.stiffness, 1.0);
        const std::vector<double> geo = ops.geometric_diagonal(g_mid);
        for (std::size_t i = 0; i < n; ++i) transport.diag[i] += 0.5 * geo[i];

        // (M + dt/2 L) v_new = M v_old - dt/2 L v_old + dt loads(t_mid)
        transport.apply(s.v, lv);
        for (std::size_t i = 0; i < n; ++i)
            rhs[i] = ops.mass[i] * s.v[i] - 0.5 * dt * lv[i];
        applied_u = control_force(law, t_mid, h_mid);
        rhs[ip] += dt * applied_u;
        if (mms) add_mms_loads(rhs, *mms, t_mid, grid, ops, dt);

        Tridiagonal system = transport;
        for (std::size_t i = 0; i < n; ++i) {
            system.lower[i] *= 0.5 * dt;
            system.diag[i] = 0.5 * dt * system.diag[i] + ops.mass[i];
            system.upper[i] *= 0.5 * dt;
        }
        pin_wall_rows(system, rhs);

        std::vector<double> v_new;
        try {
            v_new = solve_tridiagonal(system, rhs);
        } catch (const LinearSolveFailure& e) {
            throw LinearSolveFailure(std::string(e.what()) + at_time(t_new));
        }
        check_finite_solution(v_new, t_new);
        v_new.front() = 0.0;
        v_new.back() = 0.0;
        const double g_new = v_new[ip];
        const double h_new = s.h + 0.5 * dt * (s.g + g_new);

        residual = std::abs(h_new - h_next);
        for (std::size_t i = 0; i < n; ++i)
            residual = std::max(residual, std::abs(v_new[i] - v_next[i]));

        v_next = std::move(v_new);
        g_next = g_new;
        h_next = h_new;
        if (residual <= c.picard_tol) {
            converged = true;
            break;
        }
    }

    if (!converged) {
        throw NonConvergence(t_new, "Picard iteration exhausted " +
                                        std::to_string(c.picard_max) +
                                        " iterations (residual " +
                                        std::to_string(residual) + ")" +
                                        at_time(t_new));
    }
    if (!(h_next > -1.0 && h_next < 1.0)) {
        throw CollisionAbort(t_new, h_next,
                             "particle reached the wall: h = " +
                                 std::to_string(h_next) + at_time(t_new));
    }

    State out;
    out.t = t_new;
    out.v = std::move(v_next);
    out.g = g_next;
    out.h = h_next;

    if (stats) {
        stats->picard_iterations = iterations;
        stats->picard_residual = residual;
        const double h_mid = 0.5 * (s.h + out.h);
        const AssembledOperators ops_mid = assemble(grid, GeometrySnapshot(h_mid));
        kernels::axpby(0.5, s.v, 0.5, out.v, vc);
        stats->dissipation_rate = kernels::diff_sq_weighted(vc, ops_mid.inv_dy);
        stats->applied_control = applied_u;
    }
    return out;
}

double state_dissipation_rate(const State& s, const ReferenceGrid& grid) {
    const AssembledOperators ops = assemble(grid, GeometrySnapshot(s.h));
    return kernels::diff_sq_weighted(s.v, ops.inv_dy);
}

}  // namespace

State step(const State& state, const ValidatedConfig& cfg,
           const AssembledOperators& ops, const ControlLaw& law,
           const MmsSources* mms, StepStats* stats) {
    if (cfg->scheme == Scheme::crank_nicolson_picard) {
        return step_crank_nicolson(state, cfg, law, mms, stats);
    }
    return step_semi_implicit(state, cfg, ops, law, mms, stats);
}

State step(const State& state, const ValidatedConfig& cfg) {
    const ReferenceGrid grid(cfg->n_cells);
    const AssembledOperators ops = assemble(grid, GeometrySnapshot(state.h));
    const ControlLaw law = ControlLaw::feedback(cfg->K, cfg->h1);
    if (cfg->forcing.present()) {
        const MmsSources mms = MmsSources::from_spec(cfg->forcing, cfg->K, cfg->h1);
        return step(state, cfg, ops, law, &mms);
    }
    return step(state, cfg, ops, law, nullptr);
}

Trajectory run_simulation(const ValidatedConfig& cfg, RunOptions options) {
    return run_simulation(cfg, ControlLaw::feedback(cfg->K, cfg->h1), options);
}

Trajectory run_simulation(const ValidatedConfig& cfg, const ControlLaw& law,
                          RunOptions options) {
    const SimConfig& c = cfg.get();
    const ReferenceGrid grid(c.n_cells);
    const long n_steps = std::max(1L, std::lround(c.t_final / c.dt));

    std::optional<MmsSources> mms_storage;
    if (c.forcing.present()) {
        mms_storage = MmsSources::from_spec(c.forcing, c.K, c.h1);
    }
    const MmsSources* mms = mms_storage ? &*mms_storage : nullptr;

    const std::size_t stride =
        options.store_stride == 0 ? static_cast<std::size_t>(n_steps)
                                  : options.store_stride;

    Trajectory traj;
    const std::size_t stored = static_cast<std::size_t>(n_steps) / stride + 2;
    traj.states.reserve(stored);
    traj.dissipation_cum.reserve(stored);
    traj.controls.reserve(stored);

    State s = initialize_state(cfg);
    traj.states.push_back(s);
    traj.dissipation_cum.push_back(0.0);

    double dissipation = 0.0;
    double prev_rate =
        options.trapezoid_dissipation ? state_dissipation_rate(s, grid) : 0.0;

    for (long k = 0; k < n_steps; ++k) {
        StepStats stats;
        State next;
        if (c.scheme == Scheme::crank_nicolson_picard) {
            next = step_crank_nicolson(s, cfg, law, mms, &stats);
        } else {
            const AssembledOperators ops = assemble(grid, GeometrySnapshot(s.h));
            next = step_semi_implicit(s, cfg, ops, law, mms, &stats);
        }
        next.t = static_cast<double>(k + 1) * c.dt;

        if (options.trapezoid_dissipation) {
            const double rate = state_dissipation_rate(next, grid);
            dissipation += c.dt * (prev_rate + rate);
            prev_rate = rate;
        } else {
            dissipation += 2.0 * c.dt * stats.dissipation_rate;
        }

        s = std::move(next);
        const std::size_t done = static_cast<std::size_t>(k + 1);
        if (done % stride == 0 || k + 1 == n_steps) {
            traj.controls.push_back(stats.applied_control);
            traj.dissipation_cum.push_back(dissipation);
            traj.states.push_back(s);
        }
    }
    return traj;
}

}  // namespace bfsi
