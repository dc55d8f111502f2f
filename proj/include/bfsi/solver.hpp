#pragma once

#include "bfsi/config.hpp"
#include "bfsi/control.hpp"
#include "bfsi/operators.hpp"
#include "bfsi/state.hpp"

namespace bfsi {

struct StepStats {
    int picard_iterations = 0;
    double picard_residual = 0.0;
    /// Squared-gradient integral at the point where the scheme evaluates
    /// diffusion; twice this times dt is the per-step dissipation increment.
    double dissipation_rate = 0.0;
    /// Control value actually applied during the step.
    double applied_control = 0.0;
};

/// Advances one time step.
///
/// semi_implicit_euler freezes the geometry and the transport coefficients
/// at the current state, treats diffusion and the transport operators
/// implicitly (the skew forms make their energy contribution vanish
/// exactly), then updates the interface with the new interface velocity.
/// crank_nicolson_picard evaluates everything at the midpoint and resolves
/// the geometry/coefficient coupling by fixed-point iteration.
///
/// `ops` must be assembled at the geometry of `state`; the Picard scheme
/// assembles its own midpoint operators internally.
State step(const State& state, const ValidatedConfig& cfg,
           const AssembledOperators& ops, const ControlLaw& law,
           const MmsSources* mms = nullptr, StepStats* stats = nullptr);

/// Convenience overload: assembles operators at the state's geometry and
/// uses the config's feedback law and forcing.
State step(const State& state, const ValidatedConfig& cfg);

struct RunOptions {
    /// Accumulate dissipation with the trapezoid rule in time instead of
    /// the scheme-consistent rectangle rule (which is what makes the
    /// discrete energy identity telescope).
    bool trapezoid_dissipation = false;
    /// Record every store_stride-th state (plus the initial and final
    /// ones). 0 keeps only the endpoints; reference and study runs use
    /// that to bound memory.
    std::size_t store_stride = 1;

    static RunOptions endpoints_only() {
        RunOptions o;
        o.store_stride = 0;
        return o;
    }
};

/// Runs the configured scenario from t = 0 to t_final (rounded to whole
/// steps), recording every state, the running dissipation integral and the
/// control applied in each step. Deterministic: identical configs produce
/// bit-identical trajectories.
Trajectory run_simulation(const ValidatedConfig& cfg, RunOptions options = {});

/// Same, with an explicit control law replacing the config's feedback.
Trajectory run_simulation(const ValidatedConfig& cfg, const ControlLaw& law,
                          RunOptions options = {});

}  // namespace bfsi
