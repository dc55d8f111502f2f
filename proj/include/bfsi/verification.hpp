#pragma once

#include <span>
#include <string>
#include <vector>

#include "bfsi/config.hpp"
#include "bfsi/state.hpp"

namespace bfsi {

struct RefinementLevel {
    int n_cells;
    double dt;
};

enum class StudyKind { mms, self_reference, energy_residual };

struct RefinementStudy {
    StudyKind kind = StudyKind::mms;
    std::vector<RefinementLevel> levels;
    std::vector<double> errors;
    std::vector<double> pair_orders;  // log2(e_k / e_{k+1})
    double observed_order = 0.0;      // median of pair_orders
    bool degenerate = false;          // all errors identically zero
};

/// Runs the same scenario at (n_cells * factor, dt / factor^2); factor >= 4.
Trajectory reference_solve(const ValidatedConfig& cfg, int refine_factor);

/// Nodal L2 distance between final states of a coarse run and a reference
/// run whose grid refines the coarse one by `factor`, plus the interface
/// position/velocity gaps.
double state_distance(const State& coarse, const State& fine, int factor);

/// Final-time error of a forced run against its manufactured target.
double mms_final_error(const ValidatedConfig& cfg);

/// Per-pair observed orders log2(e_k/e_{k+1}); throws DegenerateStudy if
/// any error vanishes.
std::vector<double> convergence_order_pairs(std::span<const double> errors);

/// Median of the per-pair orders of a populated study.
double convergence_order(const RefinementStudy& study);

/// Forced-run study, n_cells doubling per level, dt scaled with the square
/// of the cell size (so the spatial order is observable past the temporal
/// error). `base` supplies the coarsest level.
RefinementStudy run_mms_spatial_study(const SimConfig& base, int n_levels);

/// Forced-run study at fixed n_cells with dt halving per level.
RefinementStudy run_mms_temporal_study(const SimConfig& base, int n_levels);

/// Unforced study against reference_solve of the finest level; n_cells and
/// dt both halve per level (dt doubling resolution each level).
RefinementStudy run_self_convergence_study(const SimConfig& base, int n_levels,
                                           int refine_factor = 4);

/// Energy-identity residual study: fixed grid, dt halving per level.
RefinementStudy run_energy_residual_study(const SimConfig& base, int n_levels);

/// Runs cfg and a perturbed copy (v0 + delta, g0 + delta, h0 + delta) and
/// returns the sup-over-time state distance (max nodal gap + interface
/// gaps). Scales roughly linearly in delta for small delta.
double continuity_probe(const ValidatedConfig& cfg, double delta);

}  // namespace bfsi
