#pragma once

#include <cstddef>
#include <vector>

#include "bfsi/config.hpp"

namespace bfsi {

/// Discrete solution at one instant: nodal velocities on the reference
/// grid plus the interface position and velocity. The particle node is a
/// shared degree of freedom, so v[particle_index()] == g holds exactly.
struct State {
    double t = 0.0;
    std::vector<double> v;
    double h = 0.0;
    double g = 0.0;

    std::size_t particle_index() const { return (v.size() - 1) / 2; }

    /// Throws DomainError on any violated invariant (exact comparisons for
    /// the shared-node and wall values).
    void check_invariants() const;
};

/// Projects the configured initial data onto the grid: v0 sampled at the
/// mapped physical nodes, walls zeroed, particle node overwritten with g0.
State initialize_state(const ValidatedConfig& cfg);

/// Time-ordered run record. dissipation_cum[k] is the accumulated value of
/// twice the space-time integral of the squared velocity gradient up to
/// states[k]; controls[k] is the input applied over step k -> k+1.
struct Trajectory {
    std::vector<State> states;
    std::vector<double> dissipation_cum;
    std::vector<double> controls;

    std::size_t size() const { return states.size(); }
    const State& front() const { return states.front(); }
    const State& back() const { return states.back(); }
};

}  // namespace bfsi
