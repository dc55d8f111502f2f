#include "bfsi/state.hpp"

#include <cmath>
#include <string>

#include "bfsi/control.hpp"
#include "bfsi/geometry.hpp"
#include "bfsi/grid.hpp"

namespace bfsi {

void State::check_invariants() const {
    if (v.size() < 3 || v.size() % 2 == 0)
        throw DomainError("state velocity vector must have odd length >= 3");
    if (v.front() != 0.0 || v.back() != 0.0)
        throw DomainError("wall velocities must be exactly zero");
    if (v[particle_index()] != g)
        throw DomainError("particle node must carry the particle velocity exactly");
    if (!(h > -1.0 && h < 1.0))
        throw DomainError("particle position " + std::to_string(h) +
                          " outside (-1,1)");
    for (double x : v) {
        if (!std::isfinite(x)) throw DomainError("non-finite velocity value");
    }
    if (!std::isfinite(g) || !std::isfinite(t))
        throw DomainError("non-finite state scalar");
}

State initialize_state(const ValidatedConfig& cfg) {
    const SimConfig& c = cfg.get();
    const ReferenceGrid grid(c.n_cells);

    State s;
    s.t = 0.0;
    s.h = c.h0;
    s.g = c.g0;
    s.v.resize(grid.n_nodes);

    if (c.v0.kind == InitialVelocity::Kind::samples) {
        s.v = c.v0.samples;
    } else if (c.v0.kind == InitialVelocity::Kind::mms_target) {
        const MmsSources mms = MmsSources::from_spec(c.forcing, c.K, c.h1);
        const std::vector<double> y = physical_nodes(grid, c.h0);
        for (std::size_t i = 0; i < grid.n_nodes; ++i) s.v[i] = mms.v_star(0.0, y[i]);
    } else {
        const std::vector<double> y = physical_nodes(grid, c.h0);
        for (std::size_t i = 0; i < grid.n_nodes; ++i) s.v[i] = c.v0(y[i]);
    }

    for (std::size_t i = 0; i < s.v.size(); ++i) {
        if (!std::isfinite(s.v[i])) {
            throw EvaluationError("v0 non-finite at node " + std::to_string(i));
        }
    }

    s.v.front() = 0.0;
    s.v.back() = 0.0;
    s.v[grid.particle_index] = c.g0;
    s.check_invariants();
    return s;
}

}  // namespace bfsi
