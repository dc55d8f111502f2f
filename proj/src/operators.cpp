#include "bfsi/operators.hpp"

namespace bfsi {

AssembledOperators assemble(const ReferenceGrid& grid, const GeometrySnapshot& geom) {
    AssembledOperators ops;
    ops.n_cells = grid.n_cells;
    ops.geom = geom;

    const std::size_t n = grid.n_nodes;
    const std::size_t ip = grid.particle_index;
    const double dxi = grid.dxi;
    const double dy_left = dxi * geom.j_left;
    const double dy_right = dxi * geom.j_right;

    ops.fluid_mass.assign(n, 0.0);
    ops.mass_slope.assign(n, 0.0);
    ops.inv_dy.assign(n - 1, 0.0);
    ops.stiffness = Tridiagonal(n);
    ops.control_load.assign(n, 0.0);
    ops.control_load[ip] = 1.0;

    for (std::size_t e = 0; e + 1 < n; ++e) {
        const bool left = e < ip;
        const double dy = left ? dy_left : dy_right;
        const double w = 1.0 / dy;
        ops.inv_dy[e] = w;

        ops.stiffness.diag[e] += w;
        ops.stiffness.diag[e + 1] += w;
        ops.stiffness.upper[e] -= w;
        ops.stiffness.lower[e + 1] -= w;

        const double half = 0.5 * dy;
        ops.fluid_mass[e] += half;
        ops.fluid_mass[e + 1] += half;

        // fluid_mass depends on h only through dy = dxi*(1 +/- h).
        const double slope = left ? 0.5 * dxi : -0.5 * dxi;
        ops.mass_slope[e] += slope;
        ops.mass_slope[e + 1] += slope;
    }

    ops.mass = ops.fluid_mass;
    ops.mass[ip] += 1.0;  // unit particle inertia on the shared node

    return ops;
}

Tridiagonal AssembledOperators::convection(std::span<const double> vc, double g) const {
    const std::size_t n = n_nodes();
    Tridiagonal c(n);
    std::vector<double> w = mesh_velocity_nodes(g);
    // Edge coefficient shared with opposite signs by the two adjacent rows,
    // so the matrix is exactly antisymmetric.
    for (std::size_t e = 0; e + 1 < n; ++e) {
        const double conv = (vc[e] + vc[e + 1]) / 6.0;
        const double ale = (w[e] + w[e + 1]) / 4.0;
        const double coeff = conv - ale;
        c.upper[e] += coeff;
        c.lower[e + 1] -= coeff;
    }
    return c;
}

std::vector<double> AssembledOperators::geometric_diagonal(double g) const {
    std::vector<double> d(n_nodes());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = g * mass_slope[i];
    return d;
}

std::vector<double> AssembledOperators::mesh_velocity_nodes(double g) const {
    const std::size_t n = n_nodes();
    const std::size_t ip = particle_index();
    std::vector<double> w(n);
    const double dxi = 1.0 / static_cast<double>(n_cells);
    for (std::size_t i = 0; i < n; ++i) {
        const double blend = (i <= ip)
                                 ? static_cast<double>(i) * dxi
                                 : static_cast<double>(n - 1 - i) * dxi;
        w[i] = blend * g;
    }
    return w;
}

}  // namespace bfsi
