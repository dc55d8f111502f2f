#pragma once

#include <span>
#include <vector>

#include "bfsi/geometry.hpp"
#include "bfsi/grid.hpp"
#include "bfsi/tridiag.hpp"

namespace bfsi {

/// Monolithic weak-form operators on the reference grid for one geometry.
///
/// The velocity space is piecewise linear with the particle as a shared
/// degree of freedom at the interface node, so the interface force enters
/// through the stiffness row there and needs no separate flux coding.
/// The mass operator is lumped (row sums), which makes the trapezoid
/// quadrature used by the diagnostics the exact energy norm of the scheme.
struct AssembledOperators {
    int n_cells = 0;
    GeometrySnapshot geom{0.0};

    /// Lumped mass diagonal including the unit particle inertia.
    std::vector<double> mass;
    /// Fluid part only (no particle inertia); also the trapezoid weights.
    std::vector<double> fluid_mass;
    /// d(fluid_mass)/dh, used for the geometric part of the mesh motion.
    std::vector<double> mass_slope;
    /// Stiffness: velocity-gradient products with per-subdomain 1/J weights.
    Tridiagonal stiffness{0};
    /// Reciprocal element lengths (stiffness energy weights), size 2*n_cells.
    std::vector<double> inv_dy;
    /// Control load vector: 1 at the particle node.
    std::vector<double> control_load;

    std::size_t n_nodes() const { return mass.size(); }
    std::size_t particle_index() const { return static_cast<std::size_t>(n_cells); }

    /// Skew-form transport operator C for coefficient state `vc` and
    /// interface speed `g`: the energy-neutral convection split minus the
    /// skew part of the mesh-motion advection. Exactly antisymmetric, so
    /// <C x, x> = 0 for every x.
    Tridiagonal convection(std::span<const double> vc, double g) const;

    /// Diagonal of the geometric (non-skew) part of the mesh-motion term:
    /// g * mass_slope. Together with `convection` this completes the
    /// transport discretization.
    std::vector<double> geometric_diagonal(double g) const;

    /// Mesh velocity at the grid nodes for interface speed g.
    std::vector<double> mesh_velocity_nodes(double g) const;
};

/// Assembles all geometry-dependent operators. Throws GeometryError for
/// degenerate geometry (via GeometrySnapshot).
AssembledOperators assemble(const ReferenceGrid& grid, const GeometrySnapshot& geom);

}  // namespace bfsi
