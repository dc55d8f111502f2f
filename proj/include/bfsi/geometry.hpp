#pragma once

#include <vector>

#include "bfsi/grid.hpp"

namespace bfsi {

/// Interface-fitted geometry at one instant. The physical domain
/// (-1,1) \ {h} maps onto the reference grid by one affine piece per
/// subdomain, so each subdomain carries a constant Jacobian.
struct GeometrySnapshot {
    explicit GeometrySnapshot(double position);

    double h;
    double j_left;   // 1 + h
    double j_right;  // 1 - h
};

/// y(xi): affine per subdomain, xi = 0 lands on h.
double map_to_physical(double xi, double h);

/// Exact inverse of map_to_physical.
double map_to_reference(double y, double h);

/// ALE mesh velocity at reference coordinate xi when the interface moves
/// with speed g: linear blend, zero at the walls, g at the interface.
double mesh_velocity(double xi, double g);

/// Piecewise-linear interface test function: 1 at h, 0 at the walls.
double eval_phi(double y, double h);

/// Physical node positions of `grid` for interface position h.
std::vector<double> physical_nodes(const ReferenceGrid& grid, double h);

}  // namespace bfsi
