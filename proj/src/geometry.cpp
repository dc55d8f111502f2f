#include "bfsi/geometry.hpp"

#include <cmath>
#include <string>

#include "bfsi/errors.hpp"

namespace bfsi {

namespace {

void require_unit_interval(double x, const char* name) {
    if (!(x >= -1.0 && x <= 1.0)) {
        throw DomainError(std::string(name) + " = " + std::to_string(x) +
                          " outside [-1,1]");
    }
}

void require_interior(double h) {
    if (!(h > -1.0 && h < 1.0)) {
        throw DomainError("interface position h = " + std::to_string(h) +
                          " outside (-1,1)");
    }
}

}  // namespace

GeometrySnapshot::GeometrySnapshot(double position)
    : h(position), j_left(1.0 + position), j_right(1.0 - position) {
    if (!(j_left > 0.0 && j_right > 0.0)) {
        throw GeometryError("degenerate geometry: h = " + std::to_string(position));
    }
}

double map_to_physical(double xi, double h) {
    require_unit_interval(xi, "xi");
    require_interior(h);
    // Algebraically -1 + (xi+1)(1+h) on the left and h + xi(1-h) on the
    // right; this form is exact at xi = -1, 0, 1.
    return xi + h * (1.0 - std::abs(xi));
}

double map_to_reference(double y, double h) {
    require_unit_interval(y, "y");
    require_interior(h);
    if (y <= h) return (y - h) / (1.0 + h);
    return (y - h) / (1.0 - h);
}

double mesh_velocity(double xi, double g) {
    require_unit_interval(xi, "xi");
    return (xi <= 0.0) ? (xi + 1.0) * g : (1.0 - xi) * g;
}

double eval_phi(double y, double h) {
    require_unit_interval(y, "y");
    require_interior(h);
    if (y < h) return (y + 1.0) / (1.0 + h);
    if (y > h) return (1.0 - y) / (1.0 - h);
    return 1.0;
}

std::vector<double> physical_nodes(const ReferenceGrid& grid, double h) {
    require_interior(h);
    std::vector<double> y(grid.n_nodes);
    for (std::size_t i = 0; i < grid.n_nodes; ++i) {
        const double xi = grid.xi[i];
        y[i] = xi + h * (1.0 - std::abs(xi));
    }
    return y;
}

}  // namespace bfsi
