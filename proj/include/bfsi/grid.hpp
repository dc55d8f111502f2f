#pragma once

#include <cstddef>
#include <vector>

#include "bfsi/errors.hpp"

namespace bfsi {

/// Fixed computational grid on [-1,1]: `n_cells` uniform cells on each of
/// [-1,0] and [0,1], with node n_cells sitting exactly at xi = 0 (the
/// particle node).
struct ReferenceGrid {
    explicit ReferenceGrid(int cells) : n_cells(cells) {
        if (cells < 1) throw DomainError("ReferenceGrid requires n_cells >= 1");
        n_nodes = static_cast<std::size_t>(2 * cells + 1);
        particle_index = static_cast<std::size_t>(cells);
        dxi = 1.0 / static_cast<double>(cells);
        xi.resize(n_nodes);
        for (std::size_t i = 0; i < n_nodes; ++i) {
            // (i - N)/N is exactly -1, 0, +1 at i = 0, N, 2N.
            xi[i] = (static_cast<double>(i) - static_cast<double>(cells)) /
                    static_cast<double>(cells);
        }
    }

    int n_cells;
    std::size_t n_nodes;
    std::size_t particle_index;
    double dxi;
    std::vector<double> xi;
};

}  // namespace bfsi
