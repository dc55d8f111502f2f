#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "bfsi/errors.hpp"
#include "bfsi/kernels.hpp"

namespace bfsi {

/// Tridiagonal matrix in three-diagonal storage; lower[0] and
/// upper[n-1] are unused.
struct Tridiagonal {
    explicit Tridiagonal(std::size_t n, double diagonal_value = 0.0)
        : lower(n, 0.0), diag(n, diagonal_value), upper(n, 0.0) {}

    std::size_t size() const { return diag.size(); }

    void apply(std::span<const double> x, std::span<double> out) const {
        kernels::tridiag_apply(lower, diag, upper, x, out);
    }

    /// x^T T x
    double quadratic_form(std::span<const double> x) const {
        std::vector<double> tx(x.size());
        apply(x, tx);
        return kernels::dot(x, tx);
    }

    Tridiagonal& add_scaled(const Tridiagonal& other, double factor) {
        for (std::size_t i = 0; i < size(); ++i) {
            lower[i] += factor * other.lower[i];
            diag[i] += factor * other.diag[i];
            upper[i] += factor * other.upper[i];
        }
        return *this;
    }

    std::vector<double> lower, diag, upper;
};

/// Thomas algorithm. The systems assembled here are strictly diagonally
/// dominant for the step sizes of interest, so no pivoting.
inline std::vector<double> solve_tridiagonal(const Tridiagonal& m,
                                             std::span<const double> rhs) {
    const std::size_t n = m.size();
    std::vector<double> c(n, 0.0), d(n, 0.0), x(n, 0.0);

    double pivot = m.diag[0];
    if (!(std::abs(pivot) > 1e-300)) throw LinearSolveFailure("zero pivot at row 0");
    c[0] = m.upper[0] / pivot;
    d[0] = rhs[0] / pivot;
    for (std::size_t i = 1; i < n; ++i) {
        pivot = m.diag[i] - m.lower[i] * c[i - 1];
        if (!(std::abs(pivot) > 1e-300))
            throw LinearSolveFailure("zero pivot at row " + std::to_string(i));
        c[i] = m.upper[i] / pivot;
        d[i] = (rhs[i] - m.lower[i] * d[i - 1]) / pivot;
    }
    x[n - 1] = d[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) {
        x[i] = d[i] - c[i] * x[i + 1];
    }
    return x;
}

}  // namespace bfsi
