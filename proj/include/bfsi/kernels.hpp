#pragma once

#include <cstddef>
#include <span>
#include <string>

// Data-parallel inner loops used by the solver and the diagnostics.
//
// Every kernel has a scalar reference implementation plus ISA-specific
// variants (AVX2 on x86-64, NEON on aarch64) selected once per process at
// first use. Variants are equivalence-tested against the scalar path; they
// may differ from it in the last ulps because wide accumulators change the
// summation order. Within one process the selected variant is fixed, so
// runs stay bitwise reproducible.
//
// Selection order: BFSI_KERNELS environment variable ("scalar", "avx2",
// "neon") if set and supported, otherwise the widest supported ISA.

namespace bfsi::kernels {

enum class Isa { scalar, avx2, neon };

std::string isa_name(Isa isa);
bool isa_supported(Isa isa) noexcept;

/// The variant all kernels currently dispatch to.
Isa active_isa() noexcept;

/// Override dispatch (tests, benchmarking). Throws DomainError if the
/// requested ISA is not supported on this machine.
void force_isa(Isa isa);

/// sum_i a[i] * b[i]
double dot(std::span<const double> a, std::span<const double> b) noexcept;

/// sum_i w[i] * a[i] * b[i]
double weighted_dot(std::span<const double> w, std::span<const double> a,
                    std::span<const double> b) noexcept;

/// sum_i w[i] * a[i]^2
double weighted_norm_sq(std::span<const double> w, std::span<const double> a) noexcept;

/// sum_e c[e] * (x[e+1] - x[e])^2 over edges e = 0 .. x.size()-2
double diff_sq_weighted(std::span<const double> x, std::span<const double> c) noexcept;

/// out[i] = alpha * x[i] + beta * y[i]
void axpby(double alpha, std::span<const double> x, double beta,
           std::span<const double> y, std::span<double> out) noexcept;

/// out[i] = lo[i]*x[i-1] + d[i]*x[i] + up[i]*x[i+1]; lo[0] and up[n-1] are
/// ignored. `out` must not alias `x`.
void tridiag_apply(std::span<const double> lo, std::span<const double> d,
                   std::span<const double> up, std::span<const double> x,
                   std::span<double> out) noexcept;

namespace detail {

struct KernelTable {
    double (*dot)(std::span<const double>, std::span<const double>) noexcept;
    double (*weighted_dot)(std::span<const double>, std::span<const double>,
                           std::span<const double>) noexcept;
    double (*weighted_norm_sq)(std::span<const double>, std::span<const double>) noexcept;
    double (*diff_sq_weighted)(std::span<const double>, std::span<const double>) noexcept;
    void (*axpby)(double, std::span<const double>, double, std::span<const double>,
                  std::span<double>) noexcept;
    void (*tridiag_apply)(std::span<const double>, std::span<const double>,
                          std::span<const double>, std::span<const double>,
                          std::span<double>) noexcept;
};

const KernelTable& scalar_table() noexcept;
#if defined(BFSI_KERNELS_X86)
const KernelTable& avx2_table() noexcept;
#endif
#if defined(BFSI_KERNELS_ARM)
const KernelTable& neon_table() noexcept;
#endif

}  // namespace detail

}  // namespace bfsi::kernels
