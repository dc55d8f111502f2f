#include "bfsi/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>

#include "bfsi/errors.hpp"

namespace bfsi::kernels {

namespace {

double dot_scalar(std::span<const double> a, std::span<const double> b) noexcept {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

double weighted_dot_scalar(std::span<const double> w, std::span<const double> a,
                           std::span<const double> b) noexcept {
    double acc = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) acc += w[i] * a[i] * b[i];
    return acc;
}

double weighted_norm_sq_scalar(std::span<const double> w,
                               std::span<const double> a) noexcept {
    double acc = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) acc += w[i] * a[i] * a[i];
    return acc;
}

double diff_sq_weighted_scalar(std::span<const double> x,
                               std::span<const double> c) noexcept {
    double acc = 0.0;
    for (std::size_t e = 0; e + 1 < x.size(); ++e) {
        const double d = x[e + 1] - x[e];
        acc += c[e] * d * d;
    }
    return acc;
}

void axpby_scalar(double alpha, std::span<const double> x, double beta,
                  std::span<const double> y, std::span<double> out) noexcept {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = alpha * x[i] + beta * y[i];
}

void tridiag_apply_scalar(std::span<const double> lo, std::span<const double> d,
                          std::span<const double> up, std::span<const double> x,
                          std::span<double> out) noexcept {
    const std::size_t n = x.size();
    if (n == 0) return;
    if (n == 1) {
        out[0] = d[0] * x[0];
        return;
    }
    out[0] = d[0] * x[0] + up[0] * x[1];
    for (std::size_t i = 1; i + 1 < n; ++i) {
        out[i] = lo[i] * x[i - 1] + d[i] * x[i] + up[i] * x[i + 1];
    }
    out[n - 1] = lo[n - 1] * x[n - 2] + d[n - 1] * x[n - 1];
}

Isa detect_isa() {
    if (const char* env = std::getenv("BFSI_KERNELS")) {
        if (std::strcmp(env, "scalar") == 0) return Isa::scalar;
        if (std::strcmp(env, "avx2") == 0 && isa_supported(Isa::avx2)) return Isa::avx2;
        if (std::strcmp(env, "neon") == 0 && isa_supported(Isa::neon)) return Isa::neon;
    }
#if defined(BFSI_KERNELS_X86)
    if (isa_supported(Isa::avx2)) return Isa::avx2;
#endif
#if defined(BFSI_KERNELS_ARM)
    if (isa_supported(Isa::neon)) return Isa::neon;
#endif
    return Isa::scalar;
}

const detail::KernelTable* table_for(Isa isa) noexcept {
    switch (isa) {
#if defined(BFSI_KERNELS_X86)
        case Isa::avx2:
            return &detail::avx2_table();
#endif
#if defined(BFSI_KERNELS_ARM)
        case Isa::neon:
            return &detail::neon_table();
#endif
        default:
            return &detail::scalar_table();
    }
}

std::atomic<const detail::KernelTable*> g_table{nullptr};
std::atomic<Isa> g_isa{Isa::scalar};

const detail::KernelTable& table() noexcept {
    const detail::KernelTable* t = g_table.load(std::memory_order_acquire);
    if (t == nullptr) {
        const Isa isa = detect_isa();
        t = table_for(isa);
        g_isa.store(isa, std::memory_order_relaxed);
        g_table.store(t, std::memory_order_release);
    }
    return *t;
}

}  // namespace

namespace detail {

const KernelTable& scalar_table() noexcept {
    static const KernelTable t{dot_scalar,        weighted_dot_scalar,
                               weighted_norm_sq_scalar, diff_sq_weighted_scalar,
                               axpby_scalar,      tridiag_apply_scalar};
    return t;
}

}  // namespace detail

std::string isa_name(Isa isa) {
    switch (isa) {
        case Isa::scalar: return "scalar";
        case Isa::avx2: return "avx2";
        case Isa::neon: return "neon";
    }
    return "unknown";
}

bool isa_supported(Isa isa) noexcept {
    switch (isa) {
        case Isa::scalar:
            return true;
        case Isa::avx2:
#if defined(BFSI_KERNELS_X86)
            return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
            return false;
#endif
        case Isa::neon:
#if defined(BFSI_KERNELS_ARM)
            return true;  // NEON is architectural baseline on aarch64
#else
            return false;
#endif
    }
    return false;
}

Isa active_isa() noexcept {
    table();  // ensure detection ran
    return g_isa.load(std::memory_order_relaxed);
}

void force_isa(Isa isa) {
    if (!isa_supported(isa)) {
        throw DomainError("kernel ISA '" + isa_name(isa) + "' not supported on this machine");
    }
    g_isa.store(isa, std::memory_order_relaxed);
    g_table.store(table_for(isa), std::memory_order_release);
}

double dot(std::span<const double> a, std::span<const double> b) noexcept {
    return table().dot(a, b);
}

double weighted_dot(std::span<const double> w, std::span<const double> a,
                    std::span<const double> b) noexcept {
    return table().weighted_dot(w, a, b);
}

double weighted_norm_sq(std::span<const double> w, std::span<const double> a) noexcept {
    return table().weighted_norm_sq(w, a);
}

double diff_sq_weighted(std::span<const double> x, std::span<const double> c) noexcept {
    return table().diff_sq_weighted(x, c);
}

void axpby(double alpha, std::span<const double> x, double beta,
           std::span<const double> y, std::span<double> out) noexcept {
    table().axpby(alpha, x, beta, y, out);
}

void tridiag_apply(std::span<const double> lo, std::span<const double> d,
                   std::span<const double> up, std::span<const double> x,
                   std::span<double> out) noexcept {
    table().tridiag_apply(lo, d, up, x, out);
}

}  // namespace bfsi::kernels
