// NEON kernel variants for aarch64, where 128-bit SIMD is architectural
// baseline. Two doubles per lane-pair; loop bodies mirror the scalar
// reference implementations.

#include <arm_neon.h>

#include "bfsi/kernels.hpp"

namespace bfsi::kernels::detail {

namespace {

double dot_neon(std::span<const double> a, std::span<const double> b) noexcept {
    const std::size_t n = a.size();
    std::size_t i = 0;
    float64x2_t acc = vdupq_n_f64(0.0);
    for (; i + 2 <= n; i += 2) {
        acc = vfmaq_f64(acc, vld1q_f64(&a[i]), vld1q_f64(&b[i]));
    }
    double sum = vaddvq_f64(acc);
    for (; i < n; ++i) sum += a[i] * b[i];
    return sum;
}

double weighted_dot_neon(std::span<const double> w, std::span<const double> a,
                         std::span<const double> b) noexcept {
    const std::size_t n = w.size();
    std::size_t i = 0;
    float64x2_t acc = vdupq_n_f64(0.0);
    for (; i + 2 <= n; i += 2) {
        const float64x2_t wa = vmulq_f64(vld1q_f64(&w[i]), vld1q_f64(&a[i]));
        acc = vfmaq_f64(acc, wa, vld1q_f64(&b[i]));
    }
    double sum = vaddvq_f64(acc);
    for (; i < n; ++i) sum += w[i] * a[i] * b[i];
    return sum;
}

double weighted_norm_sq_neon(std::span<const double> w,
                             std::span<const double> a) noexcept {
    const std::size_t n = w.size();
    std::size_t i = 0;
    float64x2_t acc = vdupq_n_f64(0.0);
    for (; i + 2 <= n; i += 2) {
        const float64x2_t va = vld1q_f64(&a[i]);
        acc = vfmaq_f64(acc, vmulq_f64(vld1q_f64(&w[i]), va), va);
    }
    double sum = vaddvq_f64(acc);
    for (; i < n; ++i) sum += w[i] * a[i] * a[i];
    return sum;
}

double diff_sq_weighted_neon(std::span<const double> x,
                             std::span<const double> c) noexcept {
    if (x.size() < 2) return 0.0;
    const std::size_t ne = x.size() - 1;
    std::size_t e = 0;
    float64x2_t acc = vdupq_n_f64(0.0);
    for (; e + 2 <= ne; e += 2) {
        const float64x2_t d = vsubq_f64(vld1q_f64(&x[e + 1]), vld1q_f64(&x[e]));
        acc = vfmaq_f64(acc, vmulq_f64(vld1q_f64(&c[e]), d), d);
    }
    double sum = vaddvq_f64(acc);
    for (; e < ne; ++e) {
        const double d = x[e + 1] - x[e];
        sum += c[e] * d * d;
    }
    return sum;
}

void axpby_neon(double alpha, std::span<const double> x, double beta,
                std::span<const double> y, std::span<double> out) noexcept {
    const std::size_t n = out.size();
    const float64x2_t va = vdupq_n_f64(alpha);
    const float64x2_t vb = vdupq_n_f64(beta);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t r =
            vfmaq_f64(vmulq_f64(vb, vld1q_f64(&y[i])), va, vld1q_f64(&x[i]));
        vst1q_f64(&out[i], r);
    }
    for (; i < n; ++i) out[i] = alpha * x[i] + beta * y[i];
}

void tridiag_apply_neon(std::span<const double> lo, std::span<const double> d,
                        std::span<const double> up, std::span<const double> x,
                        std::span<double> out) noexcept {
    const std::size_t n = x.size();
    if (n == 0) return;
    if (n == 1) {
        out[0] = d[0] * x[0];
        return;
    }
    out[0] = d[0] * x[0] + up[0] * x[1];
    std::size_t i = 1;
    for (; i + 2 <= n - 1; i += 2) {
        float64x2_t r = vmulq_f64(vld1q_f64(&lo[i]), vld1q_f64(&x[i - 1]));
        r = vfmaq_f64(r, vld1q_f64(&d[i]), vld1q_f64(&x[i]));
        r = vfmaq_f64(r, vld1q_f64(&up[i]), vld1q_f64(&x[i + 1]));
        vst1q_f64(&out[i], r);
    }
    for (; i + 1 < n; ++i) out[i] = lo[i] * x[i - 1] + d[i] * x[i] + up[i] * x[i + 1];
    out[n - 1] = lo[n - 1] * x[n - 2] + d[n - 1] * x[n - 1];
}

}  // namespace

const KernelTable& neon_table() noexcept {
    static const KernelTable t{dot_neon,        weighted_dot_neon,
                               weighted_norm_sq_neon, diff_sq_weighted_neon,
                               axpby_neon,      tridiag_apply_neon};
    return t;
}

}  // namespace bfsi::kernels::detail
