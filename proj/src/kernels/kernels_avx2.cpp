// AVX2/FMA kernel variants. This translation unit is compiled with
// -mavx2 -mfma and must only be reached after the runtime capability check
// in the dispatcher.

#include <immintrin.h>

#include "bfsi/kernels.hpp"

namespace bfsi::kernels::detail {

namespace {

inline double hsum(__m256d v) noexcept {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d swapped = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, swapped));
}

double dot_avx2(std::span<const double> a, std::span<const double> b) noexcept {
    const std::size_t n = a.size();
    std::size_t i = 0;
    __m256d acc = _mm256_setzero_pd();
    for (; i + 4 <= n; i += 4) {
        const __m256d va = _mm256_loadu_pd(&a[i]);
        const __m256d vb = _mm256_loadu_pd(&b[i]);
        acc = _mm256_fmadd_pd(va, vb, acc);
    }
    double sum = hsum(acc);
    for (; i < n; ++i) sum += a[i] * b[i];
    return sum;
}

double weighted_dot_avx2(std::span<const double> w, std::span<const double> a,
                         std::span<const double> b) noexcept {
    const std::size_t n = w.size();
    std::size_t i = 0;
    __m256d acc = _mm256_setzero_pd();
    for (; i + 4 <= n; i += 4) {
        const __m256d vw = _mm256_loadu_pd(&w[i]);
        const __m256d va = _mm256_loadu_pd(&a[i]);
        const __m256d vb = _mm256_loadu_pd(&b[i]);
        acc = _mm256_fmadd_pd(_mm256_mul_pd(vw, va), vb, acc);
    }
    double sum = hsum(acc);
    for (; i < n; ++i) sum += w[i] * a[i] * b[i];
    return sum;
}

double weighted_norm_sq_avx2(std::span<const double> w,
                             std::span<const double> a) noexcept {
    const std::size_t n = w.size();
    std::size_t i = 0;
    __m256d acc = _mm256_setzero_pd();
    for (; i + 4 <= n; i += 4) {
        const __m256d vw = _mm256_loadu_pd(&w[i]);
        const __m256d va = _mm256_loadu_pd(&a[i]);
        acc = _mm256_fmadd_pd(_mm256_mul_pd(vw, va), va, acc);
    }
    double sum = hsum(acc);
    for (; i < n; ++i) sum += w[i] * a[i] * a[i];
    return sum;
}

double diff_sq_weighted_avx2(std::span<const double> x,
                             std::span<const double> c) noexcept {
    if (x.size() < 2) return 0.0;
    const std::size_t ne = x.size() - 1;
    std::size_t e = 0;
    __m256d acc = _mm256_setzero_pd();
    for (; e + 4 <= ne; e += 4) {
        const __m256d xl = _mm256_loadu_pd(&x[e]);
        const __m256d xr = _mm256_loadu_pd(&x[e + 1]);
        const __m256d d = _mm256_sub_pd(xr, xl);
        const __m256d vc = _mm256_loadu_pd(&c[e]);
        acc = _mm256_fmadd_pd(_mm256_mul_pd(vc, d), d, acc);
    }
    double sum = hsum(acc);
    for (; e < ne; ++e) {
        const double d = x[e + 1] - x[e];
        sum += c[e] * d * d;
    }
    return sum;
}

void axpby_avx2(double alpha, std::span<const double> x, double beta,
                std::span<const double> y, std::span<double> out) noexcept {
    const std::size_t n = out.size();
    const __m256d va = _mm256_set1_pd(alpha);
    const __m256d vb = _mm256_set1_pd(beta);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d vx = _mm256_loadu_pd(&x[i]);
        const __m256d vy = _mm256_loadu_pd(&y[i]);
        _mm256_storeu_pd(&out[i], _mm256_fmadd_pd(va, vx, _mm256_mul_pd(vb, vy)));
    }
    for (; i < n; ++i) out[i] = alpha * x[i] + beta * y[i];
}

void tridiag_apply_avx2(std::span<const double> lo, std::span<const double> d,
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
    for (; i + 4 <= n - 1; i += 4) {
        const __m256d xm = _mm256_loadu_pd(&x[i - 1]);
        const __m256d xc = _mm256_loadu_pd(&x[i]);
        const __m256d xp = _mm256_loadu_pd(&x[i + 1]);
        const __m256d vl = _mm256_loadu_pd(&lo[i]);
        const __m256d vd = _mm256_loadu_pd(&d[i]);
        const __m256d vu = _mm256_loadu_pd(&up[i]);
        __m256d r = _mm256_mul_pd(vl, xm);
        r = _mm256_fmadd_pd(vd, xc, r);
        r = _mm256_fmadd_pd(vu, xp, r);
        _mm256_storeu_pd(&out[i], r);
    }
    for (; i + 1 < n; ++i) out[i] = lo[i] * x[i - 1] + d[i] * x[i] + up[i] * x[i + 1];
    out[n - 1] = lo[n - 1] * x[n - 2] + d[n - 1] * x[n - 1];
}

}  // namespace

const KernelTable& avx2_table() noexcept {
    static const KernelTable t{dot_avx2,        weighted_dot_avx2,
                               weighted_norm_sq_avx2, diff_sq_weighted_avx2,
                               axpby_avx2,      tridiag_apply_avx2};
    return t;
}

}  // namespace bfsi::kernels::detail
