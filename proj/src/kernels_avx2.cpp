#if defined(__x86_64__)

#include "sno/kernels.hpp"

#include <immintrin.h>

#include <cmath>

namespace sno::kernels::avx2 {

namespace {

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    const __m128d swapped = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, swapped));
}

}  // namespace

double sum_squares(const double* x, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d v = _mm256_loadu_pd(x + i);
        acc = _mm256_fmadd_pd(v, v, acc);
    }
    double total = hsum(acc);
    for (; i < n; ++i) {
        total += x[i] * x[i];
    }
    return total;
}

double squared_distance(const double* a, const double* b, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        acc = _mm256_fmadd_pd(d, d, acc);
    }
    double total = hsum(acc);
    for (; i < n; ++i) {
        const double d = a[i] - b[i];
        total += d * d;
    }
    return total;
}

double abs_deviation_sum(const double* x, std::size_t n, double center) {
    const __m256d sign_mask = _mm256_set1_pd(-0.0);
    const __m256d c = _mm256_set1_pd(center);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), c);
        acc = _mm256_add_pd(acc, _mm256_andnot_pd(sign_mask, d));
    }
    double total = hsum(acc);
    for (; i < n; ++i) {
        total += std::fabs(x[i] - center);
    }
    return total;
}

double rosenbrock_chain(const double* x, std::size_t n) {
    if (n < 2) {
        return 0.0;
    }
    const std::size_t terms = n - 1;
    const __m256d hundred = _mm256_set1_pd(100.0);
    const __m256d one = _mm256_set1_pd(1.0);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= terms; i += 4) {
        const __m256d xi = _mm256_loadu_pd(x + i);
        const __m256d xn = _mm256_loadu_pd(x + i + 1);
        const __m256d t = _mm256_fnmadd_pd(xi, xi, xn);  // x[i+1] - x[i]^2
        const __m256d u = _mm256_sub_pd(one, xi);
        acc = _mm256_fmadd_pd(u, u, acc);
        acc = _mm256_fmadd_pd(hundred, _mm256_mul_pd(t, t), acc);
    }
    double total = hsum(acc);
    for (; i < terms; ++i) {
        const double t = x[i + 1] - x[i] * x[i];
        const double u = 1.0 - x[i];
        total += 100.0 * t * t + u * u;
    }
    return total;
}

}  // namespace sno::kernels::avx2

#endif  // __x86_64__
