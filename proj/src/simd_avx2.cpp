// AVX2 + FMA variants of the hot kernels. This translation unit is the only
// one compiled with -mavx2 -mfma; callers reach it through runtime dispatch.

#include <immintrin.h>

#include <cmath>

#include "monoband/simd.hpp"

namespace monoband::simd {
namespace {

static_assert(kBlock == 32, "row_dots_avx2 is written for 32-wide blocks");

void row_dots_avx2(const double* a, int len, const double* zblock, double* out) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    __m256d acc2 = _mm256_setzero_pd();
    __m256d acc3 = _mm256_setzero_pd();
    __m256d acc4 = _mm256_setzero_pd();
    __m256d acc5 = _mm256_setzero_pd();
    __m256d acc6 = _mm256_setzero_pd();
    __m256d acc7 = _mm256_setzero_pd();
    for (int j = 0; j < len; ++j) {
        const __m256d aj = _mm256_set1_pd(a[j]);
        const double* z = zblock + static_cast<std::size_t>(j) * kBlock;
        acc0 = _mm256_fmadd_pd(aj, _mm256_loadu_pd(z + 0), acc0);
        acc1 = _mm256_fmadd_pd(aj, _mm256_loadu_pd(z + 4), acc1);
        acc2 = _mm256_fmadd_pd(aj, _mm256_loadu_pd(z + 8), acc2);
        acc3 = _mm256_fmadd_pd(aj, _mm256_loadu_pd(z + 12), acc3);
        acc4 = _mm256_fmadd_pd(aj, _mm256_loadu_pd(z + 16), acc4);
        acc5 = _mm256_fmadd_pd(aj, _mm256_loadu_pd(z + 20), acc5);
        acc6 = _mm256_fmadd_pd(aj, _mm256_loadu_pd(z + 24), acc6);
        acc7 = _mm256_fmadd_pd(aj, _mm256_loadu_pd(z + 28), acc7);
    }
    _mm256_storeu_pd(out + 0, acc0);
    _mm256_storeu_pd(out + 4, acc1);
    _mm256_storeu_pd(out + 8, acc2);
    _mm256_storeu_pd(out + 12, acc3);
    _mm256_storeu_pd(out + 16, acc4);
    _mm256_storeu_pd(out + 20, acc5);
    _mm256_storeu_pd(out + 24, acc6);
    _mm256_storeu_pd(out + 28, acc7);
}

double dot_avx2(const double* a, const double* b, int len) {
    // Sequential fma accumulation, matching the scalar reference bit for bit.
    double acc = 0.0;
    for (int j = 0; j < len; ++j) acc = std::fma(a[j], b[j], acc);
    return acc;
}

void axpy_avx2(double w, const double* src, double* dst, int len) {
    const __m256d vw = _mm256_set1_pd(w);
    int j = 0;
    for (; j + 8 <= len; j += 8) {
        const __m256d s0 = _mm256_loadu_pd(src + j);
        const __m256d s1 = _mm256_loadu_pd(src + j + 4);
        _mm256_storeu_pd(dst + j, _mm256_fmadd_pd(vw, s0, _mm256_loadu_pd(dst + j)));
        _mm256_storeu_pd(dst + j + 4, _mm256_fmadd_pd(vw, s1, _mm256_loadu_pd(dst + j + 4)));
    }
    for (; j < len; ++j) dst[j] = std::fma(w, src[j], dst[j]);
}

double epan_cdf_sum_avx2(const double* v, int len, double s, double inv_h) {
    const __m256d vs = _mm256_set1_pd(s);
    const __m256d vih = _mm256_set1_pd(inv_h);
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d neg_one = _mm256_set1_pd(-1.0);
    const __m256d c_half = _mm256_set1_pd(0.5);
    const __m256d c_a = _mm256_set1_pd(0.75);
    const __m256d c_b = _mm256_set1_pd(-0.25);
    __m256d acc = _mm256_setzero_pd();
    int i = 0;
    for (; i + 4 <= len; i += 4) {
        __m256d x = _mm256_mul_pd(_mm256_sub_pd(vs, _mm256_loadu_pd(v + i)), vih);
        x = _mm256_min_pd(one, _mm256_max_pd(neg_one, x));
        const __m256d x2 = _mm256_mul_pd(x, x);
        const __m256d poly = _mm256_fmadd_pd(c_b, x2, c_a);  // 0.75 - 0.25 x^2
        acc = _mm256_add_pd(acc, _mm256_fmadd_pd(x, poly, c_half));
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc);
    double total = lanes[0] + lanes[1] + lanes[2] + lanes[3];
    for (; i < len; ++i) {
        double x = (s - v[i]) * inv_h;
        x = x < -1.0 ? -1.0 : (x > 1.0 ? 1.0 : x);
        total += 0.5 + x * (0.75 - 0.25 * x * x);
    }
    return total;
}

double max_abs_avx2(const double* x, int len) {
    const __m256d sign_mask = _mm256_set1_pd(-0.0);
    __m256d best = _mm256_setzero_pd();
    int i = 0;
    for (; i + 4 <= len; i += 4)
        best = _mm256_max_pd(best, _mm256_andnot_pd(sign_mask, _mm256_loadu_pd(x + i)));
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, best);
    double out = std::max(std::max(lanes[0], lanes[1]), std::max(lanes[2], lanes[3]));
    for (; i < len; ++i) out = std::max(out, std::fabs(x[i]));
    return out;
}

}  // namespace

const Ops* avx2_ops_internal() {
    static const Ops ops{"avx2", row_dots_avx2, dot_avx2, axpy_avx2,
                         epan_cdf_sum_avx2, max_abs_avx2};
    return &ops;
}

}  // namespace monoband::simd
