#include <cmath>

#include "monoband/simd.hpp"

namespace monoband::simd {
namespace {

void row_dots_scalar(const double* a, int len, const double* zblock, double* out) {
    for (int r = 0; r < kBlock; ++r) out[r] = 0.0;
    for (int j = 0; j < len; ++j) {
        const double aj = a[j];
        const double* z = zblock + static_cast<std::size_t>(j) * kBlock;
        for (int r = 0; r < kBlock; ++r) out[r] = std::fma(aj, z[r], out[r]);
    }
}

double dot_scalar(const double* a, const double* b, int len) {
    double acc = 0.0;
    for (int j = 0; j < len; ++j) acc = std::fma(a[j], b[j], acc);
    return acc;
}

void axpy_scalar(double w, const double* src, double* dst, int len) {
    for (int j = 0; j < len; ++j) dst[j] = std::fma(w, src[j], dst[j]);
}

double epan_cdf_sum_scalar(const double* v, int len, double s, double inv_h) {
    double acc = 0.0;
    for (int i = 0; i < len; ++i) {
        double x = (s - v[i]) * inv_h;
        x = x < -1.0 ? -1.0 : (x > 1.0 ? 1.0 : x);
        acc += 0.5 + x * (0.75 - 0.25 * x * x);
    }
    return acc;
}

double max_abs_scalar(const double* x, int len) {
    double best = 0.0;
    for (int i = 0; i < len; ++i) best = std::max(best, std::fabs(x[i]));
    return best;
}

}  // namespace

const Ops& scalar_ops() {
    static const Ops ops{"scalar", row_dots_scalar, dot_scalar, axpy_scalar,
                         epan_cdf_sum_scalar, max_abs_scalar};
    return ops;
}

}  // namespace monoband::simd
