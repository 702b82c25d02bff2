#pragma once

#include <cstdint>

namespace monoband::simd {

// Replicates processed per bootstrap block. The interleaved z layout
// (z[j * kBlock + r]) keeps one block resident in L2 while coefficient rows
// stream through once per block.
inline constexpr int kBlock = 32;

// Hot inner loops, provided as a scalar reference implementation and an AVX2
// variant selected at runtime. Both variants accumulate in the same order and
// use fused multiply-adds, so `row_dots` agrees bit for bit across variants;
// the reduction kernels agree to rounding error and are equivalence-tested.
struct Ops {
    const char* name;

    // out[r] += is NOT implied: writes out[r] = sum_j a[j] * z[j * kBlock + r]
    // for r = 0..kBlock-1.
    void (*row_dots)(const double* a, int len, const double* zblock, double* out);

    // Plain dot product, fma-accumulated left to right.
    double (*dot)(const double* a, const double* b, int len);

    // dst[j] += w * src[j]
    void (*axpy)(double w, const double* src, double* dst, int len);

    // Sum of the Epanechnikov antiderivative F((s - v[i]) * inv_h) over a
    // slice, where F is clamped to its closed-form 0/1 tails.
    double (*epan_cdf_sum)(const double* v, int len, double s, double inv_h);

    // max_i |x[i]|, 0 for empty input.
    double (*max_abs)(const double* x, int len);
};

// Scalar reference kernels; always available.
const Ops& scalar_ops();

// Best variant for this machine, honoring the MONOBAND_SIMD environment
// variable ("scalar" or "avx2") on first use.
const Ops& active_ops();

// AVX2 kernels when compiled in and supported by the CPU, else null.
const Ops* avx2_ops_if_supported();

}  // namespace monoband::simd
