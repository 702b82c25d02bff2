#include "monoband/kernels.hpp"

#include <algorithm>
#include <cmath>

#include "monoband/errors.hpp"

namespace monoband::kernels {

namespace {
constexpr double kSqrt2 = 1.4142135623730950488;

// Antiderivative of x^l * 0.75 (1 - x^2), evaluated at y in [-1, 1].
inline double antideriv(int l, double y) {
    const double y2 = y * y;
    switch (l) {
        case 0: return 0.75 * y * (1.0 - y2 / 3.0);
        case 1: return 0.75 * y2 * (0.5 - y2 / 4.0);
        case 2: return 0.75 * y * y2 * (1.0 / 3.0 - y2 / 5.0);
        case 3: return 0.75 * y2 * y2 * (0.25 - y2 / 6.0);
        default: return 0.0;
    }
}
}  // namespace

double kernel_eval(KernelSpec, double x) {
    if (x <= -1.0 || x >= 1.0) return 0.0;
    return 0.75 * (1.0 - x * x);
}

double kernel_cdf(KernelSpec, double x) {
    if (x <= -1.0) return 0.0;
    if (x >= 1.0) return 1.0;
    // integral from -1 to x of 0.75 (1 - u^2)
    return 0.5 + 0.75 * x - 0.25 * x * x * x;
}

double jackknife_kernel(KernelSpec spec, double x) {
    return 2.0 * kSqrt2 * kernel_eval(spec, kSqrt2 * x) - kernel_eval(spec, x);
}

double nu_moment(KernelSpec, int l, double t, double h) {
    const double lo = std::max(-t / h, -1.0);
    const double hi = std::min((1.0 - t) / h, 1.0);
    if (hi <= lo) return 0.0;
    return antideriv(l, hi) - antideriv(l, lo);
}

BoundaryMoments boundary_moments(KernelSpec spec, double t, double h) {
    BoundaryMoments m;
    m.nu0 = nu_moment(spec, 0, t, h);
    m.nu1 = nu_moment(spec, 1, t, h);
    m.nu2 = nu_moment(spec, 2, t, h);
    m.c = m.nu0 * m.nu2 - m.nu1 * m.nu1;
    return m;
}

double kstar_jackknife(KernelSpec spec, double u, double t, double h) {
    const BoundaryMoments m = boundary_moments(spec, t, h);
    if (m.c <= 1e-12)
        throw DegenerateMoments("kernel moment determinant collapsed; bandwidth is pathological");
    return (m.nu2 - m.nu1 * u) * jackknife_kernel(spec, u) / m.c;
}

}  // namespace monoband::kernels
