#pragma once

namespace monoband::kernels {

// The Epanechnikov kernel is the only member for now; the enum keeps an
// extension point for other compactly supported symmetric densities.
enum class Kind { Epanechnikov };

struct KernelSpec {
    Kind kind = Kind::Epanechnikov;
};

// K(x) = 0.75 (1 - x^2) on [-1, 1], zero outside.
double kernel_eval(KernelSpec spec, double x);

// Closed-form antiderivative of K: 0 at x <= -1, 1 at x >= 1, nondecreasing.
double kernel_cdf(KernelSpec spec, double x);

// Jackknife kernel K~(x) = 2 sqrt(2) K(sqrt(2) x) - K(x), support [-1, 1].
double jackknife_kernel(KernelSpec spec, double x);

// Boundary moment nu_l(t) = integral of x^l K(x) over [-t/h, (1-t)/h]
// clipped to the kernel support, in closed form. l in {0, 1, 2, 3}.
double nu_moment(KernelSpec spec, int l, double t, double h);

// Moments of the two-sided truncation used above, as a bundle. c is the
// local-linear denominator nu0 nu2 - nu1^2.
struct BoundaryMoments {
    double nu0, nu1, nu2;
    double c;  // nu0 * nu2 - nu1 * nu1
};
BoundaryMoments boundary_moments(KernelSpec spec, double t, double h);

// Boundary-corrected jackknife kernel
// K~*(u, t) = [nu2(t) - nu1(t) u] K~(u) / c(t).
// Throws DegenerateMoments when c(t) collapses.
double kstar_jackknife(KernelSpec spec, double u, double t, double h);

// Constants of the Epanechnikov kernel.
inline constexpr double kKappa2 = 0.2;      // integral of x^2 K(x)
inline constexpr double kKappa1 = 0.375;    // integral of |x| K(x)

}  // namespace monoband::kernels
