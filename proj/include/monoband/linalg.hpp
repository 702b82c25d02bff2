#pragma once

#include <vector>

namespace monoband::linalg {

// Dense row-major matrix, sized for the small systems in this project
// (2x2 local-linear solves up to ~30x30 covariance blocks).
struct Mat {
    int rows = 0;
    int cols = 0;
    std::vector<double> a;

    Mat() = default;
    Mat(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, 0.0) {}
    double& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * cols + j]; }
    double operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * cols + j]; }
};

Mat identity(int n);
Mat multiply(const Mat& lhs, const Mat& rhs);
Mat transpose(const Mat& m);

// Solves A x = b by LU with partial pivoting. Throws SingularDesign when the
// pivot collapses relative to the row scale.
std::vector<double> solve(Mat a, std::vector<double> b);

// Inverse with a 1-norm condition estimate; throws SingularDesign when
// cond > cond_limit.
Mat inverse(const Mat& a, double cond_limit = 1e12);

double norm1(const Mat& m);

// Cyclic Jacobi eigendecomposition of a symmetric matrix: a = V diag(w) V^T.
void sym_eigen(const Mat& a, std::vector<double>& eigenvalues, Mat& eigenvectors);

// Symmetric PSD square root; negative eigenvalues are clamped to zero.
Mat sym_sqrt_psd(const Mat& a);

// Trace of the PSD square root, the se() functional used by minimum
// volatility. Clamps negative eigenvalues at zero.
double trace_sqrt_psd(const Mat& a);

// Cholesky factor (lower triangular) of a positive definite matrix.
Mat cholesky(const Mat& a);

}  // namespace monoband::linalg
