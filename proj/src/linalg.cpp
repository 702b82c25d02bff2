#include "monoband/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "monoband/errors.hpp"

namespace monoband::linalg {

Mat identity(int n) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Mat multiply(const Mat& lhs, const Mat& rhs) {
    Mat out(lhs.rows, rhs.cols);
    for (int i = 0; i < lhs.rows; ++i)
        for (int k = 0; k < lhs.cols; ++k) {
            const double v = lhs(i, k);
            if (v == 0.0) continue;
            for (int j = 0; j < rhs.cols; ++j) out(i, j) += v * rhs(k, j);
        }
    return out;
}

Mat transpose(const Mat& m) {
    Mat out(m.cols, m.rows);
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) out(j, i) = m(i, j);
    return out;
}

namespace {

// LU decomposition in place with partial pivoting; returns the permutation.
std::vector<int> lu_decompose(Mat& a) {
    const int n = a.rows;
    std::vector<int> perm(n);
    std::vector<double> scale(n, 0.0);
    for (int i = 0; i < n; ++i) {
        perm[i] = i;
        for (int j = 0; j < n; ++j) scale[i] = std::max(scale[i], std::fabs(a(i, j)));
    }
    for (int col = 0; col < n; ++col) {
        int pivot = col;
        double best = -1.0;
        for (int i = col; i < n; ++i) {
            const double cand = std::fabs(a(i, col));
            if (cand > best) {
                best = cand;
                pivot = i;
            }
        }
        const double row_scale = std::max(scale[perm[pivot]], 1e-300);
        if (best <= 1e-14 * row_scale)
            throw SingularDesign("linear system is numerically singular");
        if (pivot != col) {
            for (int j = 0; j < n; ++j) std::swap(a(pivot, j), a(col, j));
            std::swap(perm[pivot], perm[col]);
        }
        const double inv_pivot = 1.0 / a(col, col);
        for (int i = col + 1; i < n; ++i) {
            const double f = a(i, col) * inv_pivot;
            a(i, col) = f;
            for (int j = col + 1; j < n; ++j) a(i, j) -= f * a(col, j);
        }
    }
    return perm;
}

std::vector<double> lu_solve(const Mat& lu, const std::vector<int>& perm,
                             const std::vector<double>& b) {
    const int n = lu.rows;
    std::vector<double> x(n);
    for (int i = 0; i < n; ++i) x[i] = b[perm[i]];
    for (int i = 1; i < n; ++i)
        for (int j = 0; j < i; ++j) x[i] -= lu(i, j) * x[j];
    for (int i = n - 1; i >= 0; --i) {
        for (int j = i + 1; j < n; ++j) x[i] -= lu(i, j) * x[j];
        x[i] /= lu(i, i);
    }
    return x;
}

}  // namespace

std::vector<double> solve(Mat a, std::vector<double> b) {
    const std::vector<int> perm = lu_decompose(a);
    return lu_solve(a, perm, b);
}

double norm1(const Mat& m) {
    double best = 0.0;
    for (int j = 0; j < m.cols; ++j) {
        double col = 0.0;
        for (int i = 0; i < m.rows; ++i) col += std::fabs(m(i, j));
        best = std::max(best, col);
    }
    return best;
}

Mat inverse(const Mat& a, double cond_limit) {
    const int n = a.rows;
    Mat lu = a;
    const std::vector<int> perm = lu_decompose(lu);
    Mat inv(n, n);
    std::vector<double> unit(n, 0.0);
    for (int j = 0; j < n; ++j) {
        unit[j] = 1.0;
        const std::vector<double> col = lu_solve(lu, perm, unit);
        unit[j] = 0.0;
        for (int i = 0; i < n; ++i) inv(i, j) = col[i];
    }
    if (norm1(a) * norm1(inv) > cond_limit)
        throw SingularDesign("matrix condition number exceeds limit");
    return inv;
}

void sym_eigen(const Mat& a, std::vector<double>& eigenvalues, Mat& eigenvectors) {
    const int n = a.rows;
    Mat d = a;
    eigenvectors = identity(n);
    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) off += d(i, j) * d(i, j);
        if (off <= 1e-300) break;
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                const double apq = d(i, j);
                if (std::fabs(apq) < 1e-300) continue;
                const double theta = (d(j, j) - d(i, i)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (int k = 0; k < n; ++k) {
                    const double dik = d(i, k), djk = d(j, k);
                    d(i, k) = c * dik - s * djk;
                    d(j, k) = s * dik + c * djk;
                }
                for (int k = 0; k < n; ++k) {
                    const double dki = d(k, i), dkj = d(k, j);
                    d(k, i) = c * dki - s * dkj;
                    d(k, j) = s * dki + c * dkj;
                    const double vki = eigenvectors(k, i), vkj = eigenvectors(k, j);
                    eigenvectors(k, i) = c * vki - s * vkj;
                    eigenvectors(k, j) = s * vki + c * vkj;
                }
            }
        }
    }
    eigenvalues.resize(n);
    for (int i = 0; i < n; ++i) eigenvalues[i] = d(i, i);
}

Mat sym_sqrt_psd(const Mat& a) {
    std::vector<double> w;
    Mat v;
    sym_eigen(a, w, v);
    const int n = a.rows;
    Mat out(n, n);
    for (int k = 0; k < n; ++k) {
        const double root = std::sqrt(std::max(w[k], 0.0));
        if (root == 0.0) continue;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) out(i, j) += root * v(i, k) * v(j, k);
    }
    return out;
}

double trace_sqrt_psd(const Mat& a) {
    std::vector<double> w;
    Mat v;
    sym_eigen(a, w, v);
    double tr = 0.0;
    for (double x : w) tr += std::sqrt(std::max(x, 0.0));
    return tr;
}

Mat cholesky(const Mat& a) {
    const int n = a.rows;
    Mat l(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j <= i; ++j) {
            double sum = a(i, j);
            for (int k = 0; k < j; ++k) sum -= l(i, k) * l(j, k);
            if (i == j) {
                if (sum <= 0.0) throw SingularDesign("matrix is not positive definite");
                l(i, i) = std::sqrt(sum);
            } else {
                l(i, j) = sum / l(j, j);
            }
        }
    }
    return l;
}

}  // namespace monoband::linalg
