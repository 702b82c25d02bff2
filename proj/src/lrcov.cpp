#include "monoband/lrcov.hpp"

#include <algorithm>
#include <cmath>

#include "monoband/errors.hpp"
#include "monoband/kernels.hpp"

namespace monoband::lrcov {

void check_window(int L, int n) {
    if (L < 2 || L > n / 2)
        throw InvalidWindow("block length must satisfy 2 <= L <= n/2");
}

LongRunIncrements cum_increments(const std::vector<double>& residuals, int n, int p, int L) {
    check_window(L, n);
    LongRunIncrements inc;
    inc.mode = LongRunIncrements::Mode::Trend;
    inc.n = n;
    inc.dim = p;
    inc.L = L;
    inc.factors.assign(static_cast<std::size_t>(n) * p, 0.0);
    for (int k = 0; k < p; ++k) {
        const double* col = residuals.data() + static_cast<std::size_t>(k) * n;
        double* out = inc.factor_col(k);
        // prefix sums in extended precision keep the sliding window drift-free
        long double acc = 0.0L;
        std::vector<long double> prefix(n + 1, 0.0L);
        for (int i = 0; i < n; ++i) {
            acc += col[i];
            prefix[i + 1] = acc;
        }
        for (int j = L - 1; j < n; ++j)
            out[j] = static_cast<double>(prefix[j + 1] - prefix[j + 1 - L]);
    }
    return inc;
}

linalg::Mat cumulative_q(const LongRunIncrements& inc, int k) {
    linalg::Mat q(inc.dim, inc.dim);
    for (int j = 0; j < std::min(k, inc.n); ++j) {
        for (int r = 0; r < inc.dim; ++r) {
            const double fr = inc.factor_col(r)[j];
            if (fr == 0.0) continue;
            for (int c = 0; c < inc.dim; ++c)
                q(r, c) += fr * inc.factor_col(c)[j] / inc.L;
        }
    }
    return q;
}

linalg::Mat m_hat(const double* x, int n, int p, double t, double hr) {
    const double tstar = std::max(hr, std::min(t, 1.0 - hr));
    linalg::Mat m(p, p);
    const int lo = std::max(1, static_cast<int>(std::ceil(n * (tstar - hr) - 1e-12)));
    const int hi = std::min(n, static_cast<int>(std::floor(n * (tstar + hr) + 1e-12)));
    for (int i = lo; i <= hi; ++i) {
        const double w = kernels::kernel_eval({}, (static_cast<double>(i) / n - tstar) / hr);
        if (w <= 0.0) continue;
        for (int r = 0; r < p; ++r) {
            const double xr = x[static_cast<std::size_t>(r) * n + (i - 1)];
            for (int c = r; c < p; ++c)
                m(r, c) += w * xr * x[static_cast<std::size_t>(c) * n + (i - 1)];
        }
    }
    for (int r = 0; r < p; ++r)
        for (int c = 0; c < r; ++c) m(r, c) = m(c, r);
    for (auto& v : m.a) v /= n * hr;
    return m;
}

LongRunIncrements sigma_c_factors(const double* x, int n, int p,
                                  const std::vector<double>& residuals,
                                  const linalg::Mat& contrast, int L, double hr,
                                  double ridge, double cond_limit) {
    check_window(L, n);
    const int s = contrast.rows;
    LongRunIncrements inc;
    inc.mode = LongRunIncrements::Mode::Regression;
    inc.n = n;
    inc.dim = s;
    inc.L = L;
    inc.factors.assign(static_cast<std::size_t>(n) * s, 0.0);

    // rolling block sums w_j of x_i eps_i, per covariate coordinate
    std::vector<std::vector<long double>> prefix(p, std::vector<long double>(n + 1, 0.0L));
    for (int k = 0; k < p; ++k)
        for (int i = 0; i < n; ++i)
            prefix[k][i + 1] =
                prefix[k][i] + x[static_cast<std::size_t>(k) * n + i] * residuals[i];

    std::vector<double> w(p), mw(p);
    for (int j = L - 1; j < n; ++j) {
        for (int k = 0; k < p; ++k)
            w[k] = static_cast<double>(prefix[k][j + 1] - prefix[k][j + 1 - L]);
        linalg::Mat m = m_hat(x, n, p, static_cast<double>(j + 1) / n, hr);
        if (ridge > 0.0)
            for (int d = 0; d < p; ++d) m(d, d) += ridge;
        linalg::Mat minv;
        try {
            minv = linalg::inverse(m, cond_limit);
        } catch (const SingularDesign&) {
            throw SingularDesign("design moment matrix not invertible at t_j=" +
                                 std::to_string(static_cast<double>(j + 1) / n));
        }
        for (int k = 0; k < p; ++k) {
            double acc = 0.0;
            for (int c = 0; c < p; ++c) acc += minv(k, c) * w[c];
            mw[k] = acc;
        }
        for (int r = 0; r < s; ++r) {
            double acc = 0.0;
            for (int c = 0; c < p; ++c) acc += contrast(r, c) * mw[c];
            inc.factor_col(r)[j] = acc;
        }
    }
    return inc;
}

}  // namespace monoband::lrcov
