#include "specrig/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>

#include "specrig/errors.hpp"

extern "C" void dstevr_(const char* jobz, const char* range, const int* n, double* d, double* e,
                        const double* vl, const double* vu, const int* il, const int* iu,
                        const double* abstol, int* m, double* w, double* z, const int* ldz,
                        int* isuppz, double* work, const int* lwork, int* iwork, const int* liwork,
                        int* info, std::size_t jobz_len, std::size_t range_len);

namespace specrig {

TridiagEigen largest_tridiag_eigenpairs(std::vector<double> diag, std::vector<double> off, int count) {
    const int n = static_cast<int>(diag.size());
    if (n < 1) throw NumericalError("tridiagonal eigensolve: empty matrix");
    if (count < 1) throw ConfigError("tridiagonal eigensolve: count must be >= 1");
    count = std::min(count, n);

    off.resize(n, 0.0);   // LAPACK wants n slots, last unused
    const int il = n - count + 1;
    const int iu = n;
    const double vl = 0.0, vu = 0.0, abstol = 0.0;
    int m = 0, info = 0;
    const int ldz = n;
    std::vector<double> w(n), z(static_cast<std::size_t>(n) * count);
    std::vector<int> isuppz(2 * static_cast<std::size_t>(count));
    int lwork = std::max(30 * n, 1), liwork = std::max(20 * n, 1);
    std::vector<double> work(lwork);
    std::vector<int> iwork(liwork);

    dstevr_("V", "I", &n, diag.data(), off.data(), &vl, &vu, &il, &iu, &abstol, &m, w.data(),
            z.data(), &ldz, isuppz.data(), work.data(), &lwork, iwork.data(), &liwork, &info, 1, 1);
    if (info != 0)
        throw NumericalError("tridiagonal eigensolve failed (dstevr info=" + std::to_string(info) + ")");
    if (m != count)
        throw NumericalError("tridiagonal eigensolve returned " + std::to_string(m) +
                             " of " + std::to_string(count) + " requested eigenpairs");

    TridiagEigen out;
    out.values.assign(w.begin(), w.begin() + m);
    out.vectors.resize(m);
    for (int k = 0; k < m; ++k)
        out.vectors[k].assign(z.begin() + static_cast<std::size_t>(k) * n,
                              z.begin() + static_cast<std::size_t>(k + 1) * n);
    return out;
}

Svd jacobi_svd(const Matrix& a) {
    const int rows = a.rows, cols = a.cols;
    if (rows < cols) throw ConfigError("jacobi_svd: requires rows >= cols");

    Matrix u = a;
    Matrix v(cols, cols);
    for (int j = 0; j < cols; ++j) v(j, j) = 1.0;

    // One-sided Jacobi: orthogonalize column pairs until all rotations are trivial.
    const double eps = 1e-15;
    for (int sweep = 0; sweep < 60; ++sweep) {
        double off_max = 0.0;
        for (int p = 0; p < cols - 1; ++p) {
            for (int q = p + 1; q < cols; ++q) {
                double alpha = 0.0, beta = 0.0, gamma = 0.0;
                for (int i = 0; i < rows; ++i) {
                    alpha += u(i, p) * u(i, p);
                    beta += u(i, q) * u(i, q);
                    gamma += u(i, p) * u(i, q);
                }
                const double denom = std::sqrt(alpha * beta);
                if (denom > 0.0) off_max = std::max(off_max, std::abs(gamma) / denom);
                if (std::abs(gamma) <= eps * denom || denom == 0.0) continue;
                const double zeta = (beta - alpha) / (2.0 * gamma);
                const double t = ((zeta >= 0.0) ? 1.0 : -1.0) /
                                 (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                for (int i = 0; i < rows; ++i) {
                    const double up = u(i, p), uq = u(i, q);
                    u(i, p) = c * up - s * uq;
                    u(i, q) = s * up + c * uq;
                }
                for (int i = 0; i < cols; ++i) {
                    const double vp = v(i, p), vq = v(i, q);
                    v(i, p) = c * vp - s * vq;
                    v(i, q) = s * vp + c * vq;
                }
            }
        }
        if (off_max < eps) break;
    }

    Svd out;
    out.sigma.resize(cols);
    for (int j = 0; j < cols; ++j) {
        double norm = 0.0;
        for (int i = 0; i < rows; ++i) norm += u(i, j) * u(i, j);
        out.sigma[j] = std::sqrt(norm);
    }

    // Sort descending, carrying columns of U and V along.
    std::vector<int> order(cols);
    for (int j = 0; j < cols; ++j) order[j] = j;
    std::sort(order.begin(), order.end(), [&](int x, int y) { return out.sigma[x] > out.sigma[y]; });

    Svd sorted;
    sorted.sigma.resize(cols);
    sorted.u = Matrix(rows, cols);
    sorted.v = Matrix(cols, cols);
    for (int j = 0; j < cols; ++j) {
        const int src = order[j];
        sorted.sigma[j] = out.sigma[src];
        const double inv = sorted.sigma[j] > 0.0 ? 1.0 / sorted.sigma[j] : 0.0;
        for (int i = 0; i < rows; ++i) sorted.u(i, j) = u(i, src) * inv;
        for (int i = 0; i < cols; ++i) sorted.v(i, j) = v(i, src);
    }
    return sorted;
}

std::vector<double> svd_least_squares(const Matrix& a, const std::vector<double>& rhs, double rcond) {
    if (static_cast<int>(rhs.size()) != a.rows) throw ConfigError("svd_least_squares: size mismatch");
    const Svd svd = jacobi_svd(a);
    const double cutoff = rcond * (svd.sigma.empty() ? 0.0 : svd.sigma.front());
    std::vector<double> x(a.cols, 0.0);
    for (int j = 0; j < a.cols; ++j) {
        if (svd.sigma[j] <= cutoff) continue;
        double proj = 0.0;
        for (int i = 0; i < a.rows; ++i) proj += svd.u(i, j) * rhs[i];
        proj /= svd.sigma[j];
        for (int k = 0; k < a.cols; ++k) x[k] += svd.v(k, j) * proj;
    }
    return x;
}

} // namespace specrig
