#pragma once

#include <vector>

namespace specrig {

/// Selected eigenpairs of a standard symmetric tridiagonal matrix.
/// `values` ascending, `vectors[k]` the unit eigenvector of values[k].
struct TridiagEigen {
    std::vector<double> values;
    std::vector<std::vector<double>> vectors;
};

/// The `count` algebraically largest eigenpairs of the symmetric tridiagonal
/// matrix with main diagonal `diag` and off-diagonal `off` (size n-1).
/// Throws NumericalError on solver failure.
TridiagEigen largest_tridiag_eigenpairs(std::vector<double> diag, std::vector<double> off, int count);

/// Dense matrix in row-major order, rows x cols.
struct Matrix {
    int rows = 0, cols = 0;
    std::vector<double> data;
    Matrix() = default;
    Matrix(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, 0.0) {}
    double& operator()(int i, int j) { return data[static_cast<std::size_t>(i) * cols + j]; }
    double operator()(int i, int j) const { return data[static_cast<std::size_t>(i) * cols + j]; }
};

/// Thin SVD of a tall matrix (rows >= cols) by one-sided Jacobi rotations.
/// Singular values descending; U is rows x cols with orthonormal columns,
/// V is cols x cols orthogonal, A = U diag(sigma) V^T.
struct Svd {
    std::vector<double> sigma;
    Matrix u, v;
};
Svd jacobi_svd(const Matrix& a);

/// Minimum-norm least squares via the Jacobi SVD; singular values below
/// rcond * sigma_max are treated as zero.
std::vector<double> svd_least_squares(const Matrix& a, const std::vector<double>& rhs,
                                      double rcond = 1e-13);

} // namespace specrig
