#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace espde {

/// Dense row-major square matrix, sized for game Hessians (N stays in the low tens).
struct Matrix {
    std::size_t n = 0;
    std::vector<double> a;

    Matrix() = default;
    explicit Matrix(std::size_t size) : n(size), a(size * size, 0.0) {}

    double& operator()(std::size_t i, std::size_t j) { return a[i * n + j]; }
    double operator()(std::size_t i, std::size_t j) const { return a[i * n + j]; }
};

Matrix mat_mul(const Matrix& x, const Matrix& y);

/// Solves A x = b by Gaussian elimination with partial pivoting.
/// Throws std::runtime_error when the matrix is numerically singular.
std::vector<double> solve_linear(Matrix a, std::vector<double> b);

/// All eigenvalues via the characteristic polynomial (Faddeev-LeVerrier) and
/// Durand-Kerner root iteration. Intended for the small matrices of the stability checks.
std::vector<std::complex<double>> eigenvalues(const Matrix& m);

/// Independent eigenvalue route for cross-checks: complex Hessenberg QR iteration with
/// Wilkinson shifts applied to the matrix itself.
std::vector<std::complex<double>> eigenvalues_qr(const Matrix& m);

/// Tridiagonal solve (Thomas algorithm); diagonals are modified in place.
void solve_tridiagonal(std::vector<double>& sub, std::vector<double>& diag,
                       std::vector<double>& sup, std::vector<double>& rhs);

} // namespace espde
