#include "espde/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace espde {

Matrix mat_mul(const Matrix& x, const Matrix& y) {
    if (x.n != y.n) throw std::invalid_argument("mat_mul: size mismatch");
    Matrix r(x.n);
    for (std::size_t i = 0; i < x.n; ++i)
        for (std::size_t k = 0; k < x.n; ++k) {
            const double v = x(i, k);
            if (v == 0.0) continue;
            for (std::size_t j = 0; j < x.n; ++j) r(i, j) += v * y(k, j);
        }
    return r;
}

std::vector<double> solve_linear(Matrix a, std::vector<double> b) {
    const std::size_t n = a.n;
    if (b.size() != n) throw std::invalid_argument("solve_linear: size mismatch");
    double scale = 0.0;
    for (double v : a.a) scale = std::max(scale, std::abs(v));
    if (scale == 0.0) scale = 1.0;

    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(a(r, col)) > std::abs(a(piv, col))) piv = r;
        if (std::abs(a(piv, col)) < 1e-13 * scale)
            throw std::runtime_error("solve_linear: singular matrix");
        if (piv != col) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(piv, j), a(col, j));
            std::swap(b[piv], b[col]);
        }
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = a(r, col) / a(col, col);
            if (f == 0.0) continue;
            for (std::size_t j = col; j < n; ++j) a(r, j) -= f * a(col, j);
            b[r] -= f * b[col];
        }
    }
    std::vector<double> x(n, 0.0);
    for (std::size_t ir = n; ir-- > 0;) {
        double s = b[ir];
        for (std::size_t j = ir + 1; j < n; ++j) s -= a(ir, j) * x[j];
        x[ir] = s / a(ir, ir);
    }
    return x;
}

namespace {

// Characteristic polynomial coefficients c[0..n], c[0] = 1 (monic, powers descending),
// by the Faddeev-LeVerrier recursion.
std::vector<double> characteristic_polynomial(const Matrix& m) {
    const std::size_t n = m.n;
    std::vector<double> c(n + 1, 0.0);
    c[0] = 1.0;
    Matrix mk = m;
    for (std::size_t k = 1; k <= n; ++k) {
        double tr = 0.0;
        for (std::size_t i = 0; i < n; ++i) tr += mk(i, i);
        c[k] = -tr / static_cast<double>(k);
        if (k == n) break;
        for (std::size_t i = 0; i < n; ++i) mk(i, i) += c[k];
        mk = mat_mul(m, mk);
    }
    return c;
}

std::complex<double> poly_eval(const std::vector<double>& c, std::complex<double> z) {
    std::complex<double> v = 0.0;
    for (double ck : c) v = v * z + ck;
    return v;
}

} // namespace

std::vector<std::complex<double>> eigenvalues(const Matrix& m) {
    const std::size_t n = m.n;
    if (n == 0) return {};
    if (n == 1) return {std::complex<double>(m(0, 0), 0.0)};
    const auto c = characteristic_polynomial(m);

    // Durand-Kerner from non-real, non-symmetric seeds inside a bound on the root radius.
    double bound = 0.0;
    for (std::size_t k = 1; k <= n; ++k) bound = std::max(bound, std::pow(std::abs(c[k]), 1.0 / k));
    bound = 2.0 * bound + 1.0;
    std::vector<std::complex<double>> z(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double ang = 1.7 + 2.0 * M_PI * static_cast<double>(i) / static_cast<double>(n);
        z[i] = 0.7 * bound * std::complex<double>(std::cos(ang), std::sin(ang));
    }
    for (int it = 0; it < 500; ++it) {
        double step = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            std::complex<double> d = 1.0;
            for (std::size_t j = 0; j < n; ++j)
                if (j != i) d *= (z[i] - z[j]);
            const std::complex<double> delta = poly_eval(c, z[i]) / d;
            z[i] -= delta;
            step = std::max(step, std::abs(delta));
        }
        if (step < 1e-14 * bound) break;
    }
    // Snap conjugate-pair imaginary dust on essentially-real roots.
    for (auto& r : z)
        if (std::abs(r.imag()) < 1e-9 * (1.0 + std::abs(r.real()))) r = {r.real(), 0.0};
    std::sort(z.begin(), z.end(), [](auto a, auto b) { return a.real() < b.real(); });
    return z;
}

std::vector<std::complex<double>> eigenvalues_qr(const Matrix& m) {
    using cd = std::complex<double>;
    const std::size_t n = m.n;
    std::vector<std::vector<cd>> h(n, std::vector<cd>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) h[i][j] = m(i, j);

    // Householder reduction to upper Hessenberg form.
    for (std::size_t k = 0; k + 2 < n; ++k) {
        double norm = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) norm += std::norm(h[i][k]);
        norm = std::sqrt(norm);
        if (norm < 1e-300) continue;
        cd alpha = -norm * (std::abs(h[k + 1][k]) > 0 ? h[k + 1][k] / std::abs(h[k + 1][k]) : cd(1.0));
        std::vector<cd> v(n, 0.0);
        v[k + 1] = h[k + 1][k] - alpha;
        for (std::size_t i = k + 2; i < n; ++i) v[i] = h[i][k];
        double vn = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) vn += std::norm(v[i]);
        if (vn < 1e-300) continue;
        // H <- (I - 2 v v*/|v|^2) H (I - 2 v v*/|v|^2)
        for (std::size_t j = 0; j < n; ++j) {
            cd s = 0.0;
            for (std::size_t i = k + 1; i < n; ++i) s += std::conj(v[i]) * h[i][j];
            s *= 2.0 / vn;
            for (std::size_t i = k + 1; i < n; ++i) h[i][j] -= s * v[i];
        }
        for (std::size_t i = 0; i < n; ++i) {
            cd s = 0.0;
            for (std::size_t j = k + 1; j < n; ++j) s += h[i][j] * v[j];
            s *= 2.0 / vn;
            for (std::size_t j = k + 1; j < n; ++j) h[i][j] -= s * std::conj(v[j]);
        }
    }

    // Shifted QR on the Hessenberg matrix via Givens rotations, deflating from the bottom.
    std::vector<cd> eig;
    std::size_t end = n;
    int guard = 0;
    while (end > 0 && ++guard < 10000) {
        if (end == 1) { eig.push_back(h[0][0]); break; }
        const std::size_t e = end - 1;
        if (std::abs(h[e][e - 1]) < 1e-14 * (std::abs(h[e][e]) + std::abs(h[e - 1][e - 1]) + 1e-300)) {
            eig.push_back(h[e][e]);
            --end;
            continue;
        }
        // Wilkinson shift from the trailing 2x2 block.
        const cd a = h[e - 1][e - 1], b = h[e - 1][e], cc = h[e][e - 1], d = h[e][e];
        const cd tr = a + d, det = a * d - b * cc;
        const cd disc = std::sqrt(tr * tr - 4.0 * det);
        cd mu1 = (tr + disc) / 2.0, mu2 = (tr - disc) / 2.0;
        const cd mu = (std::abs(mu1 - d) < std::abs(mu2 - d)) ? mu1 : mu2;

        for (std::size_t i = 0; i < end; ++i) h[i][i] -= mu;
        std::vector<cd> cs(end), sn(end);
        for (std::size_t k = 0; k + 1 < end; ++k) {
            const cd x = h[k][k], y = h[k + 1][k];
            const double r = std::sqrt(std::norm(x) + std::norm(y));
            if (r < 1e-300) { cs[k] = 1.0; sn[k] = 0.0; continue; }
            cs[k] = x / r;
            sn[k] = y / r;
            for (std::size_t j = k; j < end; ++j) {
                const cd t1 = h[k][j], t2 = h[k + 1][j];
                h[k][j] = std::conj(cs[k]) * t1 + std::conj(sn[k]) * t2;
                h[k + 1][j] = -sn[k] * t1 + cs[k] * t2;
            }
        }
        for (std::size_t k = 0; k + 1 < end; ++k) {
            for (std::size_t i = 0; i <= std::min(k + 2, end - 1); ++i) {
                const cd t1 = h[i][k], t2 = h[i][k + 1];
                h[i][k] = t1 * cs[k] + t2 * sn[k];
                h[i][k + 1] = -t1 * std::conj(sn[k]) + t2 * std::conj(cs[k]);
            }
        }
        for (std::size_t i = 0; i < end; ++i) h[i][i] += mu;
    }
    std::sort(eig.begin(), eig.end(), [](cd a, cd b) { return a.real() < b.real(); });
    return eig;
}

void solve_tridiagonal(std::vector<double>& sub, std::vector<double>& diag,
                       std::vector<double>& sup, std::vector<double>& rhs) {
    const std::size_t n = diag.size();
    for (std::size_t i = 1; i < n; ++i) {
        const double w = sub[i] / diag[i - 1];
        diag[i] -= w * sup[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    rhs[n - 1] /= diag[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) rhs[i] = (rhs[i] - sup[i] * rhs[i + 1]) / diag[i];
}

} // namespace espde
