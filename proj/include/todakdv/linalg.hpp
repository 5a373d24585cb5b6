#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "todakdv/errors.hpp"

namespace todakdv::linalg {

namespace detail {
inline double conj(double x) { return x; }
inline std::complex<double> conj(const std::complex<double>& z) { return std::conj(z); }
inline double real(double x) { return x; }
inline double real(const std::complex<double>& z) { return z.real(); }
} // namespace detail

/// Square row-major matrix.
template <class T>
class DenseMatrix {
public:
    DenseMatrix() = default;
    explicit DenseMatrix(std::size_t n) : n_(n), data_(n * n, T{}) {}

    std::size_t size() const { return n_; }
    T& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
    T* row(std::size_t i) { return data_.data() + i * n_; }
    const T* row(std::size_t i) const { return data_.data() + i * n_; }

private:
    std::size_t n_ = 0;
    std::vector<T> data_;
};

struct Tridiagonal {
    std::vector<double> diag;
    std::vector<double> off; // off[i] couples i and i+1; size n, last entry unused
};

/// Householder reduction of a Hermitian matrix to real symmetric tridiagonal
/// form. Only eigenvalues are preserved (the sub-diagonal phases are dropped).
template <class T>
Tridiagonal householder_tridiagonalize(DenseMatrix<T> a)
{
    const std::size_t n = a.size();
    Tridiagonal t;
    t.diag.assign(n, 0.0);
    t.off.assign(n, 0.0);
    std::vector<T> v(n), p(n), w(n);

    for (std::size_t k = 0; k + 2 < n; ++k) {
        double sigma2 = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) sigma2 += std::norm(std::complex<double>(a(i, k)));
        const double sigma = std::sqrt(sigma2);
        if (sigma == 0.0) continue;

        const T x0 = a(k + 1, k);
        const double ax0 = std::abs(x0);
        const T phase = ax0 == 0.0 ? T(1) : x0 / ax0;
        const T alpha = -phase * sigma;

        for (std::size_t i = k + 1; i < n; ++i) v[i] = a(i, k);
        v[k + 1] -= alpha;
        const double vnorm = std::sqrt(2.0 * sigma * (sigma + ax0));
        for (std::size_t i = k + 1; i < n; ++i) v[i] /= vnorm;

        for (std::size_t i = k + 1; i < n; ++i) {
            const T* ai = a.row(i);
            T s{};
            for (std::size_t j = k + 1; j < n; ++j) s += ai[j] * v[j];
            p[i] = s;
        }
        double K = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) K += detail::real(detail::conj(v[i]) * p[i]);
        for (std::size_t i = k + 1; i < n; ++i) w[i] = 2.0 * p[i] - 2.0 * K * v[i];

        for (std::size_t i = k + 1; i < n; ++i) {
            T* ai = a.row(i);
            const T vi = v[i], wi = w[i];
            for (std::size_t j = k + 1; j < n; ++j)
                ai[j] -= vi * detail::conj(w[j]) + wi * detail::conj(v[j]);
        }
        a(k + 1, k) = alpha;
        a(k, k + 1) = detail::conj(alpha);
    }
    for (std::size_t i = 0; i < n; ++i) t.diag[i] = detail::real(a(i, i));
    for (std::size_t i = 0; i + 1 < n; ++i) t.off[i] = std::abs(a(i + 1, i));
    return t;
}

/// Eigenvalues of a real symmetric tridiagonal matrix by implicit-shift QL,
/// sorted ascending.
inline std::vector<double> tridiagonal_eigenvalues(Tridiagonal t, int max_iterations = 60)
{
    std::vector<double>& d = t.diag;
    std::vector<double>& e = t.off;
    const int n = static_cast<int>(d.size());
    if (n == 0) return {};
    e.resize(n);
    e[n - 1] = 0.0;
    constexpr double eps = std::numeric_limits<double>::epsilon();

    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m;
        do {
            for (m = l; m < n - 1; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= eps * dd) break;
            }
            if (m != l) {
                if (iter++ == max_iterations)
                    throw NumericalFailure("tridiagonal QL did not converge for eigenvalue " + std::to_string(l) +
                                           " after " + std::to_string(max_iterations) + " iterations");
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
                double s = 1.0, c = 1.0, p = 0.0;
                int i;
                for (i = m - 1; i >= l; --i) {
                    double f = s * e[i];
                    const double b = c * e[i];
                    e[i + 1] = (r = std::hypot(f, g));
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                }
                if (r == 0.0 && i >= l) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
    std::sort(d.begin(), d.end());
    return d;
}

template <class T>
std::vector<double> hermitian_eigenvalues(DenseMatrix<T> a)
{
    return tridiagonal_eigenvalues(householder_tridiagonalize(std::move(a)));
}

/// Solve A x = b in place for a small dense system (partial pivoting).
/// `a` is row-major n x n, `b` holds `nrhs` right-hand sides column-interleaved
/// as b[i * nrhs + r].
template <class T>
void lu_solve(std::vector<T>& a, std::vector<T>& b, std::size_t n, std::size_t nrhs)
{
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        double best = std::abs(a[k * n + k]);
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(a[i * n + k]) > best) {
                best = std::abs(a[i * n + k]);
                piv = i;
            }
        if (best == 0.0) throw NumericalFailure("singular linear system");
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a[k * n + j], a[piv * n + j]);
            for (std::size_t r = 0; r < nrhs; ++r) std::swap(b[k * nrhs + r], b[piv * nrhs + r]);
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            const T f = a[i * n + k] / a[k * n + k];
            if (f == T{}) continue;
            for (std::size_t j = k + 1; j < n; ++j) a[i * n + j] -= f * a[k * n + j];
            for (std::size_t r = 0; r < nrhs; ++r) b[i * nrhs + r] -= f * b[k * nrhs + r];
        }
    }
    for (std::size_t k = n; k-- > 0;) {
        for (std::size_t r = 0; r < nrhs; ++r) {
            T s = b[k * nrhs + r];
            for (std::size_t j = k + 1; j < n; ++j) s -= a[k * n + j] * b[j * nrhs + r];
            b[k * nrhs + r] = s / a[k * n + k];
        }
    }
}

} // namespace todakdv::linalg
