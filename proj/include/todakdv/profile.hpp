#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "todakdv/errors.hpp"

namespace todakdv {

inline constexpr std::size_t default_max_degree = 64;

// Complex Fourier coefficients f_k of f(x) = sum_k f_k e^{2 pi i k x}.
using FourierList = std::map<int, std::complex<double>>;

/// Real trigonometric polynomial on the unit circle,
///   f(x) = c0 + sum_{k=1..K} (cos[k-1] cos 2 pi k x + sin[k-1] sin 2 pi k x).
class PeriodicProfile {
public:
    PeriodicProfile() = default;

    static PeriodicProfile from_fourier(double c0, std::vector<double> cos_coeffs,
                                        std::vector<double> sin_coeffs,
                                        std::size_t max_degree = default_max_degree)
    {
        auto check = [](const std::vector<double>& v, const char* name) {
            for (std::size_t i = 0; i < v.size(); ++i)
                if (!std::isfinite(v[i]))
                    throw InvalidInput(std::string("non-finite profile coefficient ") + name + "[" +
                                       std::to_string(i) + "]");
        };
        if (!std::isfinite(c0)) throw InvalidInput("non-finite profile coefficient c0");
        check(cos_coeffs, "cos");
        check(sin_coeffs, "sin");
        PeriodicProfile p;
        p.c0_ = c0;
        p.cos_ = std::move(cos_coeffs);
        p.sin_ = std::move(sin_coeffs);
        p.trim();
        if (p.degree() > max_degree)
            throw InvalidInput("profile degree " + std::to_string(p.degree()) + " exceeds cap " +
                               std::to_string(max_degree));
        return p;
    }

    // Real profile from complex coefficients; only k >= 0 entries are read,
    // the k < 0 half is implied by realness.
    static PeriodicProfile from_complex(const FourierList& f, std::size_t max_degree = default_max_degree)
    {
        double c0 = 0.0;
        std::vector<double> c, s;
        for (auto [k, v] : f) {
            if (k < 0) continue;
            if (k == 0) {
                c0 = v.real();
                continue;
            }
            if (c.size() < static_cast<std::size_t>(k)) {
                c.resize(k, 0.0);
                s.resize(k, 0.0);
            }
            c[k - 1] = 2.0 * v.real();
            s[k - 1] = -2.0 * v.imag();
        }
        return from_fourier(c0, std::move(c), std::move(s), max_degree);
    }

    double operator()(double x) const
    {
        const double t = x - std::floor(x);
        double f = c0_;
        for (std::size_t k = 1; k <= degree(); ++k) {
            const double arg = 2.0 * std::numbers::pi * static_cast<double>(k) * t;
            f += coefficient(cos_, k) * std::cos(arg) + coefficient(sin_, k) * std::sin(arg);
        }
        return f;
    }

    std::vector<double> sample(std::size_t n) const
    {
        std::vector<double> v(n);
        for (std::size_t i = 0; i < n; ++i) v[i] = (*this)(static_cast<double>(i) / static_cast<double>(n));
        return v;
    }

    double constant() const { return c0_; }
    double mean() const { return c0_; }
    bool mean_zero() const { return c0_ == 0.0; }
    bool is_zero() const { return c0_ == 0.0 && cos_.empty() && sin_.empty(); }
    const std::vector<double>& cos_coefficients() const { return cos_; }
    const std::vector<double>& sin_coefficients() const { return sin_; }
    std::size_t degree() const { return std::max(cos_.size(), sin_.size()); }

    // Upper bound for the sup norm.
    double sup_bound() const
    {
        double s = std::abs(c0_);
        for (double c : cos_) s += std::abs(c);
        for (double c : sin_) s += std::abs(c);
        return s;
    }

    FourierList fourier() const
    {
        FourierList f;
        if (c0_ != 0.0) f[0] = c0_;
        for (std::size_t k = 1; k <= degree(); ++k) {
            const std::complex<double> v(0.5 * coefficient(cos_, k), -0.5 * coefficient(sin_, k));
            if (v == 0.0) continue;
            f[static_cast<int>(k)] = v;
            f[-static_cast<int>(k)] = std::conj(v);
        }
        return f;
    }

    PeriodicProfile derivative() const
    {
        PeriodicProfile d;
        d.cos_.resize(degree(), 0.0);
        d.sin_.resize(degree(), 0.0);
        for (std::size_t k = 1; k <= degree(); ++k) {
            const double w = 2.0 * std::numbers::pi * static_cast<double>(k);
            d.cos_[k - 1] = w * coefficient(sin_, k);
            d.sin_[k - 1] = -w * coefficient(cos_, k);
        }
        d.trim();
        return d;
    }

    // x -> f(m x)
    PeriodicProfile dilated(std::size_t m) const
    {
        if (m == 0) throw InvalidInput("dilation factor must be positive");
        PeriodicProfile d;
        d.c0_ = c0_;
        d.cos_.assign(m * degree(), 0.0);
        d.sin_.assign(m * degree(), 0.0);
        for (std::size_t k = 1; k <= degree(); ++k) {
            d.cos_[m * k - 1] = coefficient(cos_, k);
            d.sin_[m * k - 1] = coefficient(sin_, k);
        }
        d.trim();
        return d;
    }

    friend PeriodicProfile operator+(const PeriodicProfile& a, const PeriodicProfile& b)
    {
        PeriodicProfile r;
        r.c0_ = a.c0_ + b.c0_;
        const std::size_t K = std::max(a.degree(), b.degree());
        r.cos_.resize(K);
        r.sin_.resize(K);
        for (std::size_t k = 1; k <= K; ++k) {
            r.cos_[k - 1] = coefficient(a.cos_, k) + coefficient(b.cos_, k);
            r.sin_[k - 1] = coefficient(a.sin_, k) + coefficient(b.sin_, k);
        }
        r.trim();
        return r;
    }

    friend PeriodicProfile operator*(double s, const PeriodicProfile& a)
    {
        PeriodicProfile r = a;
        r.c0_ *= s;
        for (double& c : r.cos_) c *= s;
        for (double& c : r.sin_) c *= s;
        r.trim();
        return r;
    }

    friend PeriodicProfile operator-(const PeriodicProfile& a, const PeriodicProfile& b) { return a + (-1.0) * b; }
    friend PeriodicProfile operator-(const PeriodicProfile& a) { return (-1.0) * a; }

    friend bool operator==(const PeriodicProfile&, const PeriodicProfile&) = default;

private:
    static double coefficient(const std::vector<double>& v, std::size_t k) { return k <= v.size() ? v[k - 1] : 0.0; }

    void trim()
    {
        while (!cos_.empty() && cos_.back() == 0.0) cos_.pop_back();
        while (!sin_.empty() && sin_.back() == 0.0) sin_.pop_back();
    }

    double c0_ = 0.0;
    std::vector<double> cos_;
    std::vector<double> sin_;
};

inline PeriodicProfile profile_from_fourier(double c0, std::vector<double> cos_coeffs, std::vector<double> sin_coeffs)
{
    return PeriodicProfile::from_fourier(c0, std::move(cos_coeffs), std::move(sin_coeffs));
}

inline double evaluate(const PeriodicProfile& p, double x) { return p(x); }

// v_i = f(i/N)
inline std::vector<double> sample_grid(const PeriodicProfile& p, std::size_t N) { return p.sample(N); }

} // namespace todakdv
