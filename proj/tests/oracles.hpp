#pragma once

// Reference values computed independently of the library: explicit series,
// radial quadrature and the polar form of the heat kernel.

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>

namespace oracle {

using std::numbers::pi;

inline double binomial(int n, int k) {
    return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0));
}

// L_p^a(x) = sum_k (-1)^k C(p+a, p-k) x^k / k!
inline double laguerre_series(int p, int a, double x) {
    double sum = 0.0;
    for (int k = 0; k <= p; ++k) {
        sum += (k % 2 ? -1.0 : 1.0) * binomial(p + a, p - k) * std::pow(x, k) / std::tgamma(k + 1.0);
    }
    return sum;
}

// Real radial part of LG_p^m with power P and waist w.
inline double lg_radial(int p, int m, double w, double P, double r) {
    const int am = std::abs(m);
    const double norm = std::sqrt(2.0 * P * std::tgamma(p + 1.0) / (pi * std::tgamma(p + am + 1.0))) / w;
    const double x = 2.0 * r * r / (w * w);
    return norm * std::pow(std::sqrt(2.0) * r / w, am) * laguerre_series(p, am, x) * std::exp(-r * r / (w * w));
}

// Composite Simpson on [a, b] with an even number of intervals.
inline double simpson(const std::function<double(double)>& f, double a, double b, int intervals = 4000) {
    if (intervals % 2) ++intervals;
    const double h = (b - a) / intervals;
    double sum = f(a) + f(b);
    for (int i = 1; i < intervals; ++i) sum += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    return sum * h / 3.0;
}

// I_m(z) exp(-z), switching to the large-argument expansion where
// the unscaled function overflows.
inline double bessel_i_scaled(int m, double z) {
    if (z < 500.0) return std::cyl_bessel_i(static_cast<double>(m), z) * std::exp(-z);
    const double mu = 4.0 * m * m;
    return (1.0 - (mu - 1.0) / (8.0 * z) + (mu - 1.0) * (mu - 9.0) / (2.0 * 64.0 * z * z)) /
           std::sqrt(2.0 * pi * z);
}

// Radial part at time t of a field g0(r) exp(-i m theta) under u_t = D lap u:
// (1/2Dt) int exp(-(r^2+r'^2)/4Dt) I_m(r r'/2Dt) g0(r') r' dr'.
inline double heat_radial(const std::function<double(double)>& g0, int m, double D, double t, double r,
                          double rmax, int intervals = 4000) {
    const double a = 4.0 * D * t;
    auto integrand = [&](double rp) {
        const double z = r * rp / (2.0 * D * t);
        return std::exp(-(r - rp) * (r - rp) / a) * bessel_i_scaled(std::abs(m), z) * g0(rp) * rp;
    };
    return simpson(integrand, 0.0, rmax, intervals) / (2.0 * D * t);
}

// 2 pi int f(r) r dr.
inline double radial_integral(const std::function<double(double)>& f, double rmax, int intervals = 4000) {
    return 2.0 * pi * simpson([&](double r) { return f(r) * r; }, 0.0, rmax, intervals);
}

}  // namespace oracle
