#pragma once

// Test-side oracles, independent of the library code paths they check:
// plain Simpson quadrature, series Bessel functions for the n = 2 cases,
// and a no-frills bisection.

#include <cmath>
#include <functional>

namespace oracle {

inline double simpson(const std::function<double(double)>& f, double a, double b, int panels = 4096)
{
    const double h = (b - a) / panels;
    double s = f(a) + f(b);
    for (int k = 1; k < panels; ++k) s += (k % 2 ? 4.0 : 2.0) * f(a + k * h);
    return s * h / 3.0;
}

// integral_0^inf f via r = tan(theta); the endpoint theta = pi/2 is evaluated
// at a huge radius so substituted integrands with a finite limit are kept
inline double simpson_halfline(const std::function<double(double)>& f, int panels = 8192)
{
    return simpson(
        [&](double th) {
            const double t = th >= 1.5707963267948960 ? 1e12 : std::tan(th);
            return f(t) * (1.0 + t * t);
        },
        0.0, 1.5707963267948966, panels);
}

inline double bisect(const std::function<double(double)>& f, double lo, double hi, int iters = 200)
{
    double flo = f(lo);
    for (int i = 0; i < iters; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (flo * fm <= 0.0) hi = mid;
        else { lo = mid; flo = fm; }
    }
    return 0.5 * (lo + hi);
}

// classical Bessel J0, J1 by power series (accurate for |x| < ~12)
inline double bessel_j0(double x)
{
    double term = 1.0, sum = 1.0;
    const double q = 0.25 * x * x;
    for (int k = 1; k < 40; ++k) {
        term *= -q / (k * static_cast<double>(k));
        sum += term;
    }
    return sum;
}

inline double bessel_j1(double x)
{
    double term = 0.5 * x, sum = term;
    const double q = 0.25 * x * x;
    for (int k = 1; k < 40; ++k) {
        term *= -q / (k * (k + 1.0));
        sum += term;
    }
    return sum;
}

} // namespace oracle
