#pragma once

#include <cmath>
#include <functional>
#include <string>

#include "nashdual/errors.hpp"

namespace nashdual {

// Sign-changing enclosure of a root; every eigenvalue returned by this
// library carries one as its certificate.
struct Bracket {
    double lo = 0.0;
    double hi = 0.0;
    double width() const { return hi - lo; }
};

namespace detail {

// Bracketed bisection refined by secant steps. The bracket is maintained at
// every step, so the result is certified to `width_tol` regardless of how the
// secant behaves.
inline double refine_root(const std::function<double(double)>& f, double lo, double hi,
                          double flo, double fhi, Bracket& cert, double width_tol = 1e-13)
{
    if (flo == 0.0) { cert = {lo, lo}; return lo; }
    if (fhi == 0.0) { cert = {hi, hi}; return hi; }
    if (flo * fhi > 0.0) throw solver_error("refine_root: endpoints do not bracket a root");
    for (int it = 0; it < 200 && hi - lo > width_tol; ++it) {
        double x = lo + (hi - lo) * flo / (flo - fhi);  // secant
        const double margin = 0.1 * (hi - lo);
        if (!(x > lo + margin) || !(x < hi - margin) || (it % 3 == 2))
            x = 0.5 * (lo + hi);
        const double fx = f(x);
        if (fx == 0.0) { cert = {x, x}; return x; }
        if (flo * fx < 0.0) { hi = x; fhi = fx; }
        else { lo = x; flo = fx; }
    }
    cert = {lo, hi};
    return 0.5 * (lo + hi);
}

// First sign change of f on [a, b] scanned with the given step; returns false
// when none exists.
inline bool scan_first_root(const std::function<double(double)>& f, double a, double b,
                            double step, double& root, Bracket& cert, double width_tol = 1e-13)
{
    double x0 = a, f0 = f(a);
    while (x0 < b) {
        double x1 = std::min(x0 + step, b);
        double f1 = f(x1);
        if (f0 == 0.0) { root = x0; cert = {x0, x0}; return true; }
        if (f0 * f1 <= 0.0) {
            root = refine_root(f, x0, x1, f0, f1, cert, width_tol);
            return true;
        }
        x0 = x1; f0 = f1;
        if (x1 >= b) break;
    }
    return false;
}

} // namespace detail

} // namespace nashdual
