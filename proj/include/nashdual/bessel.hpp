#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "nashdual/errors.hpp"

namespace nashdual {

// The normalized radial eigenfunction J of -Delta on R^n:
//     J'' + (n-1)/r J' = -J,   J(0) = 1,  J'(0) = 0.
// Closed forms: J = cos r (n = 1), J = sin r / r (n = 3); in general
// J(r) = Gamma(n/2) (2/r)^{n/2-1} J_{n/2-1}(r).
struct BesselValue {
    double j = 1.0;
    double jp = 0.0;
};

namespace detail {

inline constexpr double bessel_series_radius = 0.5;
inline constexpr int bessel_series_terms = 12;
inline constexpr double bessel_ode_step = 1e-3;

// power series around 0: J = sum a_k r^{2k}, a_k = -a_{k-1} / (2k (2k+n-2))
inline BesselValue bessel_series(int n, double r)
{
    double a = 1.0, j = 1.0, jp = 0.0;
    const double r2 = r * r;
    double rpow = 1.0;
    for (int k = 1; k <= bessel_series_terms; ++k) {
        a /= -(2.0 * k * (2.0 * k + n - 2.0));
        rpow *= r2;
        j += a * rpow;
        jp += 2.0 * k * a * rpow / (r == 0.0 ? 1.0 : r);
    }
    if (r == 0.0) jp = 0.0;
    return {j, jp};
}

inline void bessel_rhs(int n, double r, double j, double jp, double& dj, double& djp)
{
    dj = jp;
    djp = -j - (n - 1) * jp / r;
}

// one classical RK4 step of size h from r
inline void bessel_rk4(int n, double& r, double& j, double& jp, double h)
{
    double k1j, k1p, k2j, k2p, k3j, k3p, k4j, k4p;
    bessel_rhs(n, r, j, jp, k1j, k1p);
    bessel_rhs(n, r + 0.5 * h, j + 0.5 * h * k1j, jp + 0.5 * h * k1p, k2j, k2p);
    bessel_rhs(n, r + 0.5 * h, j + 0.5 * h * k2j, jp + 0.5 * h * k2p, k3j, k3p);
    bessel_rhs(n, r + h, j + h * k3j, jp + h * k3p, k4j, k4p);
    j += h / 6.0 * (k1j + 2.0 * k2j + 2.0 * k3j + k4j);
    jp += h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
    r += h;
}

} // namespace detail

inline BesselValue radial_bessel(int n, double r)
{
    if (n < 1) throw input_error("radial_bessel: dimension must be >= 1");
    if (!(r >= 0.0)) throw input_error("radial_bessel: radius must be >= 0");
    if (r <= detail::bessel_series_radius) return detail::bessel_series(n, r);
    BesselValue v = detail::bessel_series(n, detail::bessel_series_radius);
    double x = detail::bessel_series_radius;
    const int steps = static_cast<int>(std::ceil((r - x) / detail::bessel_ode_step));
    const double h = (r - x) / steps;
    for (int i = 0; i < steps; ++i) detail::bessel_rk4(n, x, v.j, v.jp, h);
    return v;
}

// Evaluates J at an ascending sequence of radii in a single integration pass.
inline std::vector<BesselValue> radial_bessel_path(int n, const std::vector<double>& radii)
{
    std::vector<BesselValue> out;
    out.reserve(radii.size());
    double x = detail::bessel_series_radius;
    BesselValue v = detail::bessel_series(n, x);
    bool started = false;
    for (double r : radii) {
        if (!out.empty() && !(r >= (started ? x : 0.0)))
            throw input_error("radial_bessel_path: radii must be ascending");
        if (r <= detail::bessel_series_radius) {
            out.push_back(detail::bessel_series(n, r));
            continue;
        }
        started = true;
        const int steps = static_cast<int>(std::ceil((r - x) / detail::bessel_ode_step));
        if (steps > 0) {
            const double h = (r - x) / steps;
            for (int i = 0; i < steps; ++i) detail::bessel_rk4(n, x, v.j, v.jp, h);
            x = r;  // guard against accumulated drift
        }
        out.push_back(v);
    }
    return out;
}

} // namespace nashdual
