#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "nashdual/radial_profile.hpp"

namespace nashdual {

// Newton potential phi = (-Delta)^{-1} f of a radial profile, computed from
// the cumulative mass M(r) = integral_0^r s^{n-1} f(s) ds via
//     phi(r) = integral_r^inf t^{1-n} M(t) dt,   phi'(r) = -r^{1-n} M(r).
// Both M and phi are evaluated exactly for the piecewise-linear interpolant
// of the samples (per-cell closed forms), so the only discretization error is
// in the data representation itself.
struct PotentialResult {
    RadialProfile phi;
    std::vector<double> cumulative_mass;  // M(r_i), radial (no surface factor)
    double total_mass = 0.0;              // integral_{R^n} f dx
    double phi_integral = 0.0;            // integral_{R^n} phi dx
    double mass_correction = 0.0;         // n in {1,2}: magnitude of the projected-out constant

    // integral phi(x) |x|^p dx on demand; infinite when f carries net mass
    // (phi then decays like r^{2-n} and the weighted integral diverges).
    double weighted_phi_integral(double p) const
    {
        if (!mass_free) return std::numeric_limits<double>::infinity();
        const auto w = detail::linear_weights(phi.grid.nodes, phi.dim() - 1.0 + p);
        double s = 0.0;
        for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * phi.values[i];
        return phi.grid.surface_factor * s;
    }

    bool mass_free = false;  // true when f was (numerically) zero-mean
};

namespace detail {

// Exact cumulative mass and potential increments for piecewise-linear data.
// On each cell f(t) = c0 + c1 t,
//   M(t)  = M_a + c0 (t^n - a^n)/n + c1 (t^{n+1} - a^{n+1})/(n+1)
//   dphi  = Kc P(1-n) + (c0/n) P(1) + (c1/(n+1)) P(2),
// with Kc = M_a - c0 a^n/n - c1 a^{n+1}/(n+1) and P(alpha) the cell integral
// of t^alpha. Kc vanishes identically on the first cell (a = 0, M_a = 0),
// which removes the t^{1-n} singularity.
inline void potential_passes(int n, const std::vector<double>& r, const std::vector<double>& f,
                             std::vector<double>& M, std::vector<double>& dphi)
{
    const std::size_t m = r.size();
    M.assign(m, 0.0);
    dphi.assign(m, 0.0);  // dphi[i] = integral over cell [r_i, r_{i+1}]
    for (std::size_t i = 0; i + 1 < m; ++i) {
        const double a = r[i], b = r[i + 1];
        const double c1 = (f[i + 1] - f[i]) / (b - a);
        const double c0 = f[i] - c1 * a;
        const double pn = std::pow(a, n), pn1 = std::pow(a, n + 1);
        M[i + 1] = M[i] + c0 * (std::pow(b, n) - pn) / n
                        + c1 * (std::pow(b, n + 1) - pn1) / (n + 1);
        double d = (c0 / n) * power_integral(1, a, b)
                 + (c1 / (n + 1)) * power_integral(2, a, b);
        if (a > 0.0) {
            const double kc = M[i] - c0 * pn / n - c1 * pn1 / (n + 1);
            d += kc * power_integral(1 - n, a, b);
        }
        dphi[i] = d;
    }
}

} // namespace detail

inline PotentialResult newton_potential(const RadialProfile& f)
{
    check_finite(f, "newton_potential");
    const int n = f.dim();
    const auto& r = f.grid.nodes;
    const std::size_t m = r.size();

    RadialProfile fw = f;  // working copy (mass projection may adjust it)
    PotentialResult out;

    if (f.tail.kind == TailKind::power && n < 3)
        throw input_error("newton_potential: power tails are not supported for n in {1,2}");
    if (f.tail.kind == TailKind::power && !(f.tail.exponent > n))
        throw input_error("newton_potential: power tail must decay faster than r^{-n}");

    const double l1 = lp_norm(f, 1.0);
    double mass = integrate(f);
    if (n <= 2) {
        const double tol = 1e-10 * l1;
        if (std::abs(mass) > tol && l1 > 0.0)
            throw input_error(
                "newton_potential: for n = " + std::to_string(n) +
                " the H^-1 pairing is finite only for zero-mean data; profile mass " +
                std::to_string(mass) + " exceeds 1e-10*||f||_1. Balance the profile first.");
        if (mass != 0.0 && l1 > 0.0) {
            // project the residual mass out on the profile's own support indicator
            double supp = 0.0;
            for (std::size_t i = 0; i < m; ++i)
                if (fw.values[i] != 0.0) supp += f.grid.weights[i];
            if (supp > 0.0) {
                const double c_adj = (mass / f.grid.surface_factor) / supp;
                for (std::size_t i = 0; i < m; ++i)
                    if (fw.values[i] != 0.0) fw.values[i] -= c_adj;
                out.mass_correction = std::abs(c_adj);
                mass = 0.0;
            }
        }
    }

    std::vector<double> dphi;
    detail::potential_passes(n, r, fw.values, out.cumulative_mass, dphi);
    const double m_grid = out.cumulative_mass.back();

    // anchor at r_M: contribution of everything beyond the grid
    double phi_end = 0.0;
    double m_total = m_grid;
    if (n >= 3) {
        if (f.tail.kind == TailKind::power) {
            const double q = f.tail.exponent;
            const double A = detail::tail_amplitude(fw);
            const double rM = r.back();
            m_total = m_grid + A * std::pow(rM, n - q) / (q - n);
            phi_end = (m_grid - A * std::pow(rM, n - q) / (n - q)) * std::pow(rM, 2 - n) / (n - 2)
                    + A / (n - q) * std::pow(rM, 2 - q) / (q - 2);
        } else {
            phi_end = m_grid * std::pow(r.back(), 2 - n) / (n - 2);
        }
    }
    // n in {1,2}: zero mass was enforced, so M vanishes beyond the support and
    // phi is constant (= 0) past r_M.

    RadialProfile phi;
    phi.grid = f.grid;
    phi.values.assign(m, 0.0);
    phi.values[m - 1] = phi_end;
    for (std::size_t i = m - 1; i-- > 0;) phi.values[i] = phi.values[i + 1] + dphi[i];

    out.total_mass = f.grid.surface_factor * m_total;
    out.mass_free = std::abs(out.total_mass) <= 1e-9 * std::max(l1, 1e-300);
    if (out.mass_free) {
        phi.tail = Tail{};  // phi vanishes beyond the support of f
    } else {
        phi.tail = Tail{TailKind::power, static_cast<double>(n - 2)};
    }
    out.phi = std::move(phi);

    if (out.mass_free) {
        double s = 0.0;
        for (std::size_t i = 0; i < m; ++i) s += f.grid.weights[i] * out.phi.values[i];
        out.phi_integral = f.grid.surface_factor * s;
    } else {
        out.phi_integral = std::numeric_limits<double>::infinity();
    }
    return out;
}

// <f, (-Delta)^{-1} f> = omega_{n-1} integral f(r) phi(r) r^{n-1} dr >= 0.
inline double hminus1_sq(const RadialProfile& f)
{
    const PotentialResult pot = newton_potential(f);
    const std::size_t m = f.size();
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i)
        s += f.grid.weights[i] * f.values[i] * pot.phi.values[i];
    double tail = 0.0;
    if (f.tail.kind == TailKind::power && f.dim() >= 3) {
        // exact closed form for f ~ A t^{-q}, M(t) -> M_inf beyond the grid
        const int n = f.dim();
        const double q = f.tail.exponent, rM = f.grid.r_max();
        const double A = detail::tail_amplitude(f);
        const double m_inf = pot.cumulative_mass.back() + A * std::pow(rM, n - q) / (q - n);
        tail = A * m_inf / ((n - 2) * (q - 2)) * std::pow(rM, 2 - q)
             - A * A / ((q - n) * (q - 2) * (2 * q - n - 2)) * std::pow(rM, n + 2 - 2 * q);
    }
    return f.grid.surface_factor * (s + tail);
}

namespace detail {

// Potential pass on raw arrays for solver loops: assumes zero-tail data,
// projects any small residual mass for n <= 2 instead of validating it.
// Returns the radial grid mass; phi is anchored so that it vanishes at and
// beyond r_M whenever the data is mass-free.
inline double potential_raw(const RadialGrid& grid, std::vector<double>& u,
                            std::vector<double>& M, std::vector<double>& dphi,
                            std::vector<double>& phi, bool project_mass)
{
    const int n = grid.dim;
    const std::size_t m = grid.size();
    if (project_mass && n <= 2) {
        double mass = 0.0, supp = 0.0;
        for (std::size_t i = 0; i < m; ++i) mass += grid.weights[i] * u[i];
        for (std::size_t i = 0; i < m; ++i)
            if (u[i] != 0.0) supp += grid.weights[i];
        if (supp > 0.0 && mass != 0.0) {
            const double c_adj = mass / supp;
            for (std::size_t i = 0; i < m; ++i)
                if (u[i] != 0.0) u[i] -= c_adj;
        }
    }
    potential_passes(n, grid.nodes, u, M, dphi);
    double phi_end = 0.0;
    if (n >= 3) phi_end = M.back() * std::pow(grid.r_max(), 2 - n) / (n - 2);
    phi.assign(m, 0.0);
    phi[m - 1] = phi_end;
    for (std::size_t i = m - 1; i-- > 0;) phi[i] = phi[i + 1] + dphi[i];
    return M.back();
}

} // namespace detail

} // namespace nashdual
