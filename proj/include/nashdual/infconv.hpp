#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "nashdual/potential.hpp"

namespace nashdual {

// Evaluation of the infimal convolution
//   G(g) = inf_h { 1/2 <g-h, (-Delta)^{-1}(g-h)> + ||h/w||_inf },  w(x) = |x|^p,
// split as G(g) = inf_{c>0} { c + A_g(c) } with
//   A_g(c) = inf { 1/2 ||g-h||_{H^-1}^2 : |h| <= c w }.
// Two independent routes compute A_g(c): the explicit truncation formula for
// radial non-increasing g >= 0, and a projected-gradient solver for general
// profiles. The optimal c solves m(c) := integral phi_(c) w dx = 1, which is
// strictly decreasing in c.

struct InfConvDiagnostics {
    double mass_balance_err = 0.0;  // | integral (g - h) dx |
    double kkt_residual = 0.0;      // sup-norm KKT defect in phi units
    double phi_integral = 0.0;      // integral phi w dx at the solution
    int iterations = 0;
};

struct InfConvSolution {
    double c_star = 0.0;
    RadialProfile h;
    RadialProfile phi;
    double a_value = 0.0;     // A_g(c_star)
    double g_value = 0.0;     // c_star + A_g(c_star)
    double free_radius = 0.0;
    InfConvDiagnostics diagnostics;
};

struct TruncationResult {
    RadialProfile h;          // on the working grid (extended if needed)
    RadialProfile g;          // input profile on the same grid
    double free_radius = 0.0;
    double mass_residual = 0.0;
    std::ptrdiff_t active_end = -1;  // nodes [0, active_end] sit on the bound
};

// c-scan record: A_g(c) samples on a uniform c grid around the optimum plus
// one-sided derivative estimates and m(c) = integral phi_(c) w dx.
struct CScan {
    std::vector<double> c;
    std::vector<double> a;
    std::vector<double> m;
    std::vector<double> dleft;   // backward difference of a
    std::vector<double> dright;  // forward difference of a
    double c0 = 0.0;             // root of m(c) = 1
    int bisection_steps = 0;
};

namespace detail {

inline double weight_at(double r, double p) { return p == 0.0 ? 1.0 : std::pow(r, p); }

inline void require_truncation_input(const RadialProfile& g, double p, double c)
{
    check_finite(g, "truncation_h");
    if (!(c > 0.0)) throw input_error("truncation_h: c must be positive");
    if (p < 0.0) throw input_error("truncation_h: weight power must be >= 0");
    const double scale = lp_norm(g, std::numeric_limits<double>::infinity());
    const double slack = 1e-12 * std::max(scale, 1e-300);
    double prev = g.values.front();
    for (double v : g.values) {
        if (v < -slack)
            throw input_error("truncation_h: profile changes sign; use projected_solve");
        if (v > prev + slack)
            throw input_error("truncation_h: profile is not non-increasing; use projected_solve");
        prev = std::max(prev, v);
    }
    if (g.tail.kind != TailKind::zero)
        throw input_error("truncation_h: compactly supported profiles only");
}

// Continuum mass-balance radius: smallest R with
// D(R) = integral_0^R (g - c w)(s) s^{n-1} ds = 0, located from the exact
// cellwise cumulative of the piecewise-linear data.
inline double mass_balance_radius(const RadialGrid& grid, const std::vector<double>& diff)
{
    std::vector<double> M, dphi;
    potential_passes(grid.dim, grid.nodes, diff, M, dphi);
    const double tol = 1e-14 * (1.0 + std::abs(M[1]));
    for (std::size_t j = 1; j < M.size(); ++j) {
        if (M[j] <= tol && M[j - 1] > tol) {
            // refine within cell [r_{j-1}, r_j] on the PL cumulative
            double lo = grid.nodes[j - 1], hi = grid.nodes[j];
            const double a = lo, b = hi;
            const double c1 = (diff[j] - diff[j - 1]) / (b - a);
            const double c0 = diff[j - 1] - c1 * a;
            const int n = grid.dim;
            const auto cum = [&](double t) {
                return M[j - 1] + c0 * (std::pow(t, n) - std::pow(a, n)) / n
                       + c1 * (std::pow(t, n + 1) - std::pow(a, n + 1)) / (n + 1);
            };
            for (int it = 0; it < 100; ++it) {
                const double mid = 0.5 * (lo + hi);
                (cum(mid) > 0.0 ? lo : hi) = mid;
            }
            return 0.5 * (lo + hi);
        }
    }
    return grid.nodes.back();
}

} // namespace detail

// Explicit minimizer of A_g(c) for radial non-increasing g >= 0:
// h = c w on a centered ball, h = g outside, with the ball radius fixed by
// integral (g - h) dx = 0. On the grid the active prefix carries the bound
// and the single straddling node carries the exact mass-balancing value, so
// the discrete mass balance is exact and phi vanishes identically beyond the
// free radius. The grid is extended automatically when the balancing radius
// lies past it.
inline TruncationResult truncation_h(const RadialProfile& g_in, double c, double p)
{
    detail::require_truncation_input(g_in, p, c);
    RadialProfile g = g_in;
    const double sup_ratio = [&] {
        double s = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) {
            const double w = detail::weight_at(g.grid.nodes[i], p);
            if (w > 0.0) s = std::max(s, g.values[i] / w);
            else if (g.values[i] > 0.0) s = std::numeric_limits<double>::infinity();
        }
        return s;
    }();

    TruncationResult out;
    if (c >= sup_ratio) {  // constraint inactive
        out.h = g;
        out.g = std::move(g);
        out.free_radius = 0.0;
        out.active_end = -1;
        return out;
    }

    for (int expansion = 0;; ++expansion) {
        const auto& wq = g.grid.weights;
        const std::size_t m = g.size();
        // prefix(k) = discrete integral of (g - c w) over nodes 0..k
        double prefix = 0.0;
        std::ptrdiff_t kfrac = -1;
        double prefix_before = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            const double d = g.values[i] - c * detail::weight_at(g.grid.nodes[i], p);
            const double next = prefix + wq[i] * d;
            if (next < 0.0 && prefix >= 0.0 && i > 0) {
                kfrac = static_cast<std::ptrdiff_t>(i);
                prefix_before = prefix;
                break;
            }
            prefix = next;
        }
        if (kfrac < 0) {
            // balance radius past the grid: g is compact there, so the deficit
            // grows like c r^{n+p}; extend directly to the analytic estimate.
            const int n = g.dim();
            const double rM = g.grid.r_max();
            const double need = std::pow(std::pow(rM, n + p) + (n + p) * prefix / c, 1.0 / (n + p));
            if (expansion >= 16 || need > 512.0 * g_in.grid.r_max())
                throw solver_error("truncation_h: the mass-balance radius (~" +
                                   std::to_string(need) + ") is far past the grid; rescale the "
                                   "profile up or enlarge r_max");
            g = extend_profile(g, 1.1 * std::max(need, 1.5 * rM));
            continue;
        }

        RadialProfile h = g;
        for (std::ptrdiff_t i = 0; i < kfrac; ++i)
            h.values[i] = c * detail::weight_at(g.grid.nodes[i], p);
        h.values[kfrac] = g.values[kfrac] + prefix_before / wq[kfrac];
        h.decreasing = is_nonincreasing(h.values);

        std::vector<double> diff(m);
        for (std::size_t i = 0; i < m; ++i)
            diff[i] = g.values[i] - c * detail::weight_at(g.grid.nodes[i], p);
        out.free_radius = detail::mass_balance_radius(g.grid, diff);
        out.active_end = kfrac;  // fractional node included in the active ball
        out.h = std::move(h);
        {
            RadialProfile u = g;
            for (std::size_t i = 0; i < m; ++i) u.values[i] -= out.h.values[i];
            out.mass_residual = std::abs(integrate(u));
        }
        out.g = std::move(g);
        return out;
    }
}

// A_g(c) with the potential of g - h; a = 0 when the constraint is inactive.
inline std::pair<double, RadialProfile> eval_A(const RadialProfile& g, double c, double p)
{
    TruncationResult tr = truncation_h(g, c, p);
    RadialProfile u = tr.g;
    for (std::size_t i = 0; i < u.size(); ++i) u.values[i] -= tr.h.values[i];
    u.decreasing = false;
    if (tr.active_end < 0) return {0.0, zero_profile(u.grid)};
    PotentialResult pot = newton_potential(u);
    double a = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i)
        a += u.grid.weights[i] * u.values[i] * pot.phi.values[i];
    a *= 0.5 * u.grid.surface_factor;
    return {a, std::move(pot.phi)};
}

// ---------------------------------------------------------------------------
// projected gradient solver
// ---------------------------------------------------------------------------

struct SolveReport {
    int iterations = 0;
    double kkt_residual = 0.0;
    double objective = 0.0;
    bool restored = false;  // accepted the active-set restoration candidate
};

namespace detail {

struct PgWork {
    std::vector<double> u, M, dphi, phi;
};

inline double pg_objective(const RadialGrid& grid, const std::vector<double>& g,
                           const std::vector<double>& h, PgWork& w)
{
    const std::size_t m = g.size();
    w.u.resize(m);
    for (std::size_t i = 0; i < m; ++i) w.u[i] = g[i] - h[i];
    potential_raw(grid, w.u, w.M, w.dphi, w.phi, true);
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) s += grid.weights[i] * w.u[i] * w.phi[i];
    return 0.5 * grid.surface_factor * s;
}

// Projection onto the box for n >= 3; for n in {1,2} the exact metric
// projection onto box intersect { integral h = integral g }, which has the
// closed form clip(h + kappa) with the scalar kappa fixed by the mass
// equation (monotone in kappa, solved by bisection).
inline void pg_project(const RadialGrid& grid, std::vector<double>& h,
                       const std::vector<double>& ub, double target_mass)
{
    const std::size_t m = h.size();
    if (grid.dim > 2) {
        for (std::size_t i = 0; i < m; ++i)
            h[i] = std::clamp(h[i], -ub[i], ub[i]);
        return;
    }
    const auto mass_at = [&](double kappa) {
        double s = 0.0;
        for (std::size_t i = 0; i < m; ++i)
            s += grid.weights[i] * std::clamp(h[i] + kappa, -ub[i], ub[i]);
        return s;
    };
    double span = 1.0;
    for (std::size_t i = 0; i < m; ++i)
        span = std::max(span, std::abs(h[i]) + ub[i]);
    double lo = -2.0 * span, hi = 2.0 * span;
    if (mass_at(lo) > target_mass || mass_at(hi) < target_mass)
        throw solver_error("projected_solve: box-and-mass constraint set is empty on this "
                           "grid; increase r_max or c");
    for (int it = 0; it < 100 && hi - lo > 1e-16 * span; ++it) {
        const double mid = 0.5 * (lo + hi);
        (mass_at(mid) < target_mass ? lo : hi) = mid;
    }
    const double kappa = 0.5 * (lo + hi);
    for (std::size_t i = 0; i < m; ++i)
        h[i] = std::clamp(h[i] + kappa, -ub[i], ub[i]);
}

// KKT residual. For monotone nonnegative data the active set is the centered
// ball up to the outermost bound-touching node (plus one straddling node);
// for general data the pointwise box convention is used.
inline double pg_kkt(const std::vector<double>& h, const std::vector<double>& ub,
                     const std::vector<double>& phi, bool ball_convention)
{
    const std::size_t m = h.size();
    double res = 0.0;
    if (ball_convention) {
        std::ptrdiff_t ka = -1;
        for (std::size_t i = 0; i < m; ++i)
            if (h[i] >= ub[i] * (1.0 - 1e-10) - 1e-300) ka = static_cast<std::ptrdiff_t>(i);
        for (std::ptrdiff_t i = 0; i <= ka; ++i) res = std::max(res, -phi[i]);
        for (std::size_t i = static_cast<std::size_t>(ka + 2); i < m; ++i)
            res = std::max(res, std::abs(phi[i]));
    } else {
        for (std::size_t i = 0; i < m; ++i) {
            const double eps = 1e-12 * (1.0 + ub[i]);
            if (h[i] >= ub[i] - eps) res = std::max(res, -phi[i]);
            else if (h[i] <= -ub[i] + eps) res = std::max(res, phi[i]);
            else res = std::max(res, std::abs(phi[i]));
        }
    }
    return res;
}

} // namespace detail

// Minimizes 1/2 <g-h, (-Delta)^{-1}(g-h)> over |h(x)| <= c |x|^p by projected
// gradient: gradient = -phi, projection = pointwise clipping (alternated with
// the mass-balance affine projection for n in {1,2}). Step 1/L with L from 20
// power-iteration steps on the potential quadratic form, then Armijo
// backtracking. For radial non-increasing g >= 0 the discovered active set is
// periodically turned into the bound/mass-balance candidate, which is accepted
// only when it does not increase the objective and its KKT defect is below
// tolerance; the solver otherwise keeps iterating. Terminates when the KKT
// residual (|phi| off the active set, complementarity defect on it) drops
// below tol.
inline RadialProfile projected_solve(const RadialProfile& g, double c, double p,
                                     double tol = 0.0, SolveReport* report = nullptr,
                                     int max_iters = 100000)
{
    check_finite(g, "projected_solve");
    if (!(c > 0.0)) throw input_error("projected_solve: c must be positive");
    const RadialGrid& grid = g.grid;
    const std::size_t m = g.size();

    std::vector<double> ub(m);
    for (std::size_t i = 0; i < m; ++i) ub[i] = c * detail::weight_at(grid.nodes[i], p);

    double gmass = 0.0;
    for (std::size_t i = 0; i < m; ++i) gmass += grid.weights[i] * g.values[i];

    const bool monotone = [&] {
        if (g.values.front() < 0.0) return false;
        const double slack = 1e-12 * std::max(lp_norm(g, std::numeric_limits<double>::infinity()), 1e-300);
        double prev = g.values.front();
        for (double v : g.values) {
            if (v < -slack || v > prev + slack) return false;
            prev = std::max(prev, v);
        }
        return true;
    }();

    std::vector<double> h(m);
    for (std::size_t i = 0; i < m; ++i) h[i] = std::clamp(g.values[i], -ub[i], ub[i]);
    detail::pg_project(grid, h, ub, gmass);

    detail::PgWork work;

    // Lipschitz constant of the gradient: largest eigenvalue of the potential
    // quadratic form, estimated by power iteration in the weighted metric.
    double lmax = 0.0;
    {
        std::vector<double> v(m), M, dphi, pv;
        for (std::size_t i = 0; i < m; ++i)
            v[i] = 1.0 + std::cos(7.0 * grid.nodes[i] / grid.r_max());
        for (int it = 0; it < 20; ++it) {
            std::vector<double> vin = v;
            detail::potential_raw(grid, vin, M, dphi, pv, true);
            double num = 0.0, den = 0.0;
            for (std::size_t i = 0; i < m; ++i) {
                num += grid.weights[i] * vin[i] * pv[i];
                den += grid.weights[i] * vin[i] * vin[i];
            }
            lmax = std::max(lmax, num / den);
            double norm = 0.0;
            for (std::size_t i = 0; i < m; ++i) norm += grid.weights[i] * pv[i] * pv[i];
            norm = std::sqrt(std::max(norm, 1e-300));
            for (std::size_t i = 0; i < m; ++i) v[i] = pv[i] / norm;
        }
        if (!(lmax > 0.0)) lmax = 1.0;
    }

    double F = detail::pg_objective(grid, g.values, h, work);
    double phi_scale = 0.0;
    for (double x : work.phi) phi_scale = std::max(phi_scale, std::abs(x));
    const double tol_eff = tol > 0.0 ? tol : 1e-9 * std::max(phi_scale, 1e-300);

    double step = 1.0 / lmax;
    const double step_cap = 8.0 / lmax;
    std::vector<double> trial(m), grad_h(m);
    SolveReport rep;

    // Active-set restoration: the exact bound/mass-balance representative of a
    // candidate free boundary. The candidate is only a proposal; acceptance
    // requires its own KKT certificate (complementarity phi >= 0 on every
    // active node, |phi| ~ 0 beyond) and an objective no worse than the
    // current iterate, so a wrong free-boundary theory cannot slip through.
    const auto try_restoration = [&](std::ptrdiff_t kf) -> bool {
        if (kf < 1 || kf >= static_cast<std::ptrdiff_t>(m)) return false;
        double prefix = 0.0;
        for (std::ptrdiff_t i = 0; i < kf; ++i)
            prefix += grid.weights[i] * (g.values[i] - ub[i]);
        const double frac = g.values[kf] + prefix / grid.weights[kf];
        if (!(prefix >= 0.0) || !(frac <= ub[kf]) || !(frac >= -ub[kf])) return false;
        for (std::size_t i = 0; i < m; ++i)
            trial[i] = static_cast<std::ptrdiff_t>(i) < kf
                           ? ub[i]
                           : (static_cast<std::ptrdiff_t>(i) == kf ? frac : g.values[i]);
        const double Fc = detail::pg_objective(grid, g.values, trial, work);
        const double res = detail::pg_kkt(trial, ub, work.phi, true);
        if (Fc <= F * (1.0 + 1e-9) + 1e-300 && res <= tol_eff) {
            h = trial;
            rep.kkt_residual = res;
            rep.objective = Fc;
            rep.restored = true;
            return true;
        }
        return false;
    };
    // smallest kf whose bound-prefix mass flips sign (the balance index)
    const auto balance_index = [&]() -> std::ptrdiff_t {
        double prefix = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            const double next = prefix + grid.weights[i] * (g.values[i] - ub[i]);
            if (next < 0.0 && prefix >= 0.0 && i > 0) return static_cast<std::ptrdiff_t>(i);
            prefix = next;
        }
        return -1;
    };

    for (int iter = 1; iter <= max_iters; ++iter) {
        rep.iterations = iter;
        rep.kkt_residual = detail::pg_kkt(h, ub, work.phi, monotone);
        rep.objective = F;
        if (rep.kkt_residual <= tol_eff) break;

        if (monotone && iter >= 4 && iter % 5 == 0) {
            const std::ptrdiff_t kb = balance_index();
            bool done = false;
            for (std::ptrdiff_t kf : {kb, kb + 1, kb - 1})
                if (try_restoration(kf)) { done = true; break; }
            if (done) break;
            // candidates rejected: restore the gradient at the current h
            F = detail::pg_objective(grid, g.values, h, work);
        }

        double hnorm2 = 1e-300;
        for (std::size_t i = 0; i < m; ++i) hnorm2 += grid.weights[i] * h[i] * h[i];
        grad_h = work.phi;  // phi at the current h; work.phi is a scratch below
        bool accepted = false;
        for (int bt = 0; bt < 48; ++bt) {
            for (std::size_t i = 0; i < m; ++i) trial[i] = h[i] + step * grad_h[i];
            detail::pg_project(grid, trial, ub, gmass);
            double dist2 = 0.0;
            for (std::size_t i = 0; i < m; ++i) {
                const double d = trial[i] - h[i];
                dist2 += grid.weights[i] * d * d;
            }
            if (dist2 <= 1e-30 * hnorm2) {  // floating-point stationary point
                F = detail::pg_objective(grid, g.values, h, work);
                accepted = true;
                break;
            }
            const double Ft = detail::pg_objective(grid, g.values, trial, work);
            if (Ft <= F - 1e-4 / step * dist2 * grid.surface_factor) {
                h.swap(trial);
                F = Ft;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        // on both accept paths work.phi now matches the current h: the Armijo
        // branch accepted the profile of its own last evaluation, the
        // stationary branch re-evaluated in place
        if (!accepted)
            throw solver_error("projected_solve: line search failed (residual " +
                               std::to_string(rep.kkt_residual) + ")");
        step = std::min(step * 1.3, step_cap);
    }

    if (rep.kkt_residual > tol_eff)
        throw solver_error("projected_solve: iteration cap exceeded, KKT residual " +
                           std::to_string(rep.kkt_residual) + " > " + std::to_string(tol_eff));

    if (report) *report = rep;
    RadialProfile out;
    out.grid = grid;
    out.values = std::move(h);
    out.tail = Tail{};
    out.decreasing = is_nonincreasing(out.values);
    return out;
}

// ---------------------------------------------------------------------------
// optimal c and the assembled functional value
// ---------------------------------------------------------------------------

namespace detail {

struct CEval {
    double a = 0.0;
    double mval = 0.0;
    double free_radius = 0.0;
    RadialProfile h, phi, g_ext;
    std::ptrdiff_t active_end = -1;
    int iterations = 0;
};

inline CEval evaluate_at_c(const RadialProfile& g, double c, double p, bool monotone)
{
    CEval out;
    if (monotone) {
        TruncationResult tr = truncation_h(g, c, p);
        RadialProfile u = tr.g;
        for (std::size_t i = 0; i < u.size(); ++i) u.values[i] -= tr.h.values[i];
        if (tr.active_end < 0) {
            out.a = 0.0;
            out.mval = 0.0;
            out.phi = zero_profile(tr.g.grid);
        } else {
            PotentialResult pot = newton_potential(u);
            double a = 0.0;
            for (std::size_t i = 0; i < u.size(); ++i)
                a += u.grid.weights[i] * u.values[i] * pot.phi.values[i];
            out.a = 0.5 * u.grid.surface_factor * a;
            out.mval = pot.weighted_phi_integral(p);
            out.phi = std::move(pot.phi);
        }
        out.free_radius = tr.free_radius;
        out.active_end = tr.active_end;
        out.h = std::move(tr.h);
        out.g_ext = std::move(tr.g);
        return out;
    }
    SolveReport rep;
    RadialProfile h = projected_solve(g, c, p, 0.0, &rep);
    RadialProfile u = g;
    for (std::size_t i = 0; i < u.size(); ++i) u.values[i] -= h.values[i];
    PotentialResult pot = newton_potential(u);
    double a = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i)
        a += u.grid.weights[i] * u.values[i] * pot.phi.values[i];
    out.a = 0.5 * u.grid.surface_factor * a;
    out.mval = pot.weighted_phi_integral(p);
    out.free_radius = 0.0;
    for (std::size_t i = 0; i < h.size(); ++i) {
        const double w = weight_at(h.grid.nodes[i], p);
        if (h.values[i] >= c * w * (1.0 - 1e-8) && c * w > 0.0) out.free_radius = h.grid.nodes[i];
    }
    out.phi = std::move(pot.phi);
    out.h = std::move(h);
    out.g_ext = g;
    out.iterations = rep.iterations;
    return out;
}

} // namespace detail

// Unique c0 with m(c0) = integral phi_(c0) |x|^p dx = 1, found by bracketed
// bisection on log c (m is strictly decreasing). Also records a 40-point
// uniform c-scan of A_g(c) and m(c) around the optimum.
inline CScan optimal_c(const RadialProfile& g, double p, int scan_points = 40)
{
    check_finite(g, "optimal_c");
    for (double v : g.values)
        if (v < 0.0) throw input_error("optimal_c: profile must be nonnegative");
    if (lp_norm(g, 1.0) == 0.0) throw input_error("optimal_c: profile must not vanish identically");
    const bool monotone = is_nonincreasing(g.values);

    // natural scale for c: ratio of the profile mass to the weighted ball mass
    double supp_r = g.grid.nodes.back();
    for (std::size_t i = g.size(); i-- > 0;)
        if (g.values[i] != 0.0) { supp_r = g.grid.nodes[i]; break; }
    const int n = g.dim();
    const double wball = g.grid.surface_factor * std::pow(supp_r, n + p) / (n + p);
    double c_mid = integrate(g) / wball;

    const auto m_of = [&](double c) { return detail::evaluate_at_c(g, c, p, monotone).mval; };

    double lo = c_mid, hi = c_mid;
    int guard = 0;
    const auto too_small = [] {
        return solver_error("optimal_c: m(c) < 1 for every reachable c; the profile is too "
                            "small for the normalization integral. Rescale it up first "
                            "(m scales like lambda^{n+2+2p} under the natural rescaling).");
    };
    double mlo;
    try {
        mlo = m_of(lo);
        while (mlo < 1.0) {
            lo *= 0.5;
            mlo = m_of(lo);
            if (++guard > 120) throw too_small();
        }
    } catch (const solver_error&) {
        // grid expansion capped out while chasing r(c): same diagnosis
        throw too_small();
    }
    guard = 0;
    double mhi = m_of(hi);
    while (mhi >= 1.0) {
        hi *= 2.0;
        mhi = m_of(hi);
        if (++guard > 120)
            throw solver_error("optimal_c: failed to bracket m(c) = 1 from above");
    }

    CScan scan;
    double llo = std::log(lo), lhi = std::log(hi);
    for (int it = 0; it < 100 && lhi - llo > 1e-14; ++it) {
        const double mid = 0.5 * (llo + lhi);
        (m_of(std::exp(mid)) >= 1.0 ? llo : lhi) = mid;
        scan.bisection_steps = it + 1;
    }
    scan.c0 = std::exp(0.5 * (llo + lhi));

    if (scan_points > 1) {
        // uniform spacing so that second differences certify convexity directly
        double cmax = 4.0 * scan.c0;
        if (p == 0.0) cmax = std::min(cmax, 0.98 * lp_norm(g, std::numeric_limits<double>::infinity()));
        const double cmin = std::min(scan.c0 / 4.0, 0.5 * cmax);
        for (int j = 0; j < scan_points; ++j) {
            const double cj = cmin + (cmax - cmin) * j / (scan_points - 1);
            const auto ev = detail::evaluate_at_c(g, cj, p, monotone);
            scan.c.push_back(cj);
            scan.a.push_back(ev.a);
            scan.m.push_back(ev.mval);
        }
        scan.dleft.assign(scan_points, 0.0);
        scan.dright.assign(scan_points, 0.0);
        for (int j = 0; j < scan_points; ++j) {
            if (j > 0)
                scan.dleft[j] = (scan.a[j] - scan.a[j - 1]) / (scan.c[j] - scan.c[j - 1]);
            if (j + 1 < scan_points)
                scan.dright[j] = (scan.a[j + 1] - scan.a[j]) / (scan.c[j + 1] - scan.c[j]);
        }
    }
    return scan;
}

// G(g) = c0 + A_g(c0) with the full solution record.
inline InfConvSolution infconv_value(const RadialProfile& g, double p)
{
    check_finite(g, "infconv_value");
    InfConvSolution sol;
    if (lp_norm(g, 1.0) == 0.0) {  // G(0) = 0
        sol.h = g;
        sol.phi = zero_profile(g.grid);
        return sol;
    }
    const bool monotone = is_nonincreasing(g.values);
    CScan scan = optimal_c(g, p, 0);
    detail::CEval ev = detail::evaluate_at_c(g, scan.c0, p, monotone);

    sol.c_star = scan.c0;
    sol.a_value = ev.a;
    sol.g_value = scan.c0 + ev.a;
    sol.free_radius = ev.free_radius;

    RadialProfile u = ev.g_ext;
    for (std::size_t i = 0; i < u.size(); ++i) u.values[i] -= ev.h.values[i];
    sol.diagnostics.mass_balance_err = std::abs(integrate(u));
    sol.diagnostics.phi_integral = ev.mval;
    sol.diagnostics.iterations = monotone ? scan.bisection_steps : ev.iterations;

    // KKT defect: |phi| beyond the active ball, complementarity inside
    double res = 0.0;
    for (std::size_t i = 0; i < ev.phi.size(); ++i) {
        if (static_cast<std::ptrdiff_t>(i) <= ev.active_end)
            res = std::max(res, -ev.phi.values[i]);
        else if (static_cast<std::ptrdiff_t>(i) > ev.active_end + 1)
            res = std::max(res, std::abs(ev.phi.values[i]));
    }
    sol.diagnostics.kkt_residual = res;

    sol.h = std::move(ev.h);
    sol.phi = std::move(ev.phi);
    return sol;
}

} // namespace nashdual
