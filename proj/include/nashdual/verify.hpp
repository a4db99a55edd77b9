#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "nashdual/families.hpp"

namespace nashdual {

// End-to-end property batteries: quotients, minimizer-structure checks,
// convexity scans and scale covariance over the named profile families.
// Everything is deterministic; reports are byte-stable given the spec.

// G(g) / ||g||_2^{2 beta(n,p)}; its supremum is the sharp dual constant.
inline double dual_quotient(const RadialProfile& g, double p)
{
    for (double v : g.values)
        if (v < 0.0) throw input_error("dual_quotient: profile must be nonnegative");
    const double l2 = lp_norm(g, 2.0);
    if (l2 == 0.0) throw input_error("dual_quotient: profile must be nonzero");
    const Exponents ex = exponents(g.dim(), p);
    return infconv_value(g, p).g_value / std::pow(l2, 2.0 * ex.beta);
}

// ||f||_2^{2+gamma} / (||grad f||_2^2 |||x|^p f||_1^gamma), gradient by
// centered differences with one-sided closure at r = 0 (symmetry) and the
// outer grid end.
inline double nash_quotient(const RadialProfile& f, double p)
{
    check_finite(f, "nash_quotient");
    const std::size_t m = f.size();
    if (m < 3) throw input_error("nash_quotient: need at least 3 nodes");
    const auto& r = f.grid.nodes;
    const auto& v = f.values;
    RadialProfile grad2 = f;
    grad2.values[0] = 0.0;  // radial symmetry: f'(0) = 0
    for (std::size_t i = 1; i + 1 < m; ++i) {
        const double d = (v[i + 1] - v[i - 1]) / (r[i + 1] - r[i - 1]);
        grad2.values[i] = d * d;
    }
    {
        const double d = (v[m - 1] - v[m - 2]) / (r[m - 1] - r[m - 2]);
        grad2.values[m - 1] = d * d;
    }
    grad2.tail = Tail{};
    const double den_grad = integrate(grad2);
    const double den_mom = integrate(f, p);
    if (den_grad <= 0.0 || den_mom <= 0.0)
        throw input_error("nash_quotient: degenerate denominator");
    const Exponents ex = exponents(f.dim(), p);
    return std::pow(lp_norm(f, 2.0), 2.0 + ex.gamma) /
           (den_grad * std::pow(den_mom, ex.gamma));
}

// max over interior nodes of | C (-Delta) g - (g - h_model) | with
// h_model = <g> 1_B (p = 0) or alpha r^2 1_B (p = 2), means by quadrature
// over the supporting ball.
inline double el_residual(const RadialProfile& g, double C, double p)
{
    check_finite(g, "el_residual");
    if (!(C > 0.0)) throw input_error("el_residual: C must be positive");
    if (p != 0.0 && p != 2.0) throw input_error("el_residual: p must be 0 or 2");
    // supporting ball radius: first node from the outside with g != 0
    std::size_t jR = 0;
    for (std::size_t i = g.size(); i-- > 0;)
        if (g.values[i] != 0.0) { jR = i + 1; break; }
    if (jR == 0 || jR >= g.size()) jR = g.size() - 1;

    double mean_num = integrate(g);
    double model_coef = 0.0;
    if (p == 0.0) {
        RadialProfile ind = zero_profile(g.grid);
        for (std::size_t i = 0; i <= jR; ++i) ind.values[i] = 1.0;
        model_coef = mean_num / integrate(ind);
    } else {
        RadialProfile wind = zero_profile(g.grid);
        for (std::size_t i = 0; i <= jR; ++i)
            wind.values[i] = g.grid.nodes[i] * g.grid.nodes[i];
        model_coef = mean_num / integrate(wind);
    }
    const RadialProfile lap = radial_laplacian(g);
    double resid = 0.0;
    for (std::size_t i = 0; i + 3 < jR; ++i) {
        const double w = p == 0.0 ? 1.0 : g.grid.nodes[i] * g.grid.nodes[i];
        resid = std::max(resid, std::abs(-C * lap.values[i] - (g.values[i] - model_coef * w)));
    }
    return resid;
}

struct BatterySpec {
    std::vector<int> dims{1, 3, 4};
    double p = 0.0;
    std::vector<FamilySpec> families = default_battery_families();
    int cells = 1024;
    // tolerances (acceptance defaults)
    double domination_slack = 1e-3;
    double equality_tol = 5e-4;
    double mass_tol_rel = 1e-9;
    double struct_tol = 1e-8;
    double convexity_slack = 1e-8;
    double scale_cov_tol = 1e-6;
};

struct CaseResult {
    std::string family;
    int n = 0;
    double p = 0.0;
    bool is_optimizer = false;
    double dual_quotient = 0.0;
    double nash_quotient = 0.0;
    double sharp_L = 0.0;           // reference constant for this n, p
    double nash_at_optimizer = 0.0;
    // minimizer-structure residuals
    double mass_balance_rel = 0.0;  // |int (g-h)| / ||g||_1
    double h_off_max = 0.0;         // sup |h - g| beyond the active ball, / ||g||_inf
    double phi_off_max = 0.0;       // sup |phi| beyond the active ball, / ||phi||_inf
    double hw_bound_excess = 0.0;   // max(h/(c w)) - 1 over the support
    double kkt_residual = 0.0;
    // scans
    double convexity_min_d2 = 0.0;  // min second difference of A(c), / max |A|
    double m_monotone_margin = 0.0; // max consecutive rise of m(c) (<= 0 when strictly decreasing)
    double scale_cov_err = 0.0;
    // verdicts
    bool pass_dual = false, pass_nash = false, pass_structure = false;
    bool pass_convexity = false, pass_scale = false;

    bool pass() const
    {
        return pass_dual && pass_nash && pass_structure && pass_convexity && pass_scale;
    }
};

struct VerificationReport {
    std::string version = "1.0.0";
    int cells = 0;
    double p = 0.0;
    std::vector<int> dims;
    std::vector<CaseResult> cases;
    double max_dual_excess = 0.0;  // over non-optimizer cases: dual/L - 1
    double equality_gap = 0.0;     // over optimizer cases: |dual/L - 1|
    std::vector<std::string> failures;
};

namespace detail {

inline void structure_checks(const RadialProfile& g, const InfConvSolution& sol, double p,
                             CaseResult& out)
{
    // h and g may live on an extended grid; compare on h's grid
    const RadialProfile& h = sol.h;
    const std::size_t m = h.size();
    std::ptrdiff_t ka = -1;
    for (std::size_t i = 0; i < m; ++i) {
        const double w = weight_at(h.grid.nodes[i], p);
        if (w > 0.0 && h.values[i] >= sol.c_star * w * (1.0 - 1e-9))
            ka = static_cast<std::ptrdiff_t>(i);
        if (p > 0.0 && i == 0 && h.values[i] == 0.0 && g.values[0] > 0.0)
            ka = std::max<std::ptrdiff_t>(ka, 0);  // r = 0 pinned by w(0) = 0
    }
    const double ginf = lp_norm(g, std::numeric_limits<double>::infinity());
    const double phiinf = lp_norm(sol.phi, std::numeric_limits<double>::infinity());
    double h_off = 0.0, phi_off = 0.0, excess = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double gv = interp_value(g, h.grid.nodes[i]);
        const double w = weight_at(h.grid.nodes[i], p);
        if (static_cast<std::ptrdiff_t>(i) > ka + 1) {
            h_off = std::max(h_off, std::abs(h.values[i] - gv));
            phi_off = std::max(phi_off, std::abs(sol.phi.values[i]));
        }
        if (w > 0.0) excess = std::max(excess, h.values[i] / (sol.c_star * w) - 1.0);
    }
    out.mass_balance_rel = sol.diagnostics.mass_balance_err / std::max(lp_norm(g, 1.0), 1e-300);
    out.h_off_max = h_off / std::max(ginf, 1e-300);
    out.phi_off_max = phi_off / std::max(phiinf, 1e-300);
    out.hw_bound_excess = excess;
    out.kkt_residual = sol.diagnostics.kkt_residual;
}

} // namespace detail

inline VerificationReport run_battery(const BatterySpec& spec)
{
    VerificationReport rep;
    rep.cells = spec.cells;
    rep.p = spec.p;
    rep.dims = spec.dims;
    bool seen_non_opt = false;

    for (int n : spec.dims) {
        double L = 0.0;
        RadialProfile gopt;
        if (spec.p == 0.0) {
            L = sharp_constant_L(n, spec.cells);
            gopt = build_unweighted_optimizer(n, spec.cells).g;
        } else if (spec.p == 2.0) {
            const ConstantsReport wrep = weighted_constant_L(n, spec.cells);
            L = wrep.L;
            gopt = build_weighted_optimizer(n, WeightedVariant::auto_select, spec.cells).g;
        } else {
            throw input_error("run_battery: p must be 0 or 2");
        }
        const double nash_opt = nash_quotient(gopt, spec.p);

        for (const FamilySpec& fam : spec.families) {
            CaseResult cr;
            cr.family = fam.label();
            cr.n = n;
            cr.p = spec.p;
            cr.is_optimizer = fam.name == "optimizer";
            cr.sharp_L = L;
            cr.nash_at_optimizer = nash_opt;

            const RadialProfile g =
                cr.is_optimizer ? gopt : build_family(fam, n, spec.p, spec.cells);
            const InfConvSolution sol = infconv_value(g, spec.p);
            const Exponents ex = exponents(n, spec.p);
            cr.dual_quotient = sol.g_value / std::pow(lp_norm(g, 2.0), 2.0 * ex.beta);
            cr.nash_quotient = nash_quotient(g, spec.p);

            detail::structure_checks(g, sol, spec.p, cr);

            const CScan scan = optimal_c(g, spec.p, 40);
            double amax = 0.0;
            for (double a : scan.a) amax = std::max(amax, std::abs(a));
            double mind2 = 0.0, mrise = -std::numeric_limits<double>::infinity();
            for (std::size_t j = 1; j + 1 < scan.a.size(); ++j)
                mind2 = std::min(mind2, scan.a[j - 1] - 2.0 * scan.a[j] + scan.a[j + 1]);
            for (std::size_t j = 1; j < scan.m.size(); ++j)
                mrise = std::max(mrise, scan.m[j] - scan.m[j - 1]);
            cr.convexity_min_d2 = mind2 / std::max(amax, 1e-300);
            cr.m_monotone_margin = mrise;

            double scale_err = 0.0;
            for (double lam : {0.5, 2.0}) {
                const RadialProfile gl = rescale(g, lam, n + 2.0 + spec.p);
                const double expected = std::pow(lam, n + 2.0 + 2.0 * spec.p) * sol.g_value;
                const double got = infconv_value(gl, spec.p).g_value;
                scale_err = std::max(scale_err, std::abs(got / expected - 1.0));
            }
            cr.scale_cov_err = scale_err;

            cr.pass_dual = cr.is_optimizer
                               ? std::abs(cr.dual_quotient / L - 1.0) <= spec.equality_tol
                               : cr.dual_quotient <= L * (1.0 + spec.domination_slack);
            cr.pass_nash = cr.nash_quotient <= nash_opt * (1.0 + spec.domination_slack);
            cr.pass_structure = cr.mass_balance_rel <= spec.mass_tol_rel &&
                                cr.h_off_max <= spec.struct_tol &&
                                cr.phi_off_max <= spec.struct_tol &&
                                cr.hw_bound_excess <= 1e-9;
            cr.pass_convexity =
                cr.convexity_min_d2 >= -spec.convexity_slack && cr.m_monotone_margin < 0.0;
            cr.pass_scale = cr.scale_cov_err <= spec.scale_cov_tol;

            if (cr.is_optimizer)
                rep.equality_gap = std::max(rep.equality_gap, std::abs(cr.dual_quotient / L - 1.0));
            else if (!seen_non_opt)
                rep.max_dual_excess = cr.dual_quotient / L - 1.0, seen_non_opt = true;
            else
                rep.max_dual_excess = std::max(rep.max_dual_excess, cr.dual_quotient / L - 1.0);
            if (!cr.pass()) {
                std::string why;
                if (!cr.pass_dual) why += " dual";
                if (!cr.pass_nash) why += " nash";
                if (!cr.pass_structure) why += " structure";
                if (!cr.pass_convexity) why += " convexity";
                if (!cr.pass_scale) why += " scale";
                rep.failures.push_back(cr.family + " n=" + std::to_string(n) + ":" + why);
            }
            rep.cases.push_back(std::move(cr));
        }
    }
    return rep;
}

} // namespace nashdual
