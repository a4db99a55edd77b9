// nashdual: compute the sharp dual-Nash constants, solve the infimal
// convolution on radial profiles, emit extremal profiles and verification
// reports. Output is a pure function of the arguments and input files;
// repeated runs are byte-identical.
//
// Exit codes: 0 success, 2 usage/input error, 3 solver failure,
//             4 verification failures.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "nashdual/nashdual.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_usage = 2;
constexpr int exit_solver = 3;
constexpr int exit_verify = 4;

void write_output(const std::string& path, const std::string& payload)
{
    if (path.empty()) {
        std::fputs(payload.c_str(), stdout);
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw nashdual::input_error("cannot open output file '" + path + "'");
    out << payload;
}

struct GridOpts {
    int dim = 3;
    double p = 0.0;
    int cells = 2048;
    double r_max = 0.0;  // 0 = per-family / per-file default
    std::string scheme = "uniform";
};

void add_grid_opts(CLI::App* cmd, GridOpts& g, bool with_p = true)
{
    cmd->add_option("--dim", g.dim, "space dimension n (1..10)")->required();
    if (with_p) cmd->add_option("--p", g.p, "weight power p of w(x) = |x|^p (0 or 2)");
    cmd->add_option("--cells", g.cells, "radial grid cells")
        ->envname("NASHDUAL_GRID_CELLS");
    cmd->add_option("--r-max", g.r_max, "grid extent override (CSV inputs)");
    cmd->add_option("--scheme", g.scheme, "grid scheme for CSV inputs")
        ->check(CLI::IsMember({"uniform", "graded"}));
}

nashdual::RadialProfile load_csv_profile(const std::string& path, const GridOpts& g)
{
    std::ifstream in(path);
    if (!in) throw nashdual::input_error("cannot open CSV file '" + path + "'");
    const nashdual::CsvData data = nashdual::read_profile_csv(in);
    const double r_max = g.r_max > 0.0 ? g.r_max : data.nodes.back();
    const auto scheme = g.scheme == "graded" ? nashdual::GridScheme::graded
                                             : nashdual::GridScheme::uniform;
    const nashdual::RadialGrid grid = nashdual::make_grid(g.dim, r_max, g.cells, scheme);
    return nashdual::resample_onto(grid, data.nodes, data.values);
}

std::string optimizer_meta_json(const nashdual::OptimizerProfile& opt, int n, double p)
{
    nashdual::jsonfmt::Object o;
    o.field("n", n).field("p", p);
    if (!opt.weighted) {
        o.field("mu1", opt.mu1)
            .field("mean_g", opt.mean_g)
            .field("coeff_a", opt.coeff_a)
            .field("ball_volume", opt.ball_vol);
    } else {
        o.field("lambda0", opt.lambda0)
            .field("lambda0_printed", opt.lambda0_printed)
            .field("lambda0_rederived", opt.lambda0_rederived)
            .field("rho0", opt.rho0)
            .field("alpha", opt.alpha)
            .field("C", opt.C)
            .field_str("variant", opt.variant == nashdual::ConsistencyVariant::printed
                                      ? "printed"
                                      : "rederived")
            .field("el_residual", opt.el_residual)
            .field("el_residual_rejected", opt.el_residual_rejected);
    }
    return o.done() + "\n";
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"numerical laboratory for the dual Nash inequality and its |x|^2-weighted form"};
    app.require_subcommand(1);

    // constants ------------------------------------------------------------
    auto* c_cmd = app.add_subcommand("constants", "sharp and sub-optimal constants for one dimension");
    GridOpts c_opts;
    std::string c_out;
    add_grid_opts(c_cmd, c_opts);
    c_cmd->add_option("--out", c_out, "write JSON to this path instead of stdout");

    // infconv ---------------------------------------------------------------
    auto* i_cmd = app.add_subcommand("infconv", "solve the infimal convolution for a radial profile");
    GridOpts i_opts;
    std::string i_out, i_family, i_csv, i_dump;
    double i_sigma = 1.0, i_width = 0.25, i_c = 0.0, i_tol = 0.0;
    bool i_allow_signed = false;
    add_grid_opts(i_cmd, i_opts);
    i_cmd->add_option("--family", i_family, "named profile family "
                                            "(gaussian|triangle|smoothed_indicator|poly_bump|optimizer)");
    i_cmd->add_option("--sigma", i_sigma, "gaussian width");
    i_cmd->add_option("--width", i_width, "smoothed indicator transition width");
    i_cmd->add_option("--csv", i_csv, "radial profile CSV (header r,value)");
    i_cmd->add_option("--c", i_c, "solve A_g(c) at this fixed c instead of optimizing c");
    i_cmd->add_option("--tol", i_tol, "KKT tolerance override for the projected solver");
    i_cmd->add_flag("--allow-signed", i_allow_signed, "accept sign-changing profiles (projected solver)");
    i_cmd->add_option("--out", i_out, "write solution JSON to this path");
    i_cmd->add_option("--dump-profiles", i_dump, "write <base>_h.csv and <base>_phi.csv");

    // optimizer --------------------------------------------------------------
    auto* o_cmd = app.add_subcommand("optimizer", "emit the extremal profile for one dimension");
    GridOpts o_opts;
    std::string o_out, o_variant = "auto", o_format = "csv";
    add_grid_opts(o_cmd, o_opts);
    o_cmd->add_option("--variant", o_variant, "weighted consistency variant")
        ->check(CLI::IsMember({"printed", "rederived", "auto"}));
    o_cmd->add_option("--format", o_format, "stdout payload when --out is absent")
        ->check(CLI::IsMember({"csv", "json"}));
    o_cmd->add_option("--out", o_out, "write <out>.csv and <out>.meta.json");

    // verify ------------------------------------------------------------------
    auto* v_cmd = app.add_subcommand("verify", "run the verification battery");
    std::string v_dims = "1,3,4", v_out;
    double v_p = 0.0;
    int v_cells = 1024;
    v_cmd->add_option("--dims", v_dims, "comma-separated list of dimensions");
    v_cmd->add_option("--p", v_p, "weight power (0 or 2)");
    v_cmd->add_option("--cells", v_cells, "radial grid cells")->envname("NASHDUAL_GRID_CELLS");
    v_cmd->add_option("--out", v_out, "write report JSON to this path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? exit_ok : exit_usage;
    }

    try {
        using namespace nashdual;

        if (*c_cmd) {
            if (c_opts.dim < 1 || c_opts.dim > 10)
                throw input_error("--dim must be in 1..10");
            const ConstantsReport rep = constants_report(c_opts.dim, c_opts.p, c_opts.cells);
            write_output(c_out, to_json(rep));
            return exit_ok;
        }

        if (*i_cmd) {
            if (i_opts.dim < 1 || i_opts.dim > 10)
                throw input_error("--dim must be in 1..10");
            if (i_family.empty() == i_csv.empty())
                throw input_error("infconv needs exactly one profile source: --family or --csv");
            RadialProfile g = i_csv.empty()
                                  ? build_family({i_family, i_sigma, i_width}, i_opts.dim,
                                                 i_opts.p, i_opts.cells)
                                  : load_csv_profile(i_csv, i_opts);
            const bool has_negative = [&] {
                for (double v : g.values)
                    if (v < 0.0) return true;
                return false;
            }();
            if (has_negative && !i_allow_signed)
                throw input_error("profile takes negative values; pass --allow-signed to solve "
                                  "with the projected-gradient path");

            InfConvSolution sol;
            if (has_negative) {
                if (!(i_c > 0.0))
                    throw input_error("sign-changing profiles require a fixed --c budget "
                                      "(the optimal-c equation needs g >= 0)");
                SolveReport rep;
                sol.h = projected_solve(g, i_c, i_opts.p, i_tol, &rep);
                RadialProfile u = g;
                for (std::size_t k = 0; k < u.size(); ++k) u.values[k] -= sol.h.values[k];
                const PotentialResult pot = newton_potential(u);
                sol.c_star = i_c;
                double a = 0.0;
                for (std::size_t k = 0; k < u.size(); ++k)
                    a += u.grid.weights[k] * u.values[k] * pot.phi.values[k];
                sol.a_value = 0.5 * u.grid.surface_factor * a;
                sol.g_value = i_c + sol.a_value;
                sol.diagnostics.mass_balance_err = std::abs(integrate(u));
                sol.diagnostics.kkt_residual = rep.kkt_residual;
                sol.diagnostics.phi_integral = pot.weighted_phi_integral(i_opts.p);
                sol.diagnostics.iterations = rep.iterations;
                sol.phi = pot.phi;
            } else if (i_c > 0.0) {
                auto [a, phi] = eval_A(g, i_c, i_opts.p);
                TruncationResult tr = truncation_h(g, i_c, i_opts.p);
                sol.c_star = i_c;
                sol.a_value = a;
                sol.g_value = i_c + a;
                sol.free_radius = tr.free_radius;
                sol.h = tr.h;
                sol.phi = phi;
                RadialProfile u = tr.g;
                for (std::size_t k = 0; k < u.size(); ++k) u.values[k] -= tr.h.values[k];
                sol.diagnostics.mass_balance_err = std::abs(integrate(u));
                sol.diagnostics.phi_integral =
                    tr.active_end < 0 ? 0.0 : newton_potential(u).weighted_phi_integral(i_opts.p);
            } else {
                sol = infconv_value(g, i_opts.p);
            }
            write_output(i_out, to_json(sol, i_opts.dim, i_opts.p));
            if (!i_dump.empty()) {
                std::ofstream hf(i_dump + "_h.csv", std::ios::binary);
                std::ofstream pf(i_dump + "_phi.csv", std::ios::binary);
                if (!hf || !pf) throw input_error("cannot open dump files at '" + i_dump + "'");
                write_profile_csv(hf, sol.h);
                write_profile_csv(pf, sol.phi);
            }
            return exit_ok;
        }

        if (*o_cmd) {
            if (o_opts.dim < 1 || o_opts.dim > 10)
                throw input_error("--dim must be in 1..10");
            OptimizerProfile opt;
            if (o_opts.p == 0.0) {
                opt = build_unweighted_optimizer(o_opts.dim, o_opts.cells);
            } else if (o_opts.p == 2.0) {
                const WeightedVariant wv = o_variant == "printed"
                                               ? WeightedVariant::printed
                                               : (o_variant == "rederived" ? WeightedVariant::rederived
                                                                           : WeightedVariant::auto_select);
                opt = build_weighted_optimizer(o_opts.dim, wv, o_opts.cells);
            } else {
                throw input_error("--p must be 0 or 2");
            }
            std::ostringstream csv;
            write_profile_csv(csv, opt.g);
            const std::string meta = optimizer_meta_json(opt, o_opts.dim, o_opts.p);
            if (o_out.empty()) {
                std::fputs((o_format == "json" ? meta : csv.str()).c_str(), stdout);
            } else {
                write_output(o_out + ".csv", csv.str());
                write_output(o_out + ".meta.json", meta);
            }
            return exit_ok;
        }

        if (*v_cmd) {
            BatterySpec spec;
            spec.dims.clear();
            std::stringstream ss(v_dims);
            std::string tok;
            while (std::getline(ss, tok, ',')) {
                if (tok.empty()) continue;
                const int n = std::stoi(tok);
                if (n < 1 || n > 10) throw input_error("--dims entries must be in 1..10");
                spec.dims.push_back(n);
            }
            if (spec.dims.empty()) throw input_error("--dims must name at least one dimension");
            spec.p = v_p;
            spec.cells = v_cells;
            const VerificationReport rep = run_battery(spec);
            write_output(v_out, to_json(rep));
            return rep.failures.empty() ? exit_ok : exit_verify;
        }
    } catch (const nashdual::input_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_usage;
    } catch (const nashdual::solver_error& e) {
        std::fprintf(stderr, "solver error: %s\n", e.what());
        return exit_solver;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_usage;
    }
    return exit_usage;
}
