#pragma once

#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "nashdual/infconv.hpp"
#include "nashdual/sharp.hpp"
#include "nashdual/verify.hpp"

namespace nashdual {

// Deterministic JSON emission: fixed field order, numbers at 12 significant
// digits, C locale. Reports are byte-stable across runs by construction.

namespace jsonfmt {

inline std::string num(double x)
{
    if (!std::isfinite(x)) return "null";  // JSON has no inf/nan
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

inline std::string num(int x) { return std::to_string(x); }

inline std::string str(const std::string& s)
{
    std::string out = "\"";
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default: out += c;
        }
    }
    out += '"';
    return out;
}

// tiny ordered-object builder
class Object {
public:
    Object& field(const std::string& key, const std::string& raw)
    {
        items_.push_back(str(key) + ": " + raw);
        return *this;
    }
    Object& field(const std::string& key, double v) { return field(key, num(v)); }
    Object& field(const std::string& key, int v) { return field(key, num(v)); }
    Object& field_str(const std::string& key, const std::string& v) { return field(key, str(v)); }
    Object& field_bool(const std::string& key, bool v)
    {
        return field(key, std::string(v ? "true" : "false"));
    }

    std::string done(int indent = 0) const
    {
        const std::string pad(indent, ' ');
        const std::string pad2(indent + 2, ' ');
        std::string out = "{\n";
        for (std::size_t i = 0; i < items_.size(); ++i)
            out += pad2 + items_[i] + (i + 1 < items_.size() ? ",\n" : "\n");
        out += pad + "}";
        return out;
    }

private:
    std::vector<std::string> items_;
};

inline std::string array(const std::vector<std::string>& raws)
{
    std::string out = "[";
    for (std::size_t i = 0; i < raws.size(); ++i)
        out += raws[i] + (i + 1 < raws.size() ? ", " : "");
    out += "]";
    return out;
}

} // namespace jsonfmt

// InfConvSolution record with exactly the documented fields.
inline std::string to_json(const InfConvSolution& sol, int n, double p)
{
    jsonfmt::Object o;
    o.field("n", n)
        .field("p", p)
        .field("c_star", sol.c_star)
        .field("g_value", sol.g_value)
        .field("a_value", sol.a_value)
        .field("free_radius", sol.free_radius)
        .field("mass_balance_err", sol.diagnostics.mass_balance_err)
        .field("kkt_residual", sol.diagnostics.kkt_residual)
        .field("phi_integral", sol.diagnostics.phi_integral);
    return o.done() + "\n";
}

inline std::string to_json(const ConstantsReport& rep)
{
    jsonfmt::Object o;
    o.field("n", rep.n).field("p", rep.p).field("L", rep.L);
    if (rep.p == 0.0) {
        if (rep.K != 0.0) o.field("K", rep.K);
        o.field("mu1", rep.mu1);
        if (rep.hls_constant != 0.0) o.field("hls_constant", rep.hls_constant);
    } else {
        o.field("lambda0", rep.lambda0)
            .field("lambda0_printed", rep.lambda0_printed)
            .field("lambda0_rederived", rep.lambda0_rederived)
            .field("rho0", rep.rho0)
            .field_str("variant", rep.variant)
            .field("el_residual", rep.el_residual)
            .field("el_residual_rejected", rep.el_residual_rejected);
    }
    o.field("gamma", rep.gamma).field("beta", rep.beta);
    std::vector<std::string> notes;
    for (const auto& s : rep.discrepancy_notes) notes.push_back(jsonfmt::str(s));
    o.field("discrepancy_notes", jsonfmt::array(notes));
    return o.done() + "\n";
}

inline std::string to_json(const VerificationReport& rep)
{
    std::vector<std::string> dims;
    for (int n : rep.dims) dims.push_back(jsonfmt::num(n));
    jsonfmt::Object meta;
    meta.field_str("version", rep.version).field("grid", rep.cells).field("p", rep.p)
        .field("dims", jsonfmt::array(dims));

    std::vector<std::string> cases;
    for (const CaseResult& c : rep.cases) {
        jsonfmt::Object o;
        o.field_str("family", c.family)
            .field("n", c.n)
            .field("p", c.p)
            .field_bool("is_optimizer", c.is_optimizer)
            .field("dual_quotient", c.dual_quotient)
            .field("nash_quotient", c.nash_quotient)
            .field("sharp_L", c.sharp_L)
            .field("mass_balance_rel", c.mass_balance_rel)
            .field("h_off_max", c.h_off_max)
            .field("phi_off_max", c.phi_off_max)
            .field("hw_bound_excess", c.hw_bound_excess)
            .field("kkt_residual", c.kkt_residual)
            .field("convexity_min_d2", c.convexity_min_d2)
            .field("m_monotone_margin", c.m_monotone_margin)
            .field("scale_cov_err", c.scale_cov_err)
            .field_bool("pass_dual", c.pass_dual)
            .field_bool("pass_nash", c.pass_nash)
            .field_bool("pass_structure", c.pass_structure)
            .field_bool("pass_convexity", c.pass_convexity)
            .field_bool("pass_scale", c.pass_scale)
            .field_bool("pass", c.pass());
        cases.push_back(o.done(2));
    }
    std::vector<std::string> fails;
    for (const auto& s : rep.failures) fails.push_back(jsonfmt::str(s));
    jsonfmt::Object summary;
    summary.field("max_dual_excess", rep.max_dual_excess)
        .field("equality_gap", rep.equality_gap)
        .field("failures", jsonfmt::array(fails));

    jsonfmt::Object top;
    top.field("meta", meta.done(2));
    std::string arr = "[\n";
    for (std::size_t i = 0; i < cases.size(); ++i)
        arr += "  " + cases[i] + (i + 1 < cases.size() ? ",\n" : "\n");
    arr += "  ]";
    if (cases.empty()) arr = "[]";
    top.field("cases", arr);
    top.field("summary", summary.done(2));
    return top.done() + "\n";
}

} // namespace nashdual
