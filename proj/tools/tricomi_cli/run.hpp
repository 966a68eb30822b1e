#pragma once

// Check suites and artifact output behind the tricomi_cli commands.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "tricomi/tricomi.hpp"

namespace tricomi::cli {

using json = nlohmann::ordered_json;

inline const std::vector<std::string> kCommands{"solve",      "kernel-check", "idcheck", "k0k1",
                                                "compare-fd", "appendix",     "domains"};
inline const std::vector<std::string> kPresets{"separable-k1", "constant", "cauchy-cos"};

struct RunConfig {
    std::string command;
    double ell = 1.0;
    std::string preset = "separable-k1";
    std::string out;                                   // empty: $TRICOMI_OUT_DIR/<command>
    std::size_t nodes = 512;                           // quadrature node budget per dimension
    double tol = 1e-10;                                // quadrature tolerance, absolute and relative
    double check_tol = 1e-6;                           // transform against ODE oracle
    double fd_linf_tol = 5e-3;                         // transform against FD solver
    double fd_ratio_min = 3.5;                         // FD error reduction under grid doubling
    double order_min = 1.8;                            // observed residual order
    std::optional<std::array<std::size_t, 2>> grid;    // nx, nt
    std::uint64_t seed = 20261016;
    double t = 1.0;                                    // final time
    double x0 = 0.5;                                   // domain half-width at t = 0

    QuadratureSpec quadrature() const {
        QuadratureSpec q;
        q.nodes = nodes;
        q.abs_tol = tol;
        q.rel_tol = tol;
        return q;
    }

    std::array<std::size_t, 2> grid_or(std::size_t nx, std::size_t nt) const { return grid.value_or(std::array{nx, nt}); }
};

inline bool contains(const std::vector<std::string>& v, const std::string& s) {
    return std::find(v.begin(), v.end(), s) != v.end();
}

inline void validate(const RunConfig& c) {
    if (!contains(kCommands, c.command))
        throw DomainError("unknown command '" + c.command + "'");
    if (!contains(kPresets, c.preset))
        throw DomainError("unknown preset '" + c.preset + "'");
    make_params(c.ell);
    if (c.nodes < 2)
        throw DomainError("nodes must be >= 2");
    for (double v : {c.tol, c.check_tol, c.fd_linf_tol, c.fd_ratio_min, c.order_min, c.t, c.x0})
        if (!(v > 0.0) || !std::isfinite(v))
            throw DomainError("tolerances, t and x0 must be positive and finite");
    if (c.grid && ((*c.grid)[0] < 16 || (*c.grid)[1] < 16))
        throw DomainError("grid needs nx, nt >= 16");
}

inline std::array<std::size_t, 2> parse_grid(const std::string& s) {
    std::size_t nx = 0, nt = 0;
    char comma = 0;
    std::istringstream is(s);
    if (!(is >> nx >> comma >> nt) || comma != ',' || !is.eof())
        throw DomainError("grid must be given as nx,nt");
    return {nx, nt};
}

/// Fields present in j replace those of c; unknown keys are rejected.
inline void merge_json(RunConfig& c, const json& j) {
    if (!j.is_object())
        throw DomainError("config must be a JSON object");
    try {
        for (const auto& [key, v] : j.items()) {
            if (key == "command") c.command = v.get<std::string>();
            else if (key == "ell") c.ell = v.get<double>();
            else if (key == "preset") c.preset = v.get<std::string>();
            else if (key == "out") c.out = v.get<std::string>();
            else if (key == "nodes") c.nodes = v.get<std::size_t>();
            else if (key == "tol") c.tol = v.get<double>();
            else if (key == "check_tol") c.check_tol = v.get<double>();
            else if (key == "fd_linf_tol") c.fd_linf_tol = v.get<double>();
            else if (key == "fd_ratio_min") c.fd_ratio_min = v.get<double>();
            else if (key == "order_min") c.order_min = v.get<double>();
            else if (key == "grid") c.grid = v.is_string() ? parse_grid(v.get<std::string>()) : v.get<std::array<std::size_t, 2>>();
            else if (key == "seed") c.seed = v.get<std::uint64_t>();
            else if (key == "t") c.t = v.get<double>();
            else if (key == "x0") c.x0 = v.get<double>();
            else throw DomainError("unknown config key '" + key + "'");
        }
    } catch (const json::exception& e) {
        throw DomainError(std::string("bad config value: ") + e.what());
    }
}

inline RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw DomainError("cannot read config '" + path + "'");
    RunConfig c;
    try {
        merge_json(c, json::parse(in));
    } catch (const json::parse_error& e) {
        throw DomainError("config '" + path + "' is not valid JSON: " + e.what());
    }
    return c;
}

/// The configuration as recorded in summaries; the output path is left out so
/// that runs differing only in destination produce identical files.
inline json to_json(const RunConfig& c) {
    json j;
    j["command"] = c.command;
    j["ell"] = c.ell;
    j["preset"] = c.preset;
    j["nodes"] = c.nodes;
    j["tol"] = c.tol;
    j["check_tol"] = c.check_tol;
    j["fd_linf_tol"] = c.fd_linf_tol;
    j["fd_ratio_min"] = c.fd_ratio_min;
    j["order_min"] = c.order_min;
    j["grid"] = c.grid ? json(*c.grid) : json(nullptr);
    j["seed"] = c.seed;
    j["t"] = c.t;
    j["x0"] = c.x0;
    return j;
}

struct Artifact {
    std::string name;
    std::string content;
};

struct Report {
    json summary = json::object();
    json failures = json::array();
    std::vector<Artifact> artifacts;

    void fail(const std::string& check, const std::string& message, json detail = json::object()) {
        json f;
        f["check"] = check;
        f["message"] = message;
        f["detail"] = std::move(detail);
        failures.push_back(std::move(f));
    }
    void expect(bool ok, const std::string& check, const std::string& message, json detail = json::object()) {
        if (!ok)
            fail(check, message, std::move(detail));
    }
    bool passed() const { return failures.empty(); }
};

inline std::string csv_line(std::initializer_list<double> values) {
    std::string s;
    for (double v : values) {
        if (!s.empty())
            s += ',';
        s += format_double(v);
    }
    return s + '\n';
}

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// Central differences with two Richardson levels (error O(h^6)).
template <class C>
double richardson(C&& c, double h) {
    const double d0 = c(h), d1 = c(h / 2.0), d2 = c(h / 4.0);
    const double r0 = (4.0 * d1 - d0) / 3.0, r1 = (4.0 * d2 - d1) / 3.0;
    return (16.0 * r1 - r0) / 15.0;
}

template <class F>
double diff1(F&& f, double x, double h) {
    return richardson([&](double s) { return (f(x + s) - f(x - s)) / (2.0 * s); }, h);
}

template <class F>
double diff2(F&& f, double x, double h) {
    const double f0 = f(x);
    return richardson([&](double s) { return (f(x + s) - 2.0 * f0 + f(x - s)) / (s * s); }, h);
}

// ---------------------------------------------------------------- kernel-check

/// 5 x 5 x 5 lattice: t, b/t, and r as a fraction of phi(t) + phi(b).
inline std::vector<KernelPoint> kernel_lattice(const TricomiParams& p) {
    std::vector<KernelPoint> pts;
    for (double t : {0.5, 0.75, 1.0, 1.25, 1.5})
        for (double bf : {0.2, 0.35, 0.5, 0.65, 0.8})
            for (double rf : {0.1, 0.3, 0.5, 0.7, 0.85}) {
                const double b = bf * t;
                pts.push_back({t, b, rf * (phi(p, t) + phi(p, b))});
            }
    return pts;
}

inline Report kernel_check(const TricomiParams& p) {
    Report rep;
    std::string csv = "t,b,r,e_tt,e_rr,residual,bound,pass\n";
    double worst = 0.0;
    std::size_t bad = 0;
    const auto pts = kernel_lattice(p);
    for (const KernelPoint& k : pts) {
        const PdeResidual r = kernel_pde_residual(p, k);
        const double bound = 1e-6 * (std::abs(r.e_tt) + std::abs(r.e_rr) + 1.0);
        const bool ok = std::abs(r.residual) <= bound;
        worst = std::max(worst, std::abs(r.residual) / bound);
        if (!ok) {
            ++bad;
            rep.fail("kernel_pde", "residual above bound", {{"t", k.t}, {"b", k.b}, {"r", k.r}, {"residual", r.residual}});
        }
        csv += csv_line({k.t, k.b, k.r, r.e_tt, r.e_rr, r.residual, bound, ok ? 1.0 : 0.0});
    }
    rep.artifacts.push_back({"kernel_check.csv", csv});
    rep.summary["ell"] = p.ell;
    rep.summary["points"] = pts.size();
    rep.summary["failed_points"] = bad;
    rep.summary["max_residual_over_bound"] = worst;
    return rep;
}

// --------------------------------------------------------------------- idcheck

/// Random admissible kernel point with b in [0.05 t, 0.9 t] and
/// r in [0.05, 0.95] (phi(t) - phi(b)).
inline KernelPoint random_kernel_point(const TricomiParams& p, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double t = 0.3 + 1.7 * u(rng);
    const double b = t * (0.05 + 0.85 * u(rng));
    const double L = phi(p, t) - phi(p, b);
    return {t, b, L * (0.05 + 0.9 * u(rng))};
}

inline Report idcheck(const TricomiParams& p, std::uint64_t seed, std::size_t samples = 200) {
    Report rep;
    std::mt19937_64 rng(seed);
    std::string csv = "t,b,r,quantity,closed_form,reference,rel_err\n";
    const char* names[8] = {"alpha_t", "alpha_tt", "beta_t", "beta_tt", "alpha_r", "alpha_rr", "beta_r", "beta_rr"};
    double max22 = 0.0, max23 = 0.0, max13 = 0.0;
    const bool has23 = p.gamma != 0.0;
    for (std::size_t i = 0; i < samples; ++i) {
        const KernelPoint k = random_kernel_point(p, rng);
        const double S = phi(p, k.t) + phi(p, k.b);
        // alpha and beta depend on r^2 only; the nearest singularities are D = 0 and t = 0.
        const double hr = 0.05 * (S - k.r);
        const double ht = 0.05 * std::min(k.t, (S - k.r) / phi_derivatives(p, k.t).first);
        auto A = [&](double t, double r) { return alpha_beta(p, {t, k.b, std::abs(r)}).alpha; };
        auto B = [&](double t, double r) { return alpha_beta(p, {t, k.b, std::abs(r)}).beta; };
        const Lemma22Derivatives d = lemma22_derivatives(p, k);
        const double closed[8] = {d.alpha_t, d.alpha_tt, d.beta_t, d.beta_tt, d.alpha_r, d.alpha_rr, d.beta_r, d.beta_rr};
        const double fd[8] = {
            diff1([&](double t) { return A(t, k.r); }, k.t, ht), diff2([&](double t) { return A(t, k.r); }, k.t, ht),
            diff1([&](double t) { return B(t, k.r); }, k.t, ht), diff2([&](double t) { return B(t, k.r); }, k.t, ht),
            diff1([&](double r) { return A(k.t, r); }, k.r, hr), diff2([&](double r) { return A(k.t, r); }, k.r, hr),
            diff1([&](double r) { return B(k.t, r); }, k.r, hr), diff2([&](double r) { return B(k.t, r); }, k.r, hr)};
        for (int j = 0; j < 8; ++j) {
            // alpha is constant at ell = 0: both sides vanish identically.
            const double e = closed[j] == 0.0 && std::abs(fd[j]) < 1e-9 ? 0.0 : rel_err(fd[j], closed[j]);
            max22 = std::max(max22, e);
            csv += format_double(k.t) + ',' + format_double(k.b) + ',' + format_double(k.r) + ',' + names[j] + ',' +
                   format_double(closed[j]) + ',' + format_double(fd[j]) + ',' + format_double(e) + '\n';
            rep.expect(e <= 1e-6, "lemma22", std::string(names[j]) + " differs from central differences",
                       {{"t", k.t}, {"b", k.b}, {"r", k.r}, {"rel_err", e}});
        }

        const AlphaBeta ab = alpha_beta(p, k);
        const double pt = phi(p, k.t), pb = phi(p, k.b);
        const double D = (pt + pb) * (pt + pb) - k.r * k.r;
        const double e13 = rel_err((1.0 - ab.beta) * D, 4.0 * pt * pb);
        max13 = std::max(max13, e13);
        rep.expect(e13 <= 1e-12, "complement_identity", "(1-beta) D != 4 phi(t) phi(b)", {{"rel_err", e13}});

        if (has23) {
            const Lemma23Coefficients c = lemma23_coefficients(p, k);
            const double g = p.gamma, z = c.z;
            const double e3[3] = {rel_err(c.I, -g * g * c.G), rel_err(c.J, (1.0 - (2.0 * g + 1.0) * z) * c.G),
                                  rel_err(c.Y, z * (1.0 - z) * c.G)};
            const char* n3[3] = {"I", "J", "Y"};
            for (int j = 0; j < 3; ++j) {
                max23 = std::max(max23, e3[j]);
                rep.expect(e3[j] <= 1e-10, "lemma23", std::string(n3[j]) + " identity violated",
                           {{"t", k.t}, {"b", k.b}, {"r", k.r}, {"rel_err", e3[j]}});
            }
        }
    }

    double max14 = 0.0;
    for (double t : {0.1, 0.5, 1.0, 2.0, 5.0}) {
        const PhiDerivatives d = phi_derivatives(p, t);
        max14 = std::max(max14, rel_err(d.first * d.first, std::pow(t, p.ell)));
        if (p.gamma != 0.0)
            max14 = std::max(max14, rel_err(d.second * phi(p, t) / (2.0 * p.gamma), d.first * d.first));
    }
    rep.expect(max14 <= 1e-12, "phi_identities", "phi derivative identities violated", {{"rel_err", max14}});

    rep.artifacts.push_back({"idcheck.csv", csv});
    rep.summary["ell"] = p.ell;
    rep.summary["samples"] = samples;
    rep.summary["lemma22"] = {{"max_rel_err", max22}, {"tol", 1e-6}, {"passed", max22 <= 1e-6}};
    rep.summary["lemma23"] = has23 ? json{{"max_rel_err", max23}, {"tol", 1e-10}, {"passed", max23 <= 1e-10}}
                                   : json{{"skipped", "gamma = 0"}};
    rep.summary["complement_identity"] = {{"max_rel_err", max13}, {"tol", 1e-12}};
    rep.summary["phi_identities"] = {{"max_rel_err", max14}, {"tol", 1e-12}};
    return rep;
}

// ------------------------------------------------------------------------ k0k1

inline Report k0k1(const TricomiParams& p, const QuadratureSpec& q, double check_tol, double order_min) {
    Report rep;
    rep.summary["ell"] = p.ell;
    if (!(p.ell > 0.0)) {
        rep.fail("k0k1", "K0 and K1 require ell > 0");
        return rep;
    }
    const Evaluator v = [](const Point& x, double tau) { return std::cos(x[0]) * std::cos(tau); };
    json init = json::array();
    const bool derivative_checked = p.ell < 4.0;
    const double h = 1e-4;
    for (double x : {0.0, 0.3, 1.1}) {
        const Point pt{x, 0.0, 0.0};
        const double v0 = std::cos(x);
        const double k0 = apply_K0(v, p, pt, 1e-10, q).value, k1 = apply_K1(v, p, pt, 1e-10, q).value;
        const double k0h = apply_K0(v, p, pt, h, q).value, k1h = apply_K1(v, p, pt, h, q).value;
        const double dk0 = (k0h - k0) / h, dk1 = (k1h - k1) / h;
        json row{{"x", x}, {"K0_at_0", k0}, {"K1_at_0", k1}, {"dK0_at_0", dk0}, {"dK1_at_0", dk1}, {"v", v0}};
        rep.expect(std::abs(k0 - v0) <= 1e-8, "k0_initial_value", "K0 v(x,0) != v(x,0)", row);
        rep.expect(std::abs(k1) <= 1e-8, "k1_initial_value", "K1 v(x,0) != 0", row);
        if (derivative_checked) {
            rep.expect(std::abs(dk0) <= 1e-5, "k0_initial_derivative", "d/dt K0 v(x,0) != 0", row);
            rep.expect(std::abs(dk1 - v0) <= 1e-5, "k1_initial_derivative", "d/dt K1 v(x,0) != v(x,0)", row);
        }
        init.push_back(row);
    }
    rep.summary["initial_values"] = init;
    rep.summary["initial_derivatives_checked"] = derivative_checked;

    // u = K0 v0 + K1 v1 against U'' + t^ell U = 0 with matching data.
    json cauchy = json::array();
    for (auto [u0, u1] : {std::pair{1.0, 0.0}, std::pair{0.0, 1.0}}) {
        const auto v0 = separable_solution(1.0, [u0](double) { return u0; });
        const auto v1 = separable_solution(1.0, [u1](double) { return u1; });
        SeparableOde ode{p, 1.0, [](double) { return 0.0; }, u0, u1};
        for (double t : {0.25, 0.5, 1.0}) {
            const TransformResult u = solve_cauchy(v0, v1, p, {0.0, 0.0, 0.0}, t, q);
            const double ref = solve_separable_ode(ode, t, 1e-13)[0];
            json row{{"u0", u0}, {"u1", u1}, {"t", t}, {"transform", u.value}, {"oracle", ref},
                     {"error", std::abs(u.value - ref)}, {"est_error", u.est_error}};
            rep.expect(std::abs(u.value - ref) <= check_tol, "cauchy_vs_ode", "K0/K1 solution differs from ODE oracle", row);
            cauchy.push_back(row);
        }
    }
    rep.summary["cauchy_vs_ode"] = cauchy;
    rep.summary["check_tol"] = check_tol;

    // Grid residual of u = K0[cos x cos tau] under refinement.
    const auto vb = separable_solution(1.0, [](double) { return 1.0; });
    const auto zero = separable_solution(1.0, [](double) { return 0.0; });
    auto u = [&](double x, double t) { return solve_cauchy(vb, zero, p, {x, 0.0, 0.0}, t, q).value; };
    std::array<double, 2> res{};
    for (int level = 0; level < 2; ++level) {
        Grid1D g;
        g.nx = g.nt = 16u << level;
        res[level] = residual_on_grid(u, {}, p, g);
    }
    const double order = std::log2(res[0] / res[1]);
    rep.summary["residual"] = {{"grid_16", res[0]}, {"grid_32", res[1]}, {"order", order}, {"order_min", order_min}};
    rep.expect(order >= order_min, "k0_residual_order", "grid residual does not decay at second order",
               {{"order", order}});
    return rep;
}

// ----------------------------------------------------------------------- solve

struct Problem {
    BaseSolution base;            // for K
    SpaceTimeFn source;           // f(x,t)
    std::function<double(double)> oracle_U;   // u(x,t) = cos^m(x) U(t)
    bool x_dependent = true;
    bool cauchy = false;
};

inline Problem make_problem(const std::string& preset, const TricomiParams& p, double t_max) {
    Problem pr;
    if (preset == "separable-k1") {
        pr.base = separable_solution(1.0, [](double) { return 1.0; });
        pr.source = [](double x, double) { return std::cos(x); };
        pr.oracle_U = ode_oracle_separable(p, 1.0, [](double) { return 1.0; }, t_max, 1e-12);
    } else if (preset == "constant") {
        pr.base = dalembert_1d({[](const Point&, double) { return 1.0; }, {}});
        pr.source = [](double, double) { return 1.0; };
        pr.oracle_U = ode_oracle_separable(p, 0.0, [](double) { return 1.0; }, t_max, 1e-12);
        pr.x_dependent = false;
    } else if (preset == "cauchy-cos") {
        if (!(p.ell > 0.0))
            throw DomainError("preset cauchy-cos requires ell > 0");
        pr.base = separable_solution(1.0, [](double) { return 1.0; });
        pr.source = [](double, double) { return 0.0; };
        SeparableOde ode{p, 1.0, [](double) { return 0.0; }, 1.0, 0.0};
        pr.oracle_U = [ode](double t) { return solve_separable_ode(ode, t, 1e-13)[0]; };
        pr.cauchy = true;
    } else {
        throw DomainError("unknown preset '" + preset + "'");
    }
    return pr;
}

inline Report solve(const RunConfig& c) {
    Report rep;
    const TricomiParams p = make_params(c.ell);
    const QuadratureSpec q = c.quadrature();
    const Problem pr = make_problem(c.preset, p, c.t);
    const auto [nx, nt] = c.grid_or(64, 64);
    Grid1D g;
    g.nx = nx;
    g.nt = nt;
    g.t_max = c.t;
    g.validate();

    const auto zero = separable_solution(1.0, [](double) { return 0.0; });
    const KTransformFunction K(pr.base, p, q);
    auto value = [&](double x, double t) -> TransformResult {
        if (pr.cauchy)
            return solve_cauchy(pr.base, zero, p, {x, 0.0, 0.0}, t, q);
        return K.result({x, 0.0, 0.0}, t);
    };

    std::string csv = "x,t,u\n";
    double max_err = 0.0, max_est = 0.0;
    for (std::size_t n = 0; n < g.nt; ++n) {
        const double t = g.t(n);
        const double U = pr.oracle_U(t);
        for (std::size_t i = 0; i < g.nx; ++i) {
            const double x = g.x(i);
            const TransformResult r = value(x, t);
            max_est = std::max(max_est, r.est_error);
            max_err = std::max(max_err, std::abs(r.value - (pr.x_dependent ? std::cos(x) : 1.0) * U));
            csv += csv_line({x, t, r.value});
        }
    }
    rep.artifacts.push_back({"solution.csv", csv});

    json times = json::array();
    for (double frac : {0.25, 0.5, 1.0}) {
        const double t = frac * c.t;
        const double u = value(0.0, t).value, U = pr.oracle_U(t);
        times.push_back({{"t", t}, {"transform", u}, {"oracle", U}, {"error", std::abs(u - U)}});
        rep.expect(std::abs(u - U) <= c.check_tol, "oracle", "transform differs from ODE oracle", times.back());
    }
    rep.expect(max_err <= c.check_tol, "oracle_grid", "transform differs from ODE oracle on the grid",
               {{"max_error", max_err}});

    // Residual of the transform under grid refinement.
    std::array<double, 2> res{};
    for (int level = 0; level < 2; ++level) {
        Grid1D rg;
        rg.nx = rg.nt = 16u << level;
        rg.t_max = c.t;
        res[level] = residual_on_grid([&](double x, double t) { return value(x, t).value; }, pr.source, p, rg);
    }
    const bool exact = res[0] <= 1e-9;
    const double order = exact ? std::numeric_limits<double>::infinity() : std::log2(res[0] / res[1]);
    rep.expect(exact || order >= c.order_min, "residual_order", "grid residual does not decay at second order",
               {{"grid_16", res[0]}, {"grid_32", res[1]}});

    rep.summary["preset"] = c.preset;
    rep.summary["ell"] = c.ell;
    rep.summary["grid"] = {{"nx", g.nx}, {"nt", g.nt}, {"t_max", g.t_max}};
    rep.summary["oracle"] = {{"kind", "ode"}, {"max_error", max_err}, {"check_tol", c.check_tol}, {"times", times}};
    rep.summary["max_quadrature_est_error"] = max_est;
    rep.summary["residual"] = {{"grid_16", res[0]}, {"grid_32", res[1]},
                               {"order", exact ? json("exact") : json(order)}, {"order_min", c.order_min}};
    return rep;
}

// ------------------------------------------------------------------ compare-fd

struct FdComparison {
    double linf = 0.0, l2 = 0.0;
    std::size_t samples = 0;
};

/// Transform solution for f = cos x against the FD solver on g, at up to
/// 33 x 33 sampled nodes.
inline FdComparison compare_with_fd(const TricomiParams& p, const Grid1D& g, const QuadratureSpec& q) {
    const GridFunction fd = fd_tricomi([](double x, double) { return std::cos(x); }, p, g);
    const KTransformFunction K(separable_solution(1.0, [](double) { return 1.0; }), p, q);
    const std::size_t sx = std::max<std::size_t>(1, g.nx / 32);
    FdComparison out;
    double sum2 = 0.0;
    for (std::size_t k = 0; k <= 32; ++k) {
        const std::size_t n = (k * (g.nt - 1)) / 32;
        for (std::size_t i = 0; i < g.nx; i += sx) {
            const double d = K({g.x(i), 0.0, 0.0}, g.t(n)) - fd.at(i, n);
            out.linf = std::max(out.linf, std::abs(d));
            sum2 += d * d;
            ++out.samples;
        }
    }
    out.l2 = std::sqrt(sum2 / static_cast<double>(out.samples));
    return out;
}

inline Report compare_fd(const RunConfig& c) {
    Report rep;
    const TricomiParams p = make_params(c.ell);
    rep.summary["ell"] = c.ell;
    if (p.ell < 0.0) {
        rep.fail("compare_fd", "the FD oracle starts at t = 0 and needs ell >= 0");
        return rep;
    }
    const auto [nx, nt] = c.grid_or(512, 2048);
    Grid1D g;
    g.nx = nx;
    g.nt = nt;
    g.t_max = c.t;
    Grid1D fine = g;
    fine.nx = 2 * nx;
    fine.nt = 2 * nt;
    const FdComparison a = compare_with_fd(p, g, c.quadrature());
    const FdComparison b = compare_with_fd(p, fine, c.quadrature());
    const double ratio = a.linf / b.linf;
    rep.summary["linf"] = a.linf;
    rep.summary["l2"] = a.l2;
    rep.summary["grid"] = {{"nx", nx}, {"nt", nt}, {"x_min", g.x_min}, {"x_max", g.x_max}, {"t_max", g.t_max}};
    rep.summary["samples"] = a.samples;
    rep.summary["refined"] = {{"nx", fine.nx}, {"nt", fine.nt}, {"linf", b.linf}, {"l2", b.l2}};
    rep.summary["ratio"] = ratio;
    rep.summary["tolerances"] = {{"linf", c.fd_linf_tol}, {"ratio_min", c.fd_ratio_min}, {"quadrature", c.tol}};
    rep.expect(a.linf <= c.fd_linf_tol, "fd_linf", "transform and FD solutions differ", {{"linf", a.linf}});
    rep.expect(ratio >= c.fd_ratio_min, "fd_convergence", "difference does not shrink at second order",
               {{"ratio", ratio}});
    return rep;
}

// -------------------------------------------------------------------- appendix

inline Report appendix(const TricomiParams& p, std::uint64_t seed) {
    Report rep;
    std::string csv = "d1,d2,gamma,T,B,lhs,rhs,rel_err\n";
    double max52 = 0.0;
    for (auto [g, T, B] : {std::array{1.0 / 6.0, 1.0, 0.3}, std::array{0.3, 2.0, 0.5}})
        for (double d1 : {0.0, 1.0, 2.0})
            for (double d2 : {-0.5, 1.0, 2.0}) {
                const Lemma52Result r = lemma52_identity(d1, d2, g, T, B);
                max52 = std::max(max52, r.rel_err);
                csv += csv_line({d1, d2, g, T, B, r.lhs, r.rhs, r.rel_err});
                rep.expect(r.rel_err <= 1e-8, "lemma52", "integral and closed form differ",
                           {{"d1", d1}, {"d2", d2}, {"gamma", g}, {"rel_err", r.rel_err}});
            }
    rep.artifacts.push_back({"lemma52.csv", csv});
    rep.summary["lemma52"] = {{"max_rel_err", max52}, {"tol", 1e-8}};

    json scaling = json::array();
    std::vector<LemmaId> ids;
    if (p.gamma > 0.0 && p.gamma < 0.5)
        ids = {LemmaId::L5_1, LemmaId::L5_4, LemmaId::L5_5, LemmaId::L5_6, LemmaId::L5_7, LemmaId::L5_9};
    else if (p.gamma == -1.0)
        ids = {LemmaId::L5_7};
    for (LemmaId id : ids) {
        const ScalingReport s = scaling_law_check(id, p);
        json fits = json::array();
        for (const ScalingFit& f : s.fits)
            fits.push_back({{"a", f.a}, {"b", f.b}, {"c", f.c}, {"expected_exponent", f.expected_exponent},
                            {"fitted_slope", f.terminating ? json(nullptr) : json(f.fitted_slope)},
                            {"terminating", f.terminating}, {"regular_bounded", f.regular_bounded},
                            {"passed", f.passed}, {"eps", f.eps}, {"singular", f.singular}});
        json entry{{"lemma", lemma_name(id)}, {"passed", s.passed}, {"fits", fits}};
        if (s.leading_constant) {
            entry["leading_constant"] = *s.leading_constant;
            entry["leading_constant_limit"] = *s.leading_constant_limit;
        }
        rep.expect(s.passed, "scaling", std::string(lemma_name(id)) + " exponent not recovered", entry);
        scaling.push_back(entry);
    }
    rep.summary["scaling"] = {{"gamma", p.gamma}, {"slope_tol", 0.05}, {"lemmas", scaling}};
    if (ids.empty())
        rep.summary["scaling"]["skipped"] = "gamma outside (0, 1/2)";

    // Hypergeometric ODE on random (gamma, z).
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> gd(-2.0, 0.49), zd(0.01, 0.99);
    double max_ode = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double g = gd(rng), z = zd(rng);
        max_ode = std::max(max_ode, std::abs(hyp2f1_ode_residual(g, z)));
    }
    rep.summary["hypergeometric_ode"] = {{"samples", 1000}, {"max_residual", max_ode}, {"tol", 1e-8}};
    rep.expect(max_ode <= 1e-8, "hypergeometric_ode", "ODE residual above tolerance", {{"max_residual", max_ode}});

    // Einstein-de Sitter kernel: F(-1,-1;1;beta) = 1 + beta.
    const TricomiParams eds = make_params(-4.0 / 3.0);
    double max_eds = 0.0;
    for (int i = 0; i < 200; ++i) {
        const KernelPoint k = random_kernel_point(eds, rng);
        const AlphaBeta ab = alpha_beta(eds, k);
        const double pt = phi(eds, k.t), pb = phi(eds, k.b);
        const double closed = eds.c * ((pt + pb) * (pt + pb) - k.r * k.r) * (1.0 + ab.beta);
        max_eds = std::max(max_eds, rel_err(kernel_E(eds, k), closed));
    }
    rep.summary["eds_kernel"] = {{"samples", 200}, {"max_rel_err", max_eds}, {"tol", 1e-13}};
    rep.expect(max_eds <= 1e-13, "eds_kernel", "polynomial kernel mismatch", {{"max_rel_err", max_eds}});
    return rep;
}

// --------------------------------------------------------------------- domains

/// Omega = {|x| < x0 - phi(t)}, its phi-image and the pullback curve
/// x0 - phi(phi(tau)) = x0 - k tau^m.
inline Report domains(const TricomiParams& p, double x0) {
    Report rep;
    const TricomiParams pp = p;
    const TimeSlabDomain omega{[pp, x0](double t) { return x0 - phi(pp, t); }, phi_inverse(p, x0)};
    const TimeSlabDomain image = phi_image(omega, p);
    const TimeSlabDomain pull = phi_pullback(omega, p);
    const double a = (p.ell + 2.0) / 2.0;
    const double coef = std::pow(1.0 / a, 1.0 + a), expo = a * a;

    const std::size_t samples = 201;
    std::string s_omega = "t,half_width\n", s_image = "tau,half_width\n";
    std::string s_pull = "tau,half_width,coefficient,tau_exponent\n";
    double max_dev = 0.0;
    for (std::size_t j = 0; j < samples; ++j) {
        const double f = static_cast<double>(j) / static_cast<double>(samples - 1);
        const double t = f * omega.t_max, tau = f * image.t_max, sigma = f * pull.t_max;
        s_omega += csv_line({t, std::max(0.0, omega.half_width(t))});
        s_image += csv_line({tau, std::max(0.0, image.half_width(tau))});
        const double w = pull.half_width(sigma);
        max_dev = std::max(max_dev, std::abs(w - (x0 - coef * std::pow(sigma, expo))));
        s_pull += format_double(sigma) + ',' + format_double(std::max(0.0, w)) + ',' + format_double(coef) + ',' +
                  format_double(expo) + '\n';
    }
    rep.artifacts.push_back({"omega.csv", s_omega});
    rep.artifacts.push_back({"omega_phi_image.csv", s_image});
    rep.artifacts.push_back({"omega_phi.csv", s_pull});

    rep.expect(is_backward_time_connected(image), "image_connected", "phi-image is not backward time connected");
    rep.expect(is_backward_time_connected(pull), "pullback_connected", "pullback is not backward time connected");
    rep.expect(max_dev <= 1e-12 * std::max(1.0, x0), "pullback_curve", "pullback differs from x0 - k tau^m",
               {{"max_deviation", max_dev}});
    rep.summary["ell"] = p.ell;
    rep.summary["x0"] = x0;
    rep.summary["omega_t_max"] = omega.t_max;
    rep.summary["image_t_max"] = image.t_max;
    rep.summary["pullback"] = {{"coefficient", coef}, {"tau_exponent", expo}, {"t_max", pull.t_max},
                               {"max_deviation", max_dev}};
    return rep;
}

// ------------------------------------------------------------------------- run

inline std::filesystem::path output_dir(const RunConfig& c) {
    if (!c.out.empty())
        return c.out;
    const char* env = std::getenv("TRICOMI_OUT_DIR");
    return std::filesystem::path(env && *env ? env : "tricomi_out") / c.command;
}

inline Report run_suite(const RunConfig& c) {
    const TricomiParams p = make_params(c.ell);
    Report rep;
    try {
        if (c.command == "solve") rep = solve(c);
        else if (c.command == "kernel-check") rep = kernel_check(p);
        else if (c.command == "idcheck") rep = idcheck(p, c.seed);
        else if (c.command == "k0k1") rep = k0k1(p, c.quadrature(), c.check_tol, c.order_min);
        else if (c.command == "compare-fd") rep = compare_fd(c);
        else if (c.command == "appendix") rep = appendix(p, c.seed);
        else if (c.command == "domains") rep = domains(p, c.x0);
    } catch (const ConvergenceError& e) {
        rep.fail("convergence", e.what(), {{"best_estimate", e.best_estimate()}, {"est_error", e.est_error()}});
    } catch (const std::exception& e) {
        rep.fail("error", e.what());
    }
    return rep;
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
    if (!out)
        throw std::runtime_error("cannot write " + path.string());
}

/// Runs the configured suite and writes its artifacts, summary.json and, on
/// failure, failures.json. Returns 0 iff every check passed.
inline int run(const RunConfig& c, std::ostream& log = std::cerr) {
    validate(c);
    const Report rep = run_suite(c);
    const std::filesystem::path dir = output_dir(c);
    std::filesystem::create_directories(dir);
    for (const Artifact& a : rep.artifacts)
        write_file(dir / a.name, a.content);
    json summary;
    summary["config"] = to_json(c);
    summary["passed"] = rep.passed();
    summary["results"] = rep.summary;
    write_file(dir / "summary.json", summary.dump(2) + "\n");
    const auto failures = dir / "failures.json";
    if (rep.passed()) {
        std::filesystem::remove(failures);
    } else {
        write_file(failures, rep.failures.dump(2) + "\n");
        for (const auto& f : rep.failures)
            log << "FAIL " << f["check"].get<std::string>() << ": " << f["message"].get<std::string>() << '\n';
    }
    log << c.command << ": " << (rep.passed() ? "all checks passed" : "checks failed") << " (" << dir.string()
        << ")\n";
    return rep.passed() ? 0 : 1;
}

} // namespace tricomi::cli
