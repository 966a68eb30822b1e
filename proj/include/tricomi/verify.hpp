#pragma once

// Oracles and geometric predicates.
//   fd_tricomi            explicit leapfrog solver for u_tt = t^ell u_xx + f, periodic in x
//   residual_on_grid      max |u_tt - t^ell u_xx - f| by centered differences
//   TimeSlabDomain        {|x| < x0(t), 0 < t <= t_max}
//   lemma52_identity      integral of ((T+B)^2 - r^2)^(-e) against its 2F1 closed form
//   scaling_law_check     singular exponent of F near z = 1 from a log-log fit

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tricomi/errors.hpp"
#include "tricomi/grid.hpp"
#include "tricomi/params.hpp"
#include "tricomi/quadrature.hpp"
#include "tricomi/specfun.hpp"

namespace tricomi {

using SpaceTimeFn = std::function<double(double, double)>;   // (x, t)

/// Leapfrog for u_tt = t^ell u_xx + f with zero data. The first two layers
/// come from u ~ int_0^t (t-s) f(x,s) ds, accurate to O(t^(ell+4)).
inline GridFunction fd_tricomi(const SpaceTimeFn& f, const TricomiParams& p, const Grid1D& grid) {
    grid.validate();
    if (!f)
        throw DomainError("fd_tricomi: empty source");
    const double dx = grid.dx(), dt = grid.dt();
    if (p.ell < 0.0 && grid.t_start == 0.0)
        throw DomainError("fd_tricomi: ell < 0 needs t_start > 0");
    const double speed = p.ell >= 0.0 ? std::pow(grid.t_max, p.ell / 2.0) : std::pow(grid.t_start, p.ell / 2.0);
    if (dt * speed > dx)
        throw DomainError("fd_tricomi: CFL condition dt <= dx / max t^(ell/2) violated");

    const std::size_t nx = grid.nx, nt = grid.nt;
    GridFunction u(grid);
    const GaussRule gl = gauss_legendre(8);
    auto start_layer = [&](std::size_t n) {
        const double t = grid.t(n);
        for (std::size_t i = 0; i < nx; ++i) {
            const double x = grid.x(i);
            u.at(i, n) = t == 0.0 ? 0.0 : integrate_gauss(gl, 0.0, t, [&](double s) { return (t - s) * f(x, s); });
        }
    };
    start_layer(0);
    start_layer(1);

    const double lam = dt * dt / (dx * dx);
    for (std::size_t n = 1; n + 1 < nt; ++n) {
        const double t = grid.t(n);
        const double c = lam * std::pow(t, p.ell);
        for (std::size_t i = 0; i < nx; ++i) {
            const std::size_t im = i == 0 ? nx - 1 : i - 1;
            const std::size_t ip = i + 1 == nx ? 0 : i + 1;
            u.at(i, n + 1) = 2.0 * u.at(i, n) - u.at(i, n - 1) +
                             c * (u.at(ip, n) - 2.0 * u.at(i, n) + u.at(im, n)) + dt * dt * f(grid.x(i), t);
        }
    }
    return u;
}

/// Max residual at nodes with t >= 10 dt, u evaluated off-grid as needed.
inline double residual_on_grid(const SpaceTimeFn& u, const SpaceTimeFn& f, const TricomiParams& p,
                               const Grid1D& grid) {
    grid.validate();
    const double dx = grid.dx(), dt = grid.dt();
    double worst = 0.0;
    for (std::size_t n = 0; n + 1 < grid.nt; ++n) {
        const double t = grid.t(n);
        if (t < 10.0 * dt || n == 0)
            continue;
        const double tl = std::pow(t, p.ell);
        for (std::size_t i = 0; i < grid.nx; ++i) {
            const double x = grid.x(i);
            const double u0 = u(x, t);
            const double utt = (u(x, t + dt) - 2.0 * u0 + u(x, t - dt)) / (dt * dt);
            const double uxx = (u(x + dx, t) - 2.0 * u0 + u(x - dx, t)) / (dx * dx);
            const double rf = f ? f(x, t) : 0.0;
            worst = std::max(worst, std::abs(utt - tl * uxx - rf));
        }
    }
    return worst;
}

/// Same on stored values, periodic in x.
inline double residual_on_grid(const GridFunction& u, const SpaceTimeFn& f, const TricomiParams& p) {
    const Grid1D& grid = u.grid;
    grid.validate();
    const double dx = grid.dx(), dt = grid.dt();
    const std::size_t nx = grid.nx;
    double worst = 0.0;
    for (std::size_t n = 1; n + 1 < grid.nt; ++n) {
        const double t = grid.t(n);
        if (t < 10.0 * dt)
            continue;
        const double tl = std::pow(t, p.ell);
        for (std::size_t i = 0; i < nx; ++i) {
            const std::size_t im = i == 0 ? nx - 1 : i - 1;
            const std::size_t ip = i + 1 == nx ? 0 : i + 1;
            const double utt = (u.at(i, n + 1) - 2.0 * u.at(i, n) + u.at(i, n - 1)) / (dt * dt);
            const double uxx = (u.at(ip, n) - 2.0 * u.at(i, n) + u.at(im, n)) / (dx * dx);
            const double rf = f ? f(grid.x(i), t) : 0.0;
            worst = std::max(worst, std::abs(utt - tl * uxx - rf));
        }
    }
    return worst;
}

struct TimeSlabDomain {
    std::function<double(double)> half_width;   // x0(t); fibre is empty where x0(t) <= 0
    double t_max = 1.0;

    bool contains(double x, double t) const {
        return t > 0.0 && t <= t_max && std::abs(x) < half_width(t);
    }
};

inline std::vector<double> sample_times(const TimeSlabDomain& d, std::size_t samples) {
    if (samples < 2)
        throw DomainError("sample_times: need at least 2 samples");
    std::vector<double> ts(samples);
    for (std::size_t j = 0; j < samples; ++j)
        ts[j] = d.t_max * static_cast<double>(j + 1) / static_cast<double>(samples);
    return ts;
}

/// True when, on the sampled times, every fibre contains all later fibres,
/// i.e. (x,t) in d implies (x,s) in d for 0 < s <= t.
inline bool is_backward_time_connected(const TimeSlabDomain& d, std::size_t samples = 512) {
    if (!d.half_width)
        throw DomainError("is_backward_time_connected: empty boundary");
    const auto ts = sample_times(d, samples);
    double later = -std::numeric_limits<double>::infinity();
    for (std::size_t j = ts.size(); j-- > 0;) {
        const double w = std::max(0.0, d.half_width(ts[j]));
        if (w < later)
            return false;
        later = std::max(later, w);
    }
    return true;
}

inline TimeSlabDomain domain_union(const TimeSlabDomain& a, const TimeSlabDomain& b) {
    auto wa = a.half_width, wb = b.half_width;
    const double ta = a.t_max, tb = b.t_max;
    return {[=](double t) {
                const double x = t <= ta ? wa(t) : 0.0;
                const double y = t <= tb ? wb(t) : 0.0;
                return std::max(x, y);
            },
            std::max(ta, tb)};
}

inline TimeSlabDomain domain_intersection(const TimeSlabDomain& a, const TimeSlabDomain& b) {
    auto wa = a.half_width, wb = b.half_width;
    return {[=](double t) { return std::min(wa(t), wb(t)); }, std::min(a.t_max, b.t_max)};
}

/// phi-image: the union over (x,t) in d of {(x,tau) : 0 < tau <= phi(t)}. For a
/// backward time connected slab this is {|x| < x0(phi^-1(tau)), tau <= phi(t_max)}.
inline TimeSlabDomain phi_image(const TimeSlabDomain& d, const TricomiParams& p, std::size_t samples = 512) {
    if (!is_backward_time_connected(d, samples))
        throw DomainError("phi_image: boundary is not nonincreasing in t");
    auto w = d.half_width;
    const TricomiParams pp = p;
    return {[w, pp](double tau) { return w(phi_inverse(pp, tau)); }, phi(p, d.t_max)};
}

/// Slab with boundary x0(phi(tau)); for the Tricomi domain x0 - (2/3) t^(3/2)
/// at ell = 1 this is x0 - (2/3)^(5/2) tau^(9/4).
inline TimeSlabDomain phi_pullback(const TimeSlabDomain& d, const TricomiParams& p) {
    auto w = d.half_width;
    const TricomiParams pp = p;
    return {[w, pp](double tau) { return w(phi(pp, tau)); }, phi_inverse(p, d.t_max)};
}

struct Lemma52Result {
    double lhs, rhs, rel_err;
};

/// int_0^{T-B} ((T+B)^2 - r^2)^(-d1 g - d2) dr
///   = (T-B) (T+B)^(-2(d1 g + d2)) F(1/2, d1 g + d2; 3/2; ((T-B)/(T+B))^2).
inline Lemma52Result lemma52_identity(double d1, double d2, double gamma, double T, double B,
                                      double rel_tol = 1e-12) {
    if (!(B > 0.0 && B < T))
        throw DomainError("lemma52_identity: requires 0 < B < T (the integral diverges at B = 0 for large exponents)");
    const double e = d1 * gamma + d2;
    const double s = T + B, L = T - B;
    QuadTolerance tol;
    tol.rel_tol = rel_tol;
    tol.abs_tol = 1e-300;
    const QuadResult q = integrate_unit_tanh_sinh(
        [&](double u, double) {
            const double r = L * u;
            return std::pow((s - r) * (s + r), -e);
        },
        tol);
    if (!q.converged)
        throw ConvergenceError("lemma52_identity: quadrature did not converge", q.value, q.est_error);
    const double lhs = L * q.value;
    const double z = (L / s) * (L / s);
    const double zc = 4.0 * T * B / (s * s);
    const double rhs = L * std::pow(s, -2.0 * e) * Hypergeometric2F1(0.5, e, 1.5).eval(z, zc);
    return {lhs, rhs, std::abs(lhs - rhs) / std::abs(rhs)};
}

enum class LemmaId { L5_1, L5_4, L5_5, L5_6, L5_7, L5_9 };

inline const char* lemma_name(LemmaId id) {
    switch (id) {
    case LemmaId::L5_1: return "L5_1";
    case LemmaId::L5_4: return "L5_4";
    case LemmaId::L5_5: return "L5_5";
    case LemmaId::L5_6: return "L5_6";
    case LemmaId::L5_7: return "L5_7";
    case LemmaId::L5_9: return "L5_9";
    }
    return "?";
}

struct ScalingFit {
    double a = 0.0, b = 0.0, c = 0.0;   // F(a,b;c;z)
    double expected_exponent = 0.0;     // c - a - b
    double fitted_slope = std::numeric_limits<double>::quiet_NaN();
    bool terminating = false;
    bool regular_bounded = true;
    bool passed = false;
    std::vector<double> eps;
    std::vector<double> singular;
};

struct ScalingReport {
    LemmaId lemma;
    std::vector<ScalingFit> fits;
    std::optional<double> leading_constant;        // L5_4 only: sqrt(pi) G(1-g) / (2 G(3/2-g))
    std::optional<double> leading_constant_limit;  // extrapolated lim_{z->1} F(1/2,g;3/2;z)
    bool passed = false;
};

namespace detail {

inline double series_near_one(double a, double b, double c, double eps) {
    const SeriesSum s = hyp2f1_series(a, b, c, 1.0 - eps, 200000000);
    if (!s.converged)
        throw ConvergenceError("scaling_law_check: direct series did not converge", s.value, s.abs_error);
    return s.value;
}

// Least-squares slope of y against x.
inline double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

inline ScalingFit fit_singular_exponent(double a, double b, double c, std::size_t samples, double slope_tol) {
    ScalingFit fit;
    fit.a = a;
    fit.b = b;
    fit.c = c;
    fit.expected_exponent = c - a - b;
    if (is_nonpositive_integer(a) || is_nonpositive_integer(b)) {
        fit.terminating = true;
        fit.passed = true;
        return fit;
    }
    const double s = c - a - b;
    // Regular part of the connection formula: G1 F(a,b;a+b-c+1;eps).
    const double g1 = gamma_fn(c) * gamma_fn(s) * inv_gamma(c - a) * inv_gamma(c - b);
    std::vector<double> lx, ly;
    double rmax = 0.0;
    for (std::size_t k = 0; k < samples; ++k) {
        const double frac = samples == 1 ? 0.0 : static_cast<double>(k) / static_cast<double>(samples - 1);
        const double eps = std::pow(10.0, -4.0 + 2.0 * frac);
        const double reg = g1 == 0.0 ? 0.0 : g1 * hyp2f1_series(a, b, 1.0 - s, eps).value;
        const double sing = series_near_one(a, b, c, eps) - reg;
        fit.eps.push_back(eps);
        fit.singular.push_back(sing);
        rmax = std::max(rmax, std::abs(reg));
        if (sing != 0.0 && std::isfinite(sing)) {
            lx.push_back(std::log(eps));
            ly.push_back(std::log(std::abs(sing)));
        }
    }
    fit.regular_bounded = std::isfinite(rmax) && rmax <= 10.0 * std::abs(g1) + 1.0;
    if (lx.size() >= 2)
        fit.fitted_slope = ls_slope(lx, ly);
    fit.passed = fit.regular_bounded && std::abs(fit.fitted_slope - fit.expected_exponent) <= slope_tol;
    return fit;
}

} // namespace detail

/// Fits the exponent of the singular part F(1-eps) - G1 F(a,b;a+b-c+1;eps)
/// over eps in [1e-4, 1e-2] for each hypergeometric function appearing in the
/// lemma, and compares it with c - a - b.
inline ScalingReport scaling_law_check(LemmaId id, const TricomiParams& p, std::size_t samples = 9,
                                       double slope_tol = 0.05) {
    if (samples < 3)
        throw DomainError("scaling_law_check: need at least 3 samples");
    const double g = p.gamma;
    const bool generic = g > 0.0 && g < 0.5;
    if (!generic && !(id == LemmaId::L5_7 && g == -1.0))
        throw DomainError("scaling_law_check: requires 0 < gamma < 1/2");

    ScalingReport rep{id, {}, std::nullopt, std::nullopt, false};
    auto add = [&](double a, double b, double c) {
        rep.fits.push_back(detail::fit_singular_exponent(a, b, c, samples, slope_tol));
    };
    switch (id) {
    case LemmaId::L5_1: add(g, g, 1.0); break;
    case LemmaId::L5_4: add(0.5, g, 1.5); break;
    case LemmaId::L5_5: add(0.5, g + 1.0, 1.5); break;
    case LemmaId::L5_6: add(0.5, 1.0 - g, 1.5); break;
    case LemmaId::L5_7: add(g + 1.0, g + 1.0, 2.0); break;
    case LemmaId::L5_9:
        add(0.5, 2.0 + g, 1.5);
        add(0.5, 2.0 - g, 1.5);
        break;
    }
    rep.passed = std::all_of(rep.fits.begin(), rep.fits.end(), [](const ScalingFit& f) { return f.passed; });

    if (id == LemmaId::L5_4) {
        const double s = 1.0 - g;
        rep.leading_constant = std::sqrt(std::numbers::pi) * gamma_fn(1.0 - g) / (2.0 * gamma_fn(1.5 - g));
        // F(1-eps) = Lim - C eps^s + D eps + O(eps^(1+s)); solve for Lim on three eps.
        const double e[3] = {1e-4, 1e-5, 1e-6};
        Eigen::Matrix3d A;
        Eigen::Vector3d rhs;
        for (int i = 0; i < 3; ++i) {
            A(i, 0) = 1.0;
            A(i, 1) = std::pow(e[i], s);
            A(i, 2) = e[i];
            rhs(i) = detail::series_near_one(0.5, g, 1.5, e[i]);
        }
        rep.leading_constant_limit = A.colPivHouseholderQr().solve(rhs)(0);
        const double rel = std::abs(*rep.leading_constant_limit - *rep.leading_constant) / *rep.leading_constant;
        rep.passed = rep.passed && rel <= 1e-6;
    }
    return rep;
}

} // namespace tricomi
