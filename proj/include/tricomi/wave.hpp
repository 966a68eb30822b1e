#pragma once

// Solutions w(x,r;b) of the base equation w_rr - A w = 0 with w(x,0;b) = f(x,b)
// and w_r(x,0;b) = 0, for A the Laplacian in one, two or three dimensions.
// Also the ODE oracle for separable Tricomi solutions u = cos(k x) U(t).

#include <algorithm>
#include <array>
#include <cmath>
#include <exception>
#include <functional>
#include <limits>
#include <memory>
#include <numbers>
#include <string>
#include <vector>

#include <boost/numeric/odeint.hpp>

#include "tricomi/errors.hpp"
#include "tricomi/params.hpp"
#include "tricomi/quadrature.hpp"

namespace tricomi {

using Point = std::array<double, 3>;
using Gradient = std::array<double, 3>;

struct SourceProfile {
    std::function<double(const Point&, double)> f;
    // Optional spatial gradient of f; used by the spherical-mean solutions in
    // place of a finite difference in r.
    std::function<Gradient(const Point&, double)> grad;
};

struct BaseSolution {
    std::function<double(const Point&, double, double)> eval;   // (x, r, b)
    std::function<double(const Point&, double)> trace0;          // w(x, 0; b)
    std::function<double(const Point&, double)> trace1;          // w_r(x, 0; b)
    int dim = 1;
};

namespace detail {

inline double zero_trace(const Point&, double) { return 0.0; }

inline void require_profile(const SourceProfile& f, const char* who) {
    if (!f.f)
        throw DomainError(std::string(who) + ": empty source profile");
}

// d/dr of m at r by the fourth-order centered difference; one-sided near r = 0
// is avoided by using the evenness of spherical means in r.
template <class M>
double mean_derivative(M&& m, double r) {
    const double h = 1e-3 * std::max(1.0, std::abs(r));
    return (-m(r + 2.0 * h) + 8.0 * m(r + h) - 8.0 * m(r - h) + m(r - 2.0 * h)) / (12.0 * h);
}

} // namespace detail

inline BaseSolution dalembert_1d(SourceProfile f) {
    detail::require_profile(f, "dalembert_1d");
    BaseSolution w;
    auto ff = f.f;
    w.eval = [ff](const Point& x, double r, double b) {
        return 0.5 * (ff({x[0] + r, 0.0, 0.0}, b) + ff({x[0] - r, 0.0, 0.0}, b));
    };
    w.trace0 = [ff](const Point& x, double b) { return ff({x[0], 0.0, 0.0}, b); };
    w.trace1 = detail::zero_trace;
    w.dim = 1;
    return w;
}

/// Unit-sphere rule: Gauss-Legendre in cos(theta) times the trapezoid rule in
/// the azimuth. Weights sum to 1 (mean value).
struct SphereRule {
    std::vector<Point> dirs;
    std::vector<double> weights;
};

inline SphereRule sphere_rule(std::size_t n) {
    if (n < 2)
        throw DomainError("sphere_rule: n must be >= 2");
    const GaussRule gl = gauss_legendre(n);
    const std::size_t nphi = 2 * n;
    SphereRule s;
    for (std::size_t i = 0; i < n; ++i) {
        const double ct = gl.nodes[i];
        const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
        for (std::size_t j = 0; j < nphi; ++j) {
            const double ph = 2.0 * std::numbers::pi * (static_cast<double>(j) + 0.5) / static_cast<double>(nphi);
            s.dirs.push_back({st * std::cos(ph), st * std::sin(ph), ct});
            s.weights.push_back(gl.weights[i] / (2.0 * static_cast<double>(nphi)));
        }
    }
    return s;
}

/// Unit-disk rule for the weight 1/(2 pi sqrt(1-|y|^2)) after the substitution
/// u = sqrt(1 - rho^2), which turns rho drho / sqrt(1-rho^2) into du. Weights
/// are rescaled so that the rule integrates 1 exactly.
struct DiskRule {
    std::vector<Point> points;
    std::vector<double> weights;
};

inline DiskRule disk_rule(std::size_t n) {
    if (n < 2)
        throw DomainError("disk_rule: n must be >= 2");
    const GaussRule gl = gauss_legendre(n);
    const std::size_t nphi = 2 * n;
    DiskRule d;
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double u = 0.5 * (gl.nodes[i] + 1.0);
        const double rho = std::sqrt(std::max(0.0, 1.0 - u * u));
        for (std::size_t j = 0; j < nphi; ++j) {
            const double ph = 2.0 * std::numbers::pi * (static_cast<double>(j) + 0.5) / static_cast<double>(nphi);
            const double w = 0.5 * gl.weights[i] / static_cast<double>(nphi);
            d.points.push_back({rho * std::cos(ph), rho * std::sin(ph), 0.0});
            d.weights.push_back(w);
            total += w;
        }
    }
    for (double& w : d.weights)
        w /= total;
    return d;
}

/// w = d/dr [ r M(x,r) ], M the mean of f(x + r y) over the unit sphere.
inline BaseSolution kirchhoff_3d(SourceProfile f, std::size_t nodes = 24) {
    detail::require_profile(f, "kirchhoff_3d");
    auto rule = std::make_shared<const SphereRule>(sphere_rule(nodes));
    auto ff = f.f;
    auto gg = f.grad;
    auto mean = [ff, rule](const Point& x, double r, double b) {
        detail::CompensatedSum acc;
        for (std::size_t i = 0; i < rule->dirs.size(); ++i) {
            const Point& y = rule->dirs[i];
            acc.add(rule->weights[i] * ff({x[0] + r * y[0], x[1] + r * y[1], x[2] + r * y[2]}, b));
        }
        return acc.value();
    };
    BaseSolution w;
    w.eval = [mean, gg, rule](const Point& x, double r, double b) {
        const double m = mean(x, r, b);
        if (r == 0.0)
            return m;
        double dm;
        if (gg) {
            detail::CompensatedSum acc;
            for (std::size_t i = 0; i < rule->dirs.size(); ++i) {
                const Point& y = rule->dirs[i];
                const Gradient g = gg({x[0] + r * y[0], x[1] + r * y[1], x[2] + r * y[2]}, b);
                acc.add(rule->weights[i] * (g[0] * y[0] + g[1] * y[1] + g[2] * y[2]));
            }
            dm = acc.value();
        } else {
            dm = detail::mean_derivative([&](double s) { return mean(x, s, b); }, r);
        }
        return m + r * dm;
    };
    w.trace0 = [ff](const Point& x, double b) { return ff(x, b); };
    w.trace1 = detail::zero_trace;
    w.dim = 3;
    return w;
}

/// w = d/dr [ r N(x,r) ], N the weighted disk mean
/// (1/2pi) int_{|y|<1} f(x + r y) / sqrt(1-|y|^2) dy.
inline BaseSolution poisson_2d(SourceProfile f, std::size_t nodes = 32) {
    detail::require_profile(f, "poisson_2d");
    auto rule = std::make_shared<const DiskRule>(disk_rule(nodes));
    auto ff = f.f;
    auto gg = f.grad;
    auto mean = [ff, rule](const Point& x, double r, double b) {
        detail::CompensatedSum acc;
        for (std::size_t i = 0; i < rule->points.size(); ++i) {
            const Point& y = rule->points[i];
            acc.add(rule->weights[i] * ff({x[0] + r * y[0], x[1] + r * y[1], x[2]}, b));
        }
        return acc.value();
    };
    BaseSolution w;
    w.eval = [mean, gg, rule](const Point& x, double r, double b) {
        const double m = mean(x, r, b);
        if (r == 0.0)
            return m;
        double dm;
        if (gg) {
            detail::CompensatedSum acc;
            for (std::size_t i = 0; i < rule->points.size(); ++i) {
                const Point& y = rule->points[i];
                const Gradient g = gg({x[0] + r * y[0], x[1] + r * y[1], x[2]}, b);
                acc.add(rule->weights[i] * (g[0] * y[0] + g[1] * y[1]));
            }
            dm = acc.value();
        } else {
            dm = detail::mean_derivative([&](double s) { return mean(x, s, b); }, r);
        }
        return m + r * dm;
    };
    w.trace0 = [ff](const Point& x, double b) { return ff(x, b); };
    w.trace1 = detail::zero_trace;
    w.dim = 2;
    return w;
}

/// w = cos(k x) cos(k r) g(b), x the first coordinate.
inline BaseSolution separable_solution(double k, std::function<double(double)> g) {
    if (!std::isfinite(k))
        throw DomainError("separable_solution: k must be finite");
    if (!g)
        throw DomainError("separable_solution: empty g");
    BaseSolution w;
    w.eval = [k, g](const Point& x, double r, double b) { return std::cos(k * x[0]) * std::cos(k * r) * g(b); };
    w.trace0 = [k, g](const Point& x, double b) { return std::cos(k * x[0]) * g(b); };
    w.trace1 = detail::zero_trace;
    w.dim = 1;
    return w;
}

enum class OdeMethod { dopri5, fehlberg78 };

/// U'' + k^2 t^ell U = g(t), U(0) = u0, U'(0) = u1.
struct SeparableOde {
    TricomiParams p;
    double k = 1.0;
    std::function<double(double)> g;
    double u0 = 0.0;
    double u1 = 0.0;
};

/// (U(t), U'(t)) by an adaptive embedded Runge-Kutta pair. For ell < 0 the
/// coefficient is singular at t = 0; integration then starts at a small t0
/// from the leading terms of the zero-data series solution.
inline std::array<double, 2> solve_separable_ode(const SeparableOde& ode, double t, double tol,
                                                  OdeMethod method = OdeMethod::dopri5) {
    namespace odeint = boost::numeric::odeint;
    using State = std::array<double, 2>;
    if (!ode.g)
        throw DomainError("solve_separable_ode: empty g");
    if (!(t >= 0.0))
        throw DomainError("solve_separable_ode: t must be >= 0");
    if (!(tol > 0.0))
        throw DomainError("solve_separable_ode: tol must be positive");
    const double ell = ode.p.ell, k2 = ode.k * ode.k;

    double t0 = 0.0;
    State y{ode.u0, ode.u1};
    if (ell < 0.0) {
        if (ode.u0 != 0.0 || ode.u1 != 0.0)
            throw UnsupportedError("solve_separable_ode: nonzero data with ell < 0");
        t0 = std::min(1e-6, t);
        const double g0 = ode.g(0.0);
        y[0] = g0 * t0 * t0 / 2.0 - k2 * g0 * std::pow(t0, ell + 4.0) / (2.0 * (ell + 3.0) * (ell + 4.0));
        y[1] = g0 * t0 - k2 * g0 * std::pow(t0, ell + 3.0) / (2.0 * (ell + 3.0));
    }
    if (t <= t0)
        return t == 0.0 ? State{ode.u0, ode.u1} : y;

    auto rhs = [&](const State& s, State& ds, double tt) {
        ds[0] = s[1];
        ds[1] = ode.g(tt) - k2 * std::pow(tt, ell) * s[0];
    };
    const double dt0 = std::min(1e-4, (t - t0) / 16.0);
    try {
        if (method == OdeMethod::dopri5) {
            auto stepper = odeint::make_controlled(tol, tol, odeint::runge_kutta_dopri5<State>());
            odeint::integrate_adaptive(stepper, rhs, y, t0, t, dt0);
        } else {
            auto stepper = odeint::make_controlled(tol, tol, odeint::runge_kutta_fehlberg78<State>());
            odeint::integrate_adaptive(stepper, rhs, y, t0, t, dt0);
        }
    } catch (const std::exception& e) {
        throw ConvergenceError(std::string("solve_separable_ode: step control failed near t = 0: ") + e.what(),
                               y[0], std::numeric_limits<double>::infinity());
    }
    if (!std::isfinite(y[0]) || !std::isfinite(y[1]))
        throw ConvergenceError("solve_separable_ode: non-finite solution", y[0],
                               std::numeric_limits<double>::infinity());
    return y;
}

/// U for the zero-data problem U'' + k^2 t^ell U = g, on [0, t_max].
inline std::function<double(double)> ode_oracle_separable(const TricomiParams& p, double k,
                                                          std::function<double(double)> g, double t_max,
                                                          double tol, OdeMethod method = OdeMethod::dopri5) {
    if (!(t_max > 0.0))
        throw DomainError("ode_oracle_separable: t_max must be positive");
    SeparableOde ode{p, k, std::move(g), 0.0, 0.0};
    return [ode, t_max, tol, method](double t) {
        if (!(t >= 0.0 && t <= t_max))
            throw DomainError("ode_oracle_separable: t outside [0, t_max]");
        return solve_separable_ode(ode, t, tol, method)[0];
    };
}

} // namespace tricomi
