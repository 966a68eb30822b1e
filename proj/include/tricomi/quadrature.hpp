#pragma once

// Quadrature rules used by the transform and the oracles.
//
//   gauss_legendre(n)            n-point rule on [-1, 1] by Newton iteration
//   gauss_jacobi(n, a, b)        weight (1-x)^a (1+x)^b on [-1, 1], Golub-Welsch
//   tanh_sinh_nodes(level, ...)  double-exponential nodes on [0, 1] with exact
//                                complements 1-u, nested across levels
//   integrate_tanh_sinh(...)     level-doubling driver with an error estimate

#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <vector>

#include <Eigen/Eigenvalues>

#include "tricomi/errors.hpp"
#include "tricomi/specfun.hpp"

namespace tricomi {

struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;

    std::size_t size() const { return nodes.size(); }
};

namespace detail {

// P_n(x) and P_n'(x) by the three-term recurrence.
inline void legendre_pair(std::size_t n, double x, double& p, double& dp) {
    double p0 = 1.0, p1 = x;
    for (std::size_t k = 2; k <= n; ++k) {
        const double kd = static_cast<double>(k);
        const double p2 = ((2.0 * kd - 1.0) * x * p1 - (kd - 1.0) * p0) / kd;
        p0 = p1;
        p1 = p2;
    }
    p = p1;
    dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
}

} // namespace detail

inline GaussRule gauss_legendre(std::size_t n) {
    if (n < 2)
        throw DomainError("gauss_legendre: n must be >= 2");
    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const double nd = static_cast<double>(n);
    for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (nd + 0.5));
        double p = 0.0, dp = 1.0;
        for (int it = 0; it < 100; ++it) {
            detail::legendre_pair(n, x, p, dp);
            const double dx = p / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16)
                break;
        }
        detail::legendre_pair(n, x, p, dp);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1)
        rule.nodes[n / 2] = 0.0;
    return rule;
}

/// Nodes and weights for int_{-1}^{1} f(x) (1-x)^alpha (1+x)^beta dx.
inline GaussRule gauss_jacobi(std::size_t n, double alpha, double beta) {
    if (n < 1)
        throw DomainError("gauss_jacobi: n must be >= 1");
    if (!(alpha > -1.0 && beta > -1.0))
        throw DomainError("gauss_jacobi: exponents must exceed -1");

    const double ab = alpha + beta;
    Eigen::VectorXd diag(static_cast<Eigen::Index>(n));
    Eigen::VectorXd off(static_cast<Eigen::Index>(n > 1 ? n - 1 : 1));
    diag(0) = (beta - alpha) / (ab + 2.0);
    for (std::size_t k = 1; k < n; ++k) {
        const double kd = static_cast<double>(k);
        const double s = 2.0 * kd + ab;
        diag(static_cast<Eigen::Index>(k)) = (beta * beta - alpha * alpha) / (s * (s + 2.0));
        double b2;
        if (k == 1)
            b2 = 4.0 * (1.0 + alpha) * (1.0 + beta) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab));
        else
            b2 = 4.0 * kd * (kd + alpha) * (kd + beta) * (kd + ab) / (s * s * (s + 1.0) * (s - 1.0));
        off(static_cast<Eigen::Index>(k - 1)) = std::sqrt(b2);
    }

    const double mu0 = std::pow(2.0, ab + 1.0) * gamma_fn(alpha + 1.0) * gamma_fn(beta + 1.0) /
                       gamma_fn(ab + 2.0);
    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    if (n == 1) {
        rule.nodes[0] = diag(0);
        rule.weights[0] = mu0;
        return rule;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, off, Eigen::ComputeEigenvectors);
    for (std::size_t i = 0; i < n; ++i) {
        const auto ii = static_cast<Eigen::Index>(i);
        const double v0 = es.eigenvectors()(0, ii);
        rule.nodes[i] = es.eigenvalues()(ii);
        rule.weights[i] = mu0 * v0 * v0;
    }
    return rule;
}

struct TanhSinhNode {
    double u;          // abscissa in (0, 1)
    double uc;         // 1 - u, accurate near u = 1
    double weight;     // includes the step h
    int first_level;   // coarsest level containing this node
};

namespace detail {

inline constexpr double kTanhSinhTmax = 6.5;

// Node at t = m h on [0, 1]; returns false when it underflows.
inline bool tanh_sinh_point(double t, double& u, double& uc, double& dudt) {
    const double q = std::numbers::pi / 2.0 * std::sinh(t);
    const double e = std::exp(-2.0 * std::abs(q));
    const double small = e / (1.0 + e);
    const double large = 1.0 / (1.0 + e);
    dudt = std::numbers::pi / 2.0 * std::cosh(t) * 2.0 * e / ((1.0 + e) * (1.0 + e));
    if (q >= 0.0) {
        u = large;
        uc = small;
    } else {
        u = small;
        uc = large;
    }
    return small > 0.0 && dudt > 0.0 && u > 0.0 && uc > 0.0;
}

inline int trailing_level(long m, int level) {
    if (m == 0)
        return 0;
    int k = level;
    while (k > 0 && m % 2 == 0) {
        m /= 2;
        --k;
    }
    return k;
}

} // namespace detail

/// Full node set on [0, 1] at step h = 2^-level. Nodes whose weight falls below
/// min_weight are dropped, which is only safe for integrands bounded at the
/// endpoints.
inline std::vector<TanhSinhNode> tanh_sinh_nodes(int level, double min_weight = 0.0) {
    if (level < 0 || level > 20)
        throw DomainError("tanh_sinh_nodes: level must be in [0, 20]");
    const double h = std::ldexp(1.0, -level);
    const long mmax = static_cast<long>(std::ceil(detail::kTanhSinhTmax / h));
    std::vector<TanhSinhNode> out;
    out.reserve(static_cast<std::size_t>(2 * mmax + 1));
    for (long m = -mmax; m <= mmax; ++m) {
        double u, uc, dudt;
        if (!detail::tanh_sinh_point(static_cast<double>(m) * h, u, uc, dudt))
            continue;
        const double w = h * dudt;
        if (w < min_weight)
            continue;
        out.push_back({u, uc, w, detail::trailing_level(m, level)});
    }
    return out;
}

struct QuadResult {
    double value = 0.0;
    double est_error = 0.0;
    std::size_t evaluations = 0;
    int level = 0;
    bool converged = false;
};

struct QuadTolerance {
    double abs_tol = 1e-13;
    double rel_tol = 1e-12;
    int min_level = 3;
    int max_level = 12;
};

/// int_0^1 f(u, 1-u) du by tanh-sinh, halving the step until the estimated
/// error meets the tolerance. Endpoint singularities of f are allowed.
template <class F>
QuadResult integrate_unit_tanh_sinh(F&& f, const QuadTolerance& tol = {}) {
    if (!(tol.abs_tol > 0.0) || !(tol.rel_tol > 0.0))
        throw DomainError("integrate_unit_tanh_sinh: tolerances must be positive");

    QuadResult res;
    double raw = 0.0;
    double prev = 0.0, prev2 = 0.0;
    for (int level = 0; level <= tol.max_level; ++level) {
        const double h = std::ldexp(1.0, -level);
        const long mmax = static_cast<long>(std::ceil(detail::kTanhSinhTmax / h));
        detail::CompensatedSum acc;
        for (long m = -mmax; m <= mmax; ++m) {
            if (level > 0 && m % 2 == 0)
                continue;
            double u, uc, dudt;
            if (!detail::tanh_sinh_point(static_cast<double>(m) * h, u, uc, dudt))
                continue;
            acc.add(dudt * f(u, uc));
            ++res.evaluations;
        }
        raw += acc.value();
        const double s = h * raw;

        double est = std::numeric_limits<double>::infinity();
        if (level >= 2) {
            const double d1 = std::abs(s - prev);
            const double d2 = std::abs(prev - prev2);
            est = d2 > 0.0 ? std::min(d1, d1 * d1 / d2) : d1;
            est = std::max(est, 8.0 * std::numeric_limits<double>::epsilon() * std::abs(s));
        }
        prev2 = prev;
        prev = s;
        res.value = s;
        res.est_error = est;
        res.level = level;
        if (!std::isfinite(s))
            throw SingularityError("integrate_unit_tanh_sinh: non-finite integrand value");
        if (level >= tol.min_level && est <= std::max(tol.abs_tol, tol.rel_tol * std::abs(s))) {
            res.converged = true;
            return res;
        }
    }
    return res;
}

/// int_a^b f(x) dx by tanh-sinh.
template <class F>
QuadResult integrate_tanh_sinh(F&& f, double a, double b, const QuadTolerance& tol = {}) {
    const double len = b - a;
    QuadResult r = integrate_unit_tanh_sinh(
        [&](double u, double uc) { return u <= 0.5 ? f(a + len * u) : f(b - len * uc); }, tol);
    r.value *= len;
    r.est_error *= std::abs(len);
    return r;
}

/// Same as integrate_tanh_sinh but raises ConvergenceError when the tolerance
/// is not met.
template <class F>
QuadResult integrate_checked(F&& f, double a, double b, const QuadTolerance& tol = {}) {
    QuadResult r = integrate_tanh_sinh(std::forward<F>(f), a, b, tol);
    if (!r.converged)
        throw ConvergenceError("tanh-sinh quadrature did not reach tolerance", r.value, r.est_error);
    return r;
}

template <class F>
double integrate_gauss(const GaussRule& rule, double a, double b, F&& f) {
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    detail::CompensatedSum acc;
    for (std::size_t i = 0; i < rule.size(); ++i)
        acc.add(rule.weights[i] * f(mid + half * rule.nodes[i]));
    return half * acc.value();
}

} // namespace tricomi
