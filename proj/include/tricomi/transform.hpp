#pragma once

// Integral operators of the transform.
//
//   (K w)(x,t)  = int_0^t db int_0^{phi(t)-phi(b)} E(r,t;b) w(x,r;b) dr
//   (K0 v)(x,t) = 2^(2-2g) G(2g)/G(g)^2 int_0^1 v(x, phi(t) s) (1-s^2)^(g-1) ds
//   (K1 v)(x,t) = t 2^(2g) G(2-2g)/G(1-g)^2 int_0^1 v(x, phi(t) s) (1-s^2)^(-g) ds
//
// K is computed on b = t v, r = (phi(t)-phi(b)) u with a tensor tanh-sinh rule
// whose kernel-weighted nodes are built once per (ell, t) and reused for every
// x. K0 and K1 use Gauss-Jacobi rules carrying the (1-s)^exponent weight.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <utility>
#include <vector>

#include "tricomi/errors.hpp"
#include "tricomi/grid.hpp"
#include "tricomi/kernel.hpp"
#include "tricomi/params.hpp"
#include "tricomi/quadrature.hpp"
#include "tricomi/wave.hpp"

namespace tricomi {

struct QuadratureSpec {
    enum class Scheme { gauss_legendre, gauss_jacobi, tanh_sinh, adaptive };

    Scheme scheme = Scheme::adaptive;
    std::size_t nodes = 512;        // per-dimension node budget
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;
    double endpoint_exponent = 0.0; // weight (1-u)^exponent for integrate_with_spec

    void validate() const {
        if (nodes < 2)
            throw DomainError("QuadratureSpec: nodes must be >= 2");
        if (!(abs_tol > 0.0) || !(rel_tol > 0.0))
            throw DomainError("QuadratureSpec: tolerances must be positive");
    }
    double tolerance_for(double value) const { return std::max(abs_tol, rel_tol * std::abs(value)); }
};

struct TransformResult {
    double value = 0.0;
    double est_error = 0.0;
    std::size_t nodes_used = 0;
};

namespace detail {

inline constexpr double kPlanMinWeight = 1e-30;
inline constexpr int kPlanMinLevel = 3;

// Node count per dimension of a pruned tanh-sinh rule at the given level.
inline std::size_t tanh_sinh_count(int level) { return tanh_sinh_nodes(level, kPlanMinWeight).size(); }

inline int max_level_for_budget(std::size_t nodes) {
    int level = kPlanMinLevel;
    while (level < 12 && tanh_sinh_count(level + 1) <= nodes)
        ++level;
    return level;
}

// Error estimate from three nested levels.
inline double nested_estimate(double fine, double coarse, double coarser, double abs_sum) {
    const double d1 = std::abs(fine - coarse);
    const double d2 = std::abs(coarse - coarser);
    double est = d2 > 0.0 ? std::min(d1, d1 * d1 / d2) : d1;
    return std::max(est, 16.0 * std::numeric_limits<double>::epsilon() * abs_sum);
}

inline const GaussRule& cached_jacobi(std::size_t n, double alpha) {
    static std::mutex mu;
    static std::map<std::pair<std::size_t, double>, GaussRule> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(n, alpha);
    auto it = cache.find(key);
    if (it == cache.end())
        it = cache.emplace(key, gauss_jacobi(n, alpha, 0.0)).first;
    return it->second;
}

inline const GaussRule& cached_legendre(std::size_t n) { return cached_jacobi(n, 0.0); }

} // namespace detail

/// Kernel-weighted nodes of the K integral at fixed (ell, t). The integral of
/// w against the kernel is sum_j weight_j w(x, r_j, b_j).
class KTransformPlan {
public:
    struct Node {
        double b, r, weight;
        int first_level;
    };
    struct Sums {
        double fine = 0.0, coarse = 0.0, coarser = 0.0, abs_sum = 0.0;
    };

    /// Tensor tanh-sinh rule at the given level (nested estimate available).
    static KTransformPlan tanh_sinh(const TricomiParams& p, double t, int level) {
        KTransformPlan plan(p, t);
        plan.level_ = level;
        plan.nested_ = true;
        if (t == 0.0)
            return plan;
        const auto rule = tanh_sinh_nodes(level, detail::kPlanMinWeight);
        const KernelEvaluator E(p);
        const double phit = phi(p, t);
        for (const auto& nv : rule) {
            const double b = nv.u <= 0.5 ? t * nv.u : t - t * nv.uc;
            const double phib = phi(p, b);
            const double L = phit - phib;
            if (!(L > 0.0) || !(b > 0.0))
                continue;
            for (const auto& nu : rule) {
                const double e = E.at_fraction(phit, phib, nu.u, nu.uc);
                plan.nodes_.push_back({b, L * nu.u, nv.weight * nu.weight * t * L * e,
                                       std::max(nv.first_level, nu.first_level)});
            }
        }
        return plan;
    }

    /// Tensor Gauss-Legendre rule with n nodes per dimension. The coarse sum
    /// uses a separate n/2 rule.
    static KTransformPlan gauss_legendre(const TricomiParams& p, double t, std::size_t n) {
        KTransformPlan plan(p, t);
        plan.nested_ = false;
        if (t == 0.0)
            return plan;
        const KernelEvaluator E(p);
        const double phit = phi(p, t);
        auto add = [&](std::size_t m, int tag) {
            const GaussRule& g = detail::cached_legendre(m);
            for (std::size_t i = 0; i < m; ++i) {
                const double v = 0.5 * (g.nodes[i] + 1.0);
                const double b = t * v;
                const double phib = phi(p, b);
                const double L = phit - phib;
                for (std::size_t j = 0; j < m; ++j) {
                    const double u = 0.5 * (g.nodes[j] + 1.0), uc = 0.5 * (1.0 - g.nodes[j]);
                    const double e = E.at_fraction(phit, phib, u, uc);
                    plan.nodes_.push_back({b, L * u, 0.25 * g.weights[i] * g.weights[j] * t * L * e, tag});
                }
            }
        };
        add(n, 0);
        add(std::max<std::size_t>(2, n / 2), 1);
        return plan;
    }

    template <class W>
    Sums integrate(W&& w) const {
        Sums s;
        detail::CompensatedSum fine, coarse, coarser, abs_sum;
        for (const Node& nd : nodes_) {
            const double v = nd.weight * w(nd.r, nd.b);
            if (nested_) {
                fine.add(v);
                abs_sum.add(std::abs(v));
                if (nd.first_level <= level_ - 1)
                    coarse.add(4.0 * v);
                if (nd.first_level <= level_ - 2)
                    coarser.add(16.0 * v);
            } else if (nd.first_level == 0) {
                fine.add(v);
                abs_sum.add(std::abs(v));
            } else {
                coarse.add(v);
            }
        }
        s.fine = fine.value();
        s.coarse = coarse.value();
        s.coarser = nested_ ? coarser.value() : std::numeric_limits<double>::quiet_NaN();
        s.abs_sum = abs_sum.value();
        return s;
    }

    TransformResult evaluate(const BaseSolution& w, const Point& x) const {
        if (t_ == 0.0)
            return {0.0, 0.0, 0};
        const Sums s = integrate([&](double r, double b) { return w.eval(x, r, b); });
        const double est = nested_ ? detail::nested_estimate(s.fine, s.coarse, s.coarser, s.abs_sum)
                                   : std::abs(s.fine - s.coarse);
        return {s.fine, est, nodes_.size()};
    }

    double t() const { return t_; }
    int level() const { return level_; }
    std::size_t size() const { return nodes_.size(); }

private:
    KTransformPlan(const TricomiParams& p, double t) : p_(p), t_(t) {
        if (!(t >= 0.0))
            throw DomainError("apply_K: t must be >= 0");
    }

    TricomiParams p_;
    double t_;
    int level_ = 0;
    bool nested_ = true;
    std::vector<Node> nodes_;
};

/// Plan meeting q's tolerance for w at x. For the adaptive scheme the level is
/// raised until the estimate passes or the node budget is spent.
inline KTransformPlan plan_K(const BaseSolution& w, const TricomiParams& p, const Point& x, double t,
                             const QuadratureSpec& q) {
    q.validate();
    using S = QuadratureSpec::Scheme;
    switch (q.scheme) {
    case S::gauss_legendre:
        return KTransformPlan::gauss_legendre(p, t, q.nodes);
    case S::gauss_jacobi:
        throw UnsupportedError("apply_K: the Gauss-Jacobi scheme applies to K0 and K1 only");
    case S::tanh_sinh:
        return KTransformPlan::tanh_sinh(p, t, detail::max_level_for_budget(q.nodes));
    case S::adaptive:
        break;
    }
    const int top = detail::max_level_for_budget(q.nodes);
    for (int level = detail::kPlanMinLevel;; ++level) {
        KTransformPlan plan = KTransformPlan::tanh_sinh(p, t, level);
        const TransformResult r = plan.evaluate(w, x);
        if (r.est_error <= q.tolerance_for(r.value) || level >= top)
            return plan;
    }
}

/// Evaluates a plan sized at another point. Under the adaptive scheme the plan
/// is raised in level until x meets the tolerance or the budget is spent.
inline TransformResult evaluate_refining(KTransformPlan& plan, const BaseSolution& w, const TricomiParams& p,
                                         const Point& x, double t, const QuadratureSpec& q) {
    TransformResult r = plan.evaluate(w, x);
    if (q.scheme != QuadratureSpec::Scheme::adaptive)
        return r;
    const int top = detail::max_level_for_budget(q.nodes);
    for (int level = plan.level() + 1; !(r.est_error <= q.tolerance_for(r.value)) && level <= top; ++level) {
        plan = KTransformPlan::tanh_sinh(p, t, level);
        r = plan.evaluate(w, x);
    }
    return r;
}

inline TransformResult checked(const TransformResult& r, const QuadratureSpec& q, const char* who) {
    if (!(r.est_error <= q.tolerance_for(r.value)))
        throw ConvergenceError(std::string(who) + ": tolerance not met", r.value, r.est_error);
    return r;
}

inline TransformResult apply_K(const BaseSolution& w, const TricomiParams& p, const Point& x, double t,
                               const QuadratureSpec& q = {}) {
    if (!w.eval)
        throw DomainError("apply_K: empty base solution");
    if (!(t >= 0.0))
        throw DomainError("apply_K: t must be >= 0");
    if (t == 0.0)
        return {0.0, 0.0, 0};
    const KTransformPlan plan = plan_K(w, p, x, t, q);
    return checked(plan.evaluate(w, x), q, "apply_K");
}

/// K w at several x for one t, sharing the kernel-weighted nodes.
inline std::vector<TransformResult> apply_K_batch(const BaseSolution& w, const TricomiParams& p,
                                                  const std::vector<Point>& xs, double t,
                                                  const QuadratureSpec& q = {}) {
    std::vector<TransformResult> out;
    out.reserve(xs.size());
    if (xs.empty())
        return out;
    if (t == 0.0) {
        out.assign(xs.size(), TransformResult{});
        return out;
    }
    KTransformPlan plan = plan_K(w, p, xs.front(), t, q);
    for (const Point& x : xs)
        out.push_back(checked(evaluate_refining(plan, w, p, x, t, q), q, "apply_K"));
    return out;
}

/// (K w)(x,t) as a function of (x,t), building one plan per distinct t.
/// Not safe for concurrent calls.
class KTransformFunction {
public:
    KTransformFunction(BaseSolution w, const TricomiParams& p, const QuadratureSpec& q = {}, const Point& ref = {})
        : w_(std::move(w)), p_(p), q_(q), ref_(ref) {
        if (!w_.eval)
            throw DomainError("KTransformFunction: empty base solution");
    }

    TransformResult result(const Point& x, double t) const {
        if (!(t >= 0.0))
            throw DomainError("apply_K: t must be >= 0");
        if (t == 0.0)
            return {0.0, 0.0, 0};
        auto it = cache_.find(t);
        if (it == cache_.end())
            it = cache_.emplace(t, plan_K(w_, p_, ref_, t, q_)).first;
        return checked(evaluate_refining(it->second, w_, p_, x, t, q_), q_, "apply_K");
    }

    double operator()(const Point& x, double t) const { return result(x, t).value; }

private:
    BaseSolution w_;
    TricomiParams p_;
    QuadratureSpec q_;
    Point ref_;
    mutable std::map<double, KTransformPlan> cache_;
};

inline GridFunction transform_on_grid(const BaseSolution& w, const TricomiParams& p, const Grid1D& grid,
                                      const QuadratureSpec& q = {}) {
    grid.validate();
    GridFunction u(grid);
    std::vector<Point> xs(grid.nx);
    for (std::size_t i = 0; i < grid.nx; ++i)
        xs[i] = {grid.x(i), 0.0, 0.0};
    for (std::size_t n = 0; n < grid.nt; ++n) {
        const auto row = apply_K_batch(w, p, xs, grid.t(n), q);
        for (std::size_t i = 0; i < grid.nx; ++i)
            u.at(i, n) = row[i].value;
    }
    return u;
}

/// Base solution w + r h(x,b): same equation when A h = 0, first trace h.
inline BaseSolution add_odd_trace(const BaseSolution& w, std::function<double(const Point&, double)> h) {
    if (!h)
        throw DomainError("add_odd_trace: empty trace");
    BaseSolution out = w;
    auto base = w.eval;
    out.eval = [base, h](const Point& x, double r, double b) { return base(x, r, b) + r * h(x, b); };
    out.trace1 = h;
    return out;
}

/// c phi'(t)^2 int_0^t (phi(t)+phi(b))^(-2g) F(g,g;1;((phi(t)-phi(b))/(phi(t)+phi(b)))^2) h(x,b) db,
/// the extra source produced by a base solution with first trace h.
inline TransformResult source_residual_term(const std::function<double(const Point&, double)>& h,
                                            const TricomiParams& p, const Point& x, double t,
                                            const QuadratureSpec& q = {}) {
    q.validate();
    if (!h)
        throw DomainError("source_residual_term: empty trace");
    if (!(t >= 0.0))
        throw DomainError("source_residual_term: t must be >= 0");
    if (t == 0.0)
        return {0.0, 0.0, 0};
    const KernelEvaluator E(p);
    const double phit = phi(p, t);
    const double scale = std::pow(t, p.ell) * t;
    auto integrand = [&](double v, double vc) {
        const double b = v <= 0.5 ? t * v : t - t * vc;
        return E.at_zero_r(phit, phi(p, b)) * h(x, b);
    };
    QuadTolerance tol;
    tol.abs_tol = q.abs_tol / std::max(scale, 1e-300);
    tol.rel_tol = q.rel_tol;
    const QuadResult r = integrate_unit_tanh_sinh(integrand, tol);
    const TransformResult out{scale * r.value, scale * r.est_error, r.evaluations};
    if (!r.converged)
        throw ConvergenceError("source_residual_term: tolerance not met", out.value, out.est_error);
    return out;
}

using Evaluator = std::function<double(const Point&, double)>;   // v(x, tau)

inline Evaluator as_evaluator(const BaseSolution& w) {
    if (!w.eval)
        throw DomainError("as_evaluator: empty base solution");
    auto e = w.eval;
    return [e](const Point& x, double tau) { return e(x, tau, 0.0); };
}

namespace detail {

// int_0^1 g(s) (1-s^2)^a ds for a > -1, following q.scheme.
inline TransformResult weighted_unit_integral(const std::function<double(double)>& g, double a,
                                              const QuadratureSpec& q) {
    using S = QuadratureSpec::Scheme;
    auto jacobi = [&](std::size_t n) {
        // s = (1+y)/2: (1-s^2)^a ds = 2^(-a-1) (1-y)^a (1+s)^a dy.
        const GaussRule& rule = cached_jacobi(n, a);
        CompensatedSum acc;
        for (std::size_t i = 0; i < n; ++i) {
            const double s = 0.5 * (1.0 + rule.nodes[i]);
            acc.add(rule.weights[i] * g(s) * std::pow(1.0 + s, a));
        }
        return std::pow(2.0, -a - 1.0) * acc.value();
    };
    switch (q.scheme) {
    case S::gauss_jacobi: {
        const double fine = jacobi(q.nodes), coarse = jacobi(std::max<std::size_t>(2, q.nodes / 2));
        return {fine, std::abs(fine - coarse), q.nodes};
    }
    case S::adaptive: {
        double prev = jacobi(8);
        std::size_t used = 8;
        for (std::size_t n = 16;; n *= 2) {
            const double cur = jacobi(n);
            used += n;
            const double est = std::max(std::abs(cur - prev), 16.0 * std::numeric_limits<double>::epsilon() * std::abs(cur));
            if (est <= q.tolerance_for(cur) || 2 * n > q.nodes)
                return {cur, est, used};
            prev = cur;
        }
    }
    case S::tanh_sinh: {
        QuadTolerance tol;
        tol.abs_tol = q.abs_tol;
        tol.rel_tol = q.rel_tol;
        const QuadResult r = integrate_unit_tanh_sinh(
            [&](double s, double sc) { return g(s) * std::pow(sc * (1.0 + s), a); }, tol);
        return {r.value, r.est_error, r.evaluations};
    }
    case S::gauss_legendre: {
        const auto plain = [&](std::size_t n) {
            const GaussRule& rule = cached_legendre(n);
            CompensatedSum acc;
            for (std::size_t i = 0; i < n; ++i) {
                const double s = 0.5 * (1.0 + rule.nodes[i]);
                const double sc = 0.5 * (1.0 - rule.nodes[i]);
                acc.add(0.5 * rule.weights[i] * g(s) * std::pow(sc * (1.0 + s), a));
            }
            return acc.value();
        };
        const double fine = plain(q.nodes), coarse = plain(std::max<std::size_t>(2, q.nodes / 2));
        return {fine, std::abs(fine - coarse), q.nodes};
    }
    }
    throw DomainError("unknown quadrature scheme");
}

} // namespace detail

inline TransformResult apply_K0(const Evaluator& v, const TricomiParams& p, const Point& x, double t,
                                const QuadratureSpec& q = {}) {
    q.validate();
    if (!(p.gamma > 0.0))
        throw DomainError("apply_K0: requires gamma > 0 (ell > 0)");
    if (!(t >= 0.0))
        throw DomainError("apply_K0: t must be >= 0");
    if (t == 0.0)
        return {v(x, 0.0), 0.0, 1};
    const double g = p.gamma;
    const double pref = std::pow(2.0, 2.0 - 2.0 * g) * gamma_fn(2.0 * g) / (gamma_fn(g) * gamma_fn(g));
    const double phit = phi(p, t);
    const TransformResult r =
        detail::weighted_unit_integral([&](double s) { return v(x, phit * s); }, g - 1.0, q);
    return checked({pref * r.value, pref * r.est_error, r.nodes_used}, q, "apply_K0");
}

inline TransformResult apply_K1(const Evaluator& v, const TricomiParams& p, const Point& x, double t,
                                const QuadratureSpec& q = {}) {
    q.validate();
    if (!(p.gamma < 1.0))
        throw DomainError("apply_K1: requires gamma < 1");
    if (!(t >= 0.0))
        throw DomainError("apply_K1: t must be >= 0");
    if (t == 0.0)
        return {0.0, 0.0, 1};
    const double g = p.gamma;
    const double g1 = gamma_fn(1.0 - g);
    const double pref = t * std::pow(2.0, 2.0 * g) * gamma_fn(2.0 - 2.0 * g) / (g1 * g1);
    const double phit = phi(p, t);
    const TransformResult r = detail::weighted_unit_integral([&](double s) { return v(x, phit * s); }, -g, q);
    return checked({pref * r.value, std::abs(pref) * r.est_error, r.nodes_used}, q, "apply_K1");
}

/// u = K0 v0 + K1 v1, the solution with u(x,0) = v0(x,0), u_t(x,0) = v1(x,0).
inline TransformResult solve_cauchy(const BaseSolution& v0, const BaseSolution& v1, const TricomiParams& p,
                                    const Point& x, double t, const QuadratureSpec& q = {}) {
    if (!(p.ell > 0.0))
        throw DomainError("solve_cauchy: requires ell > 0");
    const TransformResult a = apply_K0(as_evaluator(v0), p, x, t, q);
    const TransformResult b = apply_K1(as_evaluator(v1), p, x, t, q);
    return {a.value + b.value, a.est_error + b.est_error, a.nodes_used + b.nodes_used};
}

/// int_0^1 g(u) (1-u)^q.endpoint_exponent du following q.scheme.
inline TransformResult integrate_with_spec(const std::function<double(double)>& g, const QuadratureSpec& q) {
    q.validate();
    const double a = q.endpoint_exponent;
    if (!(a > -1.0))
        throw DomainError("integrate_with_spec: endpoint exponent must exceed -1");
    // (1-u)^a = (1-u^2)^a (1+u)^(-a)
    return detail::weighted_unit_integral([&](double u) { return g(u) * std::pow(1.0 + u, -a); }, a, q);
}

} // namespace tricomi
