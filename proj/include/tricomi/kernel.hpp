#pragma once

// Kernel E(r,t;b;gamma) = c alpha F(gamma,gamma;1;beta) with
//   D     = (phi(t)+phi(b))^2 - r^2
//   alpha = D^(-gamma)
//   beta  = ((phi(t)-phi(b))^2 - r^2) / D,   1 - beta = 4 phi(t) phi(b) / D
// and its closed-form derivatives in t and r.

#include <algorithm>
#include <cmath>

#include "tricomi/errors.hpp"
#include "tricomi/params.hpp"
#include "tricomi/specfun.hpp"

namespace tricomi {

struct KernelPoint {
    double t = 1.0;
    double b = 0.5;
    double r = 0.0;
};

struct AlphaBeta {
    double alpha;
    double beta;
    double one_minus_beta;
};

struct Lemma22Derivatives {
    double alpha_t, alpha_tt, beta_t, beta_tt;
    double alpha_r, alpha_rr, beta_r, beta_rr;
};

struct Lemma23Coefficients {
    double I, J, Y, G;
    double z;
};

struct PdeResidual {
    double residual;
    double e_tt;
    double e_rr;
    double h;
};

namespace detail {

struct KernelGeometry {
    double phit, phib, S, D;
};

inline KernelGeometry kernel_geometry(const TricomiParams& p, const KernelPoint& k) {
    if (!std::isfinite(k.t) || !std::isfinite(k.b) || !std::isfinite(k.r))
        throw DomainError("kernel: non-finite point");
    if (!(k.b > 0.0 && k.b < k.t))
        throw DomainError("kernel: requires 0 < b < t");
    if (!(k.r >= 0.0))
        throw DomainError("kernel: requires r >= 0");
    const double phit = phi(p, k.t), phib = phi(p, k.b);
    const double S = phit + phib;
    const double D = (S - k.r) * (S + k.r);
    if (D == 0.0)
        throw SingularityError("kernel: r = phi(t) + phi(b)");
    if (D < 0.0)
        throw DomainError("kernel: r > phi(t) + phi(b) is not supported");
    return {phit, phib, S, D};
}

} // namespace detail

inline AlphaBeta alpha_beta(const TricomiParams& p, const KernelPoint& k) {
    const auto g = detail::kernel_geometry(p, k);
    const double L = g.phit - g.phib;
    const double omb = 4.0 * g.phit * g.phib / g.D;
    return {std::pow(g.D, -p.gamma), (L - k.r) * (L + k.r) / g.D, omb};
}

/// Kernel evaluator with the hypergeometric branch constants cached for a
/// fixed ell. Used inside quadratures.
class KernelEvaluator {
public:
    explicit KernelEvaluator(const TricomiParams& p) : p_(p), F_(p.gamma, p.gamma, 1.0) {}

    const TricomiParams& params() const { return p_; }

    double operator()(const KernelPoint& k) const {
        const auto g = detail::kernel_geometry(p_, k);
        if (p_.gamma == 0.0)
            return p_.c;
        const double L = g.phit - g.phib;
        const double beta = (L - k.r) * (L + k.r) / g.D;
        const double omb = 4.0 * g.phit * g.phib / g.D;
        return p_.c * std::pow(g.D, -p_.gamma) * F_.eval(beta, omb);
    }

    /// Kernel at r = (phit - phib) u for u in [0, 1], with uc = 1 - u supplied
    /// separately so that beta keeps full precision near u = 1.
    double at_fraction(double phit, double phib, double u, double uc) const {
        if (p_.gamma == 0.0)
            return p_.c;
        const double L = phit - phib;
        const double r = L * u;
        const double S = phit + phib;
        const double D = (2.0 * phib + L * uc) * (S + r);
        const double beta = L * uc * (L + r) / D;
        const double omb = 4.0 * phit * phib / D;
        return p_.c * std::pow(D, -p_.gamma) * F_.eval(beta, omb);
    }

    /// Kernel at r = 0: c (phit+phib)^(-2 gamma) F(gamma,gamma;1;((phit-phib)/(phit+phib))^2).
    double at_zero_r(double phit, double phib) const {
        if (p_.gamma == 0.0)
            return p_.c;
        const double S = phit + phib;
        const double q = (phit - phib) / S;
        const double omb = 4.0 * phit * phib / (S * S);
        return p_.c * std::pow(S, -2.0 * p_.gamma) * F_.eval(q * q, omb);
    }

private:
    TricomiParams p_;
    Hypergeometric2F1 F_;
};

inline double kernel_E(const TricomiParams& p, const KernelPoint& k) { return KernelEvaluator(p)(k); }

inline Lemma22Derivatives lemma22_derivatives(const TricomiParams& p, const KernelPoint& k) {
    const auto g = detail::kernel_geometry(p, k);
    const auto d = phi_derivatives(p, k.t);
    const double gm = p.gamma, r = k.r, D = g.D, S = g.S;
    const double d1 = d.first, d2 = d.second;
    const double Dg1 = std::pow(D, -gm - 1.0);
    const double Dg2 = std::pow(D, -gm - 2.0);
    const double P = g.phit * g.phit - g.phib * g.phib + r * r;

    Lemma22Derivatives out{};
    out.alpha_t = -2.0 * gm * d1 * S * Dg1;
    out.alpha_tt = -2.0 * gm * d2 * S * Dg1 - 2.0 * gm * d1 * d1 * Dg1 +
                   4.0 * gm * (gm + 1.0) * d1 * d1 * S * S * Dg2;
    out.beta_t = 4.0 * d1 * g.phib * P / (D * D);
    out.beta_tt = 4.0 * g.phib / (D * D) *
                  (d2 * P - 4.0 * d1 * d1 * S * P / D + 2.0 * g.phit * d1 * d1);
    out.alpha_r = 2.0 * gm * r * Dg1;
    out.alpha_rr = 2.0 * gm * Dg1 + 4.0 * gm * (gm + 1.0) * r * r * Dg2;
    out.beta_r = -8.0 * r * g.phit * g.phib / (D * D);
    out.beta_rr = -8.0 * g.phit * g.phib * (S * S + 3.0 * r * r) / (D * D * D);
    return out;
}

/// I = alpha_tt - t^ell alpha_rr
/// J = 2 alpha_t beta_t + alpha beta_tt - t^ell (2 alpha_r beta_r + alpha beta_rr)
/// Y = alpha (beta_t^2 - t^ell beta_r^2)
/// G = (2/gamma) phi''(t) phi(b) D^(-gamma-1)
inline Lemma23Coefficients lemma23_coefficients(const TricomiParams& p, const KernelPoint& k) {
    if (p.gamma == 0.0)
        throw DomainError("lemma23_coefficients: gamma = 0 is the trivial constant kernel");
    const auto g = detail::kernel_geometry(p, k);
    const auto ab = alpha_beta(p, k);
    const auto dv = lemma22_derivatives(p, k);
    const auto d = phi_derivatives(p, k.t);
    const double tl = d.first * d.first;

    Lemma23Coefficients out{};
    out.z = ab.beta;
    out.I = dv.alpha_tt - tl * dv.alpha_rr;
    out.J = 2.0 * dv.alpha_t * dv.beta_t + ab.alpha * dv.beta_tt -
            tl * (2.0 * dv.alpha_r * dv.beta_r + ab.alpha * dv.beta_rr);
    out.Y = ab.alpha * (dv.beta_t * dv.beta_t - tl * dv.beta_r * dv.beta_r);
    out.G = 2.0 / p.gamma * d.second * g.phib * std::pow(g.D, -p.gamma - 1.0);
    return out;
}

/// E_tt - t^ell E_rr by centered second differences, Richardson-extrapolated
/// over steps h and h/2. The step is reduced to min(h, b/10, (t-b)/10) so the
/// stencil stays inside 0 < b < t.
inline PdeResidual kernel_pde_residual(const TricomiParams& p, const KernelPoint& k, double h = 1e-3) {
    detail::kernel_geometry(p, k);
    if (!(h > 0.0))
        throw DomainError("kernel_pde_residual: h must be positive");
    const double hs = std::min({h, k.b / 10.0, (k.t - k.b) / 10.0});
    if (k.r < 2.0 * hs)
        throw DomainError("kernel_pde_residual: r must leave a margin of 2h");
    const double S = phi(p, k.t + 2.0 * hs) + phi(p, k.b);
    if (k.r + 2.0 * hs >= phi(p, k.t - 2.0 * hs) + phi(p, k.b) || k.r + 2.0 * hs >= S)
        throw DomainError("kernel_pde_residual: stencil reaches r = phi(t) + phi(b)");

    const KernelEvaluator E(p);
    const double e0 = E(k);
    auto second_t = [&](double s) {
        return (E({k.t + s, k.b, k.r}) - 2.0 * e0 + E({k.t - s, k.b, k.r})) / (s * s);
    };
    auto second_r = [&](double s) {
        return (E({k.t, k.b, k.r + s}) - 2.0 * e0 + E({k.t, k.b, k.r - s})) / (s * s);
    };
    const double ett = (4.0 * second_t(hs / 2.0) - second_t(hs)) / 3.0;
    const double err = (4.0 * second_r(hs / 2.0) - second_r(hs)) / 3.0;
    const double tl = std::pow(k.t, p.ell);
    return {ett - tl * err, ett, err, hs};
}

} // namespace tricomi
