#pragma once

// Gamma function and the Gauss hypergeometric function F(a,b;c;z) for real
// parameters and real z < 1.
//
// F is evaluated by one of three routes:
//   * terminating polynomial when a or b is a nonpositive integer (any z),
//   * the Gauss series for -0.5 <= z <= 0.7, Pfaff transform below -0.5,
//   * the connection formula tying z to 1-z for z > 0.7:
//       F(a,b;c;z) = G1 F(a,b;a+b-c+1;1-z) + (1-z)^(c-a-b) G2 F(c-a,c-b;c-a-b+1;1-z),
//       G1 = G(c)G(c-a-b)/(G(c-a)G(c-b)),  G2 = G(c)G(a+b-c)/(G(a)G(b)).
// When c-a-b is exactly an integer m the logarithmic form of the connection
// formula is used (m < 0 after the Euler transform). When c-a-b is within
// kIntegerGuard of an integer without being one, the Gauss series is summed
// instead and the case is reported as unsupported if that does not converge.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>

#include <boost/math/special_functions/digamma.hpp>

#include "tricomi/errors.hpp"

namespace tricomi {

namespace detail {

inline bool is_nonpositive_integer(double x) { return x <= 0.0 && x == std::floor(x); }

inline double distance_to_integer(double x) { return std::abs(x - std::round(x)); }

// Neumaier's compensated sum.
struct CompensatedSum {
    double sum = 0.0;
    double comp = 0.0;

    void add(double v) {
        const double t = sum + v;
        if (std::abs(sum) >= std::abs(v))
            comp += (sum - t) + v;
        else
            comp += (v - t) + sum;
        sum = t;
    }
    double value() const { return sum + comp; }
};

inline constexpr double kSwitchPoint = 0.7;
inline constexpr double kIntegerGuard = 1e-6;
inline constexpr std::size_t kDefaultMaxTerms = 100000;
inline constexpr std::size_t kFallbackMaxTerms = 2000000;

} // namespace detail

inline double gamma_fn(double x) {
    if (std::isnan(x))
        throw DomainError("gamma_fn: NaN argument");
    if (detail::is_nonpositive_integer(x))
        throw SingularityError("gamma_fn: pole at x = " + std::to_string(x));
    return std::tgamma(x);
}

// 1/Gamma(x), entire; zero at the poles of Gamma.
inline double inv_gamma(double x) {
    if (detail::is_nonpositive_integer(x))
        return 0.0;
    return 1.0 / std::tgamma(x);
}

struct SeriesSum {
    double value = 0.0;
    double abs_error = 0.0;   // bound on the neglected tail
    std::size_t terms = 0;
    bool converged = false;
};

/// Direct Gauss series sum_k (a)_k (b)_k / ((c)_k k!) z^k for |z| < 1, or any z
/// when the series terminates. Stops once a geometric bound on the remaining
/// tail drops below rel_tol * |sum|.
inline SeriesSum hyp2f1_series(double a, double b, double c, double z,
                               std::size_t max_terms = detail::kDefaultMaxTerms,
                               double rel_tol = std::numeric_limits<double>::epsilon()) {
    if (detail::is_nonpositive_integer(c))
        throw DomainError("hyp2f1_series: c is a nonpositive integer");

    detail::CompensatedSum acc;
    double term = 1.0;
    acc.add(term);

    const bool terminating = detail::is_nonpositive_integer(a) || detail::is_nonpositive_integer(b);
    if (terminating) {
        const double n = -std::max(detail::is_nonpositive_integer(a) ? a : -1e300,
                                   detail::is_nonpositive_integer(b) ? b : -1e300);
        const auto last = static_cast<std::size_t>(n);
        for (std::size_t k = 0; k < last; ++k) {
            const double kd = static_cast<double>(k);
            term *= (a + kd) * (b + kd) / ((c + kd) * (kd + 1.0)) * z;
            acc.add(term);
        }
        return {acc.value(), 0.0, last + 1, true};
    }

    if (!(std::abs(z) < 1.0))
        throw DomainError("hyp2f1_series: |z| must be < 1 for a non-terminating series");

    const double az = std::abs(z);
    for (std::size_t k = 0; k < max_terms; ++k) {
        const double kd = static_cast<double>(k);
        const double ratio = (a + kd) * (b + kd) / ((c + kd) * (kd + 1.0));
        term *= ratio * z;
        acc.add(term);

        const double s = std::abs(acc.value());
        const double rho = std::max(std::abs(ratio * z), az);
        if (rho < 1.0 && kd > std::abs(a) + std::abs(b) + std::abs(c)) {
            const double tail = std::abs(term) * rho / (1.0 - rho);
            if (tail <= rel_tol * s || (s == 0.0 && tail == 0.0))
                return {acc.value(), tail, k + 2, true};
        }
    }
    return {acc.value(), std::abs(term), max_terms + 1, false};
}

/// F(a,b;c;z) through the connection formula around z = 1. Requires c-a-b to
/// be a non-integer; argument given as w = 1 - z in [0, 1).
class ConnectionFormula {
public:
    ConnectionFormula(double a, double b, double c) : a_(a), b_(b), c_(c), s_(c - a - b) {
        if (detail::distance_to_integer(s_) < detail::kIntegerGuard)
            throw UnsupportedError("connection formula: c-a-b is (numerically) an integer");
        const double gc = gamma_fn(c);
        g1_ = gc * gamma_fn(s_) * inv_gamma(c - a) * inv_gamma(c - b);
        g2_ = gc * gamma_fn(-s_) * inv_gamma(a) * inv_gamma(b);
    }

    double operator()(double w) const {
        if (!(w >= 0.0 && w < 1.0))
            throw DomainError("connection formula: 1 - z must lie in [0, 1)");
        double value = 0.0;
        if (g1_ != 0.0)
            value += g1_ * inner(a_, b_, 1.0 - s_, w);
        if (g2_ != 0.0 && w > 0.0)
            value += std::pow(w, s_) * g2_ * inner(c_ - a_, c_ - b_, 1.0 + s_, w);
        else if (g2_ != 0.0 && s_ < 0.0)
            throw SingularityError("connection formula: F diverges at z = 1 for c-a-b < 0");
        return value;
    }

    double exponent() const { return s_; }

private:
    static double inner(double a, double b, double c, double w) {
        const SeriesSum r = hyp2f1_series(a, b, c, w);
        if (!r.converged)
            throw ConvergenceError("connection formula: inner series did not converge", r.value, r.abs_error);
        return r.value;
    }

    double a_, b_, c_, s_;
    double g1_ = 0.0, g2_ = 0.0;
};

/// F(a,b;a+b+m;z) for an integer m >= 0 through the logarithmic connection
/// formula; argument given as w = 1 - z in (0, 1). a and b must not be
/// nonpositive integers.
class LogConnectionFormula {
public:
    LogConnectionFormula(double a, double b, int m) : a_(a), b_(b), m_(m) {
        if (m < 0)
            throw DomainError("log connection formula: m must be >= 0");
        const double c = a + b + m;
        g_log_ = gamma_fn(c) * inv_gamma(a) * inv_gamma(b);
        if (m > 0)
            g_poly_ = gamma_fn(m) * gamma_fn(c) * inv_gamma(a + m) * inv_gamma(b + m);
    }

    double operator()(double w) const {
        if (!(w > 0.0 && w < 1.0))
            throw DomainError("log connection formula: 1 - z must lie in (0, 1)");
        using boost::math::digamma;
        detail::CompensatedSum poly;
        double t = 1.0;
        for (int n = 0; n < m_; ++n) {
            poly.add(t);
            t *= (a_ + n) * (b_ + n) / ((n + 1.0) * (1.0 - m_ + n)) * w;
        }

        const double lw = std::log(w);
        double psi1 = digamma(1.0), psim = digamma(m_ + 1.0);
        double psia = digamma(a_ + m_), psib = digamma(b_ + m_);
        double coef = 1.0;
        for (int k = 1; k <= m_; ++k)
            coef /= k;
        detail::CompensatedSum log_part;
        for (std::size_t n = 0; n < detail::kDefaultMaxTerms; ++n) {
            const double term = coef * (lw - psi1 - psim + psia + psib);
            log_part.add(term);
            const double size = std::abs(coef) * (std::abs(lw) + psi1 + psim + std::abs(psia) + std::abs(psib) + 1.0);
            if (n > 4 && size <= 1e-17 * std::abs(log_part.value()))
                return assemble(poly.value(), log_part.value(), w);
            const double an = a_ + m_ + n, bn = b_ + m_ + n;
            coef *= an * bn / ((n + 1.0) * (n + m_ + 1.0)) * w;
            psi1 += 1.0 / (n + 1.0);
            psim += 1.0 / (n + m_ + 1.0);
            psia += 1.0 / an;
            psib += 1.0 / bn;
        }
        throw ConvergenceError("log connection formula: series did not converge", assemble(poly.value(), log_part.value(), w),
                               std::abs(coef));
    }

private:
    double assemble(double poly, double log_part, double w) const {
        const double sign = m_ % 2 == 0 ? 1.0 : -1.0;
        return g_poly_ * poly - sign * std::pow(w, m_) * g_log_ * log_part;
    }

    double a_, b_;
    int m_;
    double g_log_ = 0.0, g_poly_ = 0.0;
};

inline double hyp2f1_connection(double a, double b, double c, double z) {
    return ConnectionFormula(a, b, c)(1.0 - z);
}

/// Evaluator for F(a,b;c;.) with fixed parameters. Branch constants are
/// computed once, which matters inside nested quadratures.
class Hypergeometric2F1 {
public:
    Hypergeometric2F1(double a, double b, double c) : a_(a), b_(b), c_(c) {
        if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c))
            throw DomainError("hyp2f1: parameters must be finite");
        if (detail::is_nonpositive_integer(c))
            throw DomainError("hyp2f1: c must not be a nonpositive integer");
        terminating_ = detail::is_nonpositive_integer(a) || detail::is_nonpositive_integer(b);
        const double s = c - a - b;
        if (!terminating_ && detail::distance_to_integer(s) >= detail::kIntegerGuard)
            connection_.emplace(a, b, c);
        if (!terminating_ && s == std::round(s)) {
            // Euler: F(a,b;c;z) = (1-z)^(c-a-b) F(c-a,c-b;c;z) moves m < 0 to -m.
            euler_ = s < 0.0;
            log_connection_.emplace(euler_ ? c - a : a, euler_ ? c - b : b, static_cast<int>(std::abs(s)));
        }
        if (!terminating_ && s > 0.0)
            value_at_one_ = gamma_fn(c) * gamma_fn(s) * inv_gamma(c - a) * inv_gamma(c - b);
    }

    double operator()(double z) const { return eval(z, 1.0 - z); }

    /// z and 1 - z passed separately so that callers who know 1 - z to full
    /// relative precision keep it.
    double eval(double z, double one_minus_z) const {
        if (std::isnan(z) || std::isnan(one_minus_z))
            throw DomainError("hyp2f1: NaN argument");
        if (terminating_)
            return hyp2f1_series(a_, b_, c_, z).value;
        if (one_minus_z <= 0.0) {
            if (one_minus_z == 0.0 && value_at_one_)
                return *value_at_one_;
            throw DomainError("hyp2f1: z >= 1 is outside the supported range");
        }
        if (z < -0.5) {
            // Pfaff: F(a,b;c;z) = (1-z)^(-a) F(a,c-b;c;z/(z-1)), z/(z-1) in (1/3, 1).
            const double zt = z / (z - 1.0);
            const double zt_c = 1.0 / one_minus_z;
            if (zt <= detail::kSwitchPoint)
                return std::pow(one_minus_z, -a_) * checked_series(a_, c_ - b_, c_, zt, detail::kDefaultMaxTerms);
            return std::pow(one_minus_z, -a_) * Hypergeometric2F1(a_, c_ - b_, c_).eval(zt, zt_c);
        }
        if (z <= detail::kSwitchPoint)
            return checked_series(a_, b_, c_, z, detail::kDefaultMaxTerms);
        if (connection_)
            return (*connection_)(one_minus_z);
        if (log_connection_)
            return (euler_ ? std::pow(one_minus_z, c_ - a_ - b_) : 1.0) * (*log_connection_)(one_minus_z);
        const SeriesSum r = hyp2f1_series(a_, b_, c_, z, detail::kFallbackMaxTerms);
        if (!r.converged)
            throw UnsupportedError("hyp2f1: c-a-b within the integer guard near z = 1 is not implemented");
        return r.value;
    }

private:
    static double checked_series(double a, double b, double c, double z, std::size_t cap) {
        const SeriesSum r = hyp2f1_series(a, b, c, z, cap);
        if (!r.converged)
            throw ConvergenceError("hyp2f1: Gauss series did not converge", r.value, r.abs_error);
        return r.value;
    }

    double a_, b_, c_;
    bool terminating_ = false;
    std::optional<ConnectionFormula> connection_;
    std::optional<LogConnectionFormula> log_connection_;
    bool euler_ = false;
    std::optional<double> value_at_one_;
};

struct Hyp2F1Request {
    double a = 0.0, b = 0.0, c = 1.0;
    double z = 0.0;
    int want_derivatives = 0;   // 0, 1 or 2
};

struct Hyp2F1Result {
    double value = 0.0;
    std::optional<double> dz;
    std::optional<double> dzz;
};

/// F and optionally F', F'' via F' = (ab/c) F(a+1,b+1;c+1;z).
inline Hyp2F1Result hyp2f1(const Hyp2F1Request& req) {
    if (req.want_derivatives < 0 || req.want_derivatives > 2)
        throw DomainError("hyp2f1: want_derivatives must be 0, 1 or 2");
    const double a = req.a, b = req.b, c = req.c, z = req.z;
    Hyp2F1Result out;
    out.value = Hypergeometric2F1(a, b, c)(z);
    if (req.want_derivatives >= 1) {
        const double k1 = a * b / c;
        out.dz = k1 == 0.0 ? 0.0 : k1 * Hypergeometric2F1(a + 1.0, b + 1.0, c + 1.0)(z);
    }
    if (req.want_derivatives >= 2) {
        const double k2 = a * b / c * (a + 1.0) * (b + 1.0) / (c + 1.0);
        out.dzz = k2 == 0.0 ? 0.0 : k2 * Hypergeometric2F1(a + 2.0, b + 2.0, c + 2.0)(z);
    }
    return out;
}

inline double hyp2f1(double a, double b, double c, double z) { return Hypergeometric2F1(a, b, c)(z); }

/// z(1-z)F'' + (1 - (2 gamma + 1) z)F' - gamma^2 F for F = F(gamma,gamma;1;z).
inline double hyp2f1_ode_residual(double gamma, double z) {
    if (!(z > 0.0 && z < 1.0))
        throw DomainError("hyp2f1_ode_residual: z must lie in (0, 1)");
    const Hyp2F1Result r = hyp2f1({gamma, gamma, 1.0, z, 2});
    return z * (1.0 - z) * *r.dzz + (1.0 - (2.0 * gamma + 1.0) * z) * *r.dz - gamma * gamma * r.value;
}

} // namespace tricomi
