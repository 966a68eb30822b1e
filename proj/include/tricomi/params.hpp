#pragma once

#include <cmath>
#include <optional>
#include <string>

#include "tricomi/errors.hpp"
#include "tricomi/specfun.hpp"

namespace tricomi {

/// Exponent ell of u_tt - t^ell A u = f together with every constant derived
/// from it. Immutable after make_params().
struct TricomiParams {
    double ell = 0.0;
    double gamma = 0.0;                // ell / (2 (ell + 2))
    double c = 1.0;                    // ((ell + 2) / 4)^(-ell / (ell + 2))
    std::optional<double> a_coef;      // source coefficient of the K0 equation, needs gamma > 0
    std::optional<double> b_coef;      // source coefficient of the K1 equation, needs gamma < 1
};

inline TricomiParams make_params(double ell) {
    if (!std::isfinite(ell))
        throw DomainError("make_params: ell must be finite");
    if (ell == -2.0)
        throw DomainError("make_params: ell = -2 leaves gamma undefined");
    if (ell < -2.0)
        throw DomainError("make_params: ell < -2 is not supported (c_ell is not real)");

    TricomiParams p;
    p.ell = ell;
    p.gamma = ell / (2.0 * (ell + 2.0));
    // ell = -4/3 is not representable; snap gamma so that F(gamma,gamma;1;z) terminates.
    if (std::abs(p.gamma - std::round(p.gamma)) < 1e-14)
        p.gamma = std::round(p.gamma);
    p.c = std::pow((ell + 2.0) / 4.0, -ell / (ell + 2.0));
    if (!std::isnormal(p.c))
        throw UnsupportedError("make_params: c_ell is outside double range for ell this close to -2");

    const double g = p.gamma;
    if (g > 0.0)
        p.a_coef = std::pow(2.0, 1.0 - 2.0 * g) * ell * gamma_fn(2.0 * g) /
                   (2.0 * g * gamma_fn(g) * gamma_fn(g));
    if (g < 1.0) {
        const double g1 = gamma_fn(1.0 - g);
        p.b_coef = (ell + 2.0) * std::pow(2.0, 2.0 * g - 1.0) * gamma_fn(2.0 - 2.0 * g) / (g1 * g1);
    }
    return p;
}

/// Distance function phi(t) = 2/(ell+2) t^((ell+2)/2).
inline double phi(const TricomiParams& p, double t) {
    if (!(t >= 0.0))
        throw DomainError("phi: t must be >= 0");
    return 2.0 / (p.ell + 2.0) * std::pow(t, (p.ell + 2.0) / 2.0);
}

inline double phi_inverse(const TricomiParams& p, double tau) {
    if (!(tau >= 0.0))
        throw DomainError("phi_inverse: tau must be >= 0");
    return std::pow((p.ell + 2.0) / 2.0 * tau, 2.0 / (p.ell + 2.0));
}

struct PhiDerivatives {
    double first;   // phi'(t) = t^(ell/2)
    double second;  // phi''(t) = (ell/2) t^(ell/2 - 1)
};

inline PhiDerivatives phi_derivatives(const TricomiParams& p, double t) {
    if (!(t >= 0.0))
        throw DomainError("phi_derivatives: t must be >= 0");
    if (t == 0.0 && p.ell < 2.0)
        throw SingularityError("phi_derivatives: phi'' is singular at t = 0 for ell < 2");
    const double half = p.ell / 2.0;
    return {std::pow(t, half), half == 0.0 ? 0.0 : half * std::pow(t, half - 1.0)};
}

} // namespace tricomi
