#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "tricomi/quadrature.hpp"

using namespace tricomi;

TEST(GaussLegendre, IntegratesPolynomialsExactly) {
    for (std::size_t n : {2u, 5u, 16u, 64u}) {
        const GaussRule g = gauss_legendre(n);
        double wsum = 0.0;
        for (double w : g.weights)
            wsum += w;
        EXPECT_NEAR(wsum, 2.0, 1e-14);
        // x^(2n-2) integrates to 2/(2n-1).
        const double deg = static_cast<double>(2 * n - 2);
        const double q = integrate_gauss(g, -1.0, 1.0, [&](double x) { return std::pow(x, deg); });
        EXPECT_NEAR(q, 2.0 / (deg + 1.0), 1e-14);
    }
    EXPECT_THROW(gauss_legendre(1), DomainError);
}

TEST(GaussJacobi, ReducesToLegendre) {
    const GaussRule a = gauss_jacobi(12, 0.0, 0.0), b = gauss_legendre(12);
    for (std::size_t i = 0; i < 12; ++i) {
        EXPECT_NEAR(a.nodes[i], b.nodes[i], 1e-14);
        EXPECT_NEAR(a.weights[i], b.weights[i], 1e-14);
    }
}

TEST(GaussJacobi, MomentsOfSingularWeight) {
    // int_{-1}^{1} (1-x)^a x^k dx against the exact Beta-function moments.
    const double a = -5.0 / 6.0;
    const GaussRule g = gauss_jacobi(10, a, 0.0);
    double m0 = 0.0, m1 = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        m0 += g.weights[i];
        m1 += g.weights[i] * g.nodes[i];
    }
    const double exact0 = std::pow(2.0, a + 1.0) / (a + 1.0);
    // int (1-x)^a x dx = int (1-x)^a dx - int (1-x)^(a+1) dx
    const double exact1 = exact0 - std::pow(2.0, a + 2.0) / (a + 2.0);
    EXPECT_NEAR(m0, exact0, 1e-13);
    EXPECT_NEAR(m1, exact1, 1e-13);
    EXPECT_THROW(gauss_jacobi(4, -1.0, 0.0), DomainError);
}

TEST(TanhSinh, SmoothAndSingularIntegrands) {
    auto r = integrate_tanh_sinh([](double x) { return std::exp(x); }, 0.0, 1.0);
    EXPECT_TRUE(r.converged);
    EXPECT_NEAR(r.value, std::exp(1.0) - 1.0, 1e-14);

    // int_0^1 u^(-5/6) du = 6 with the singularity at the left endpoint.
    r = integrate_unit_tanh_sinh([](double u, double) { return std::pow(u, -5.0 / 6.0); });
    EXPECT_TRUE(r.converged);
    EXPECT_NEAR(r.value, 6.0, 1e-11);

    // Same singularity at the right endpoint, through the complement.
    r = integrate_unit_tanh_sinh([](double, double uc) { return std::pow(uc, -5.0 / 6.0); });
    EXPECT_NEAR(r.value, 6.0, 1e-11);
}

TEST(TanhSinh, EstimateIsHonest) {
    QuadTolerance tol;
    tol.rel_tol = 1e-8;
    const auto r = integrate_tanh_sinh([](double x) { return 1.0 / (1.0 + 25.0 * x * x); }, -1.0, 1.0, tol);
    const double exact = 2.0 * std::atan(5.0) / 5.0;
    EXPECT_TRUE(r.converged);
    EXPECT_LE(std::abs(r.value - exact), std::max(10.0 * r.est_error, 1e-15));
}

TEST(TanhSinh, UnreachableToleranceIsReported) {
    QuadTolerance tol;
    tol.rel_tol = 1e-300;
    tol.abs_tol = 1e-300;
    tol.max_level = 6;
    const auto r = integrate_tanh_sinh([](double x) { return std::sqrt(x); }, 0.0, 1.0, tol);
    EXPECT_FALSE(r.converged);
    EXPECT_NEAR(r.value, 2.0 / 3.0, 1e-10);
    EXPECT_THROW(integrate_checked([](double x) { return std::sqrt(x); }, 0.0, 1.0, tol), ConvergenceError);
}

TEST(TanhSinh, NodesAreNested) {
    const auto fine = tanh_sinh_nodes(4), coarse = tanh_sinh_nodes(3);
    double sf = 0.0, sc = 0.0, sub = 0.0;
    for (const auto& n : fine) {
        sf += n.weight;
        if (n.first_level <= 3)
            sub += 2.0 * n.weight;
    }
    for (const auto& n : coarse)
        sc += n.weight;
    EXPECT_NEAR(sf, 1.0, 1e-14);
    EXPECT_NEAR(sc, 1.0, 1e-14);
    EXPECT_NEAR(sub, sc, 1e-14);
    for (const auto& n : fine)
        EXPECT_NEAR(n.u + n.uc, 1.0, 1e-15);
}
