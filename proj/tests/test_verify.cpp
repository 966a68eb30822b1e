#include <cmath>
#include <sstream>
#include <vector>

#include <gtest/gtest.h>

#include "oracle_values.hpp"
#include "tricomi/verify.hpp"

using namespace tricomi;

namespace {

double cos_source(double x, double) { return std::cos(x); }

// max over x at the last time of |u - cos x U(t_max)|.
double final_error(const GridFunction& u, double U) {
    double e = 0.0;
    const std::size_t n = u.grid.nt - 1;
    for (std::size_t i = 0; i < u.grid.nx; ++i)
        e = std::max(e, std::abs(u.at(i, n) - std::cos(u.grid.x(i)) * U));
    return e;
}

Grid1D grid(std::size_t nx, std::size_t nt) {
    Grid1D g;
    g.nx = nx;
    g.nt = nt;
    return g;
}

TimeSlabDomain tricomi_domain(double x0) {
    return {[x0](double t) { return x0 - 2.0 / 3.0 * std::pow(t, 1.5); }, std::pow(1.5 * x0, 2.0 / 3.0)};
}

} // namespace

TEST(FdTricomi, ZeroSourceGivesZero) {
    const auto u = fd_tricomi([](double, double) { return 0.0; }, make_params(1.0), grid(32, 64));
    for (double v : u.values)
        EXPECT_EQ(v, 0.0);
}

TEST(FdTricomi, EllZeroClosedForm) {
    const auto u = fd_tricomi(cos_source, make_params(0.0), grid(512, 2048));
    EXPECT_LT(final_error(u, 1.0 - std::cos(1.0)), 1e-4);
}

TEST(FdTricomi, EllOneMatchesReference) {
    const auto u = fd_tricomi(cos_source, make_params(1.0), grid(256, 1024));
    EXPECT_LT(final_error(u, oracle::kSeparableEll1At1), 1e-3);
}

TEST(FdTricomi, SecondOrderSelfConvergence) {
    const auto p = make_params(1.0);
    const double e1 = final_error(fd_tricomi(cos_source, p, grid(64, 256)), oracle::kSeparableEll1At1);
    const double e2 = final_error(fd_tricomi(cos_source, p, grid(128, 512)), oracle::kSeparableEll1At1);
    EXPECT_GE(e1 / e2, 3.5);
}

TEST(FdTricomi, NegativeEllStartsAwayFromOrigin) {
    const auto p = make_params(-1.0);
    EXPECT_THROW(fd_tricomi(cos_source, p, grid(32, 64)), DomainError);
    Grid1D g = grid(32, 1024);
    g.t_start = 0.05;
    EXPECT_NO_THROW(fd_tricomi(cos_source, p, g));
}

TEST(FdTricomi, CflViolationIsRejected) {
    Grid1D g = grid(64, 16);
    g.t_max = 10.0;
    EXPECT_THROW(fd_tricomi(cos_source, make_params(1.0), g), DomainError);
    EXPECT_THROW(fd_tricomi(cos_source, make_params(1.0), grid(8, 64)), DomainError);
}

TEST(ResidualOnGrid, LinearInTimeIsExact) {
    const double r = residual_on_grid([](double, double t) { return t; }, {}, make_params(1.0), grid(32, 64));
    EXPECT_LT(r, 1e-9);
}

TEST(ResidualOnGrid, SeparableSolutionDecaysAtSecondOrder) {
    const auto p = make_params(0.0);
    auto u = [](double x, double t) { return std::cos(x) * (1.0 - std::cos(t)); };
    const double r1 = residual_on_grid(u, cos_source, p, grid(32, 32));
    const double r2 = residual_on_grid(u, cos_source, p, grid(64, 64));
    EXPECT_GT(r1 / r2, 3.5);
}

TEST(ResidualOnGrid, StoredFdSolutionSatisfiesItsOwnScheme) {
    const auto p = make_params(1.0);
    const auto u = fd_tricomi(cos_source, p, grid(64, 256));
    EXPECT_LT(residual_on_grid(u, cos_source, p), 1e-9);
}

TEST(Domains, MonotoneBoundaryIsBackwardConnected) {
    EXPECT_TRUE(is_backward_time_connected(tricomi_domain(0.5)));
    const TimeSlabDomain bump{[](double t) { return 1.0 + std::exp(-100.0 * (t - 0.5) * (t - 0.5)); }, 1.0};
    EXPECT_FALSE(is_backward_time_connected(bump));
    EXPECT_THROW(phi_image(bump, make_params(1.0)), DomainError);
}

TEST(Domains, UnionAndIntersectionStayConnected) {
    const TimeSlabDomain a{[](double t) { return 1.0 - t; }, 1.0};
    const TimeSlabDomain b{[](double t) { return 0.5 - 0.1 * t; }, 2.0};
    EXPECT_TRUE(is_backward_time_connected(domain_union(a, b)));
    EXPECT_TRUE(is_backward_time_connected(domain_intersection(a, b)));
    EXPECT_TRUE(domain_union(a, b).contains(0.9, 0.05));
    EXPECT_TRUE(domain_union(a, b).contains(0.3, 1.5));
    EXPECT_FALSE(domain_intersection(a, b).contains(0.6, 0.05));
}

TEST(Domains, TricomiPullbackCurve) {
    const auto p = make_params(1.0);
    const auto d = phi_pullback(tricomi_domain(0.5), p);
    const double k = std::pow(2.0 / 3.0, 2.5);
    for (double tau : {0.1, 0.4, 0.8})
        EXPECT_NEAR(d.half_width(tau), 0.5 - k * std::pow(tau, 2.25), 1e-14);
}

TEST(Domains, PhiImageOfTricomiDomain) {
    const auto p = make_params(1.0);
    const auto d = tricomi_domain(0.5);
    const auto img = phi_image(d, p);
    EXPECT_NEAR(img.t_max, phi(p, d.t_max), 1e-15);
    for (double t : {0.1, 0.4, 0.8})
        EXPECT_NEAR(img.half_width(phi(p, t)), d.half_width(t), 1e-14);
    EXPECT_TRUE(is_backward_time_connected(img));
}

TEST(Domains, PhiImageIdentityAndRectangle) {
    const TimeSlabDomain rect{[](double) { return 1.0; }, 2.0};
    const auto id = phi_image(rect, make_params(0.0));
    EXPECT_EQ(id.t_max, 2.0);
    EXPECT_EQ(id.half_width(0.7), 1.0);
    const auto p = make_params(3.0);
    const auto img = phi_image(rect, p);
    EXPECT_NEAR(img.t_max, phi(p, 2.0), 1e-15);
    EXPECT_EQ(img.half_width(0.3), 1.0);
}

TEST(Domains, PhiImageIsMonotone) {
    const auto p = make_params(1.0);
    const auto small = phi_image(tricomi_domain(0.4), p), big = phi_image(tricomi_domain(0.5), p);
    for (int j = 1; j <= 200; ++j) {
        const double tau = small.t_max * j / 200.0;
        EXPECT_LE(small.half_width(tau), big.half_width(tau));
    }
    EXPECT_LE(small.t_max, big.t_max);
}

TEST(Lemma52, TrivialExponent) {
    const auto r = lemma52_identity(0.0, 0.0, 1.0 / 6.0, 1.0, 0.3);
    EXPECT_NEAR(r.lhs, 0.7, 1e-14);
    EXPECT_NEAR(r.rhs, 0.7, 1e-14);
}

TEST(Lemma52, ReferenceExamples) {
    EXPECT_LT(lemma52_identity(1.0, 1.0, 1.0 / 6.0, 1.0, 0.3).rel_err, 1e-8);
    EXPECT_LT(lemma52_identity(1.0, 2.0, 0.3, 2.0, 0.5).rel_err, 1e-8);
}

TEST(Lemma52, ParameterLattice) {
    for (double d1 : {0.0, 1.0, 2.0})
        for (double d2 : {-0.5, 1.0, 2.0})
            for (double g : {1.0 / 6.0, 0.3})
                EXPECT_LT(lemma52_identity(d1, d2, g, 1.5, 0.4).rel_err, 1e-8) << d1 << ' ' << d2 << ' ' << g;
}

TEST(Lemma52, ErrorPaths) {
    EXPECT_THROW(lemma52_identity(1.0, 1.0, 0.2, 1.0, 0.0), DomainError);
    EXPECT_THROW(lemma52_identity(1.0, 1.0, 0.2, 1.0, 1.5), DomainError);
}

TEST(ScalingLaws, GenericBranchesRecoverExponents) {
    for (double ell : {1.0, 3.0}) {
        const auto p = make_params(ell);
        for (LemmaId id : {LemmaId::L5_1, LemmaId::L5_5, LemmaId::L5_6, LemmaId::L5_7, LemmaId::L5_9}) {
            const auto rep = scaling_law_check(id, p);
            EXPECT_TRUE(rep.passed) << lemma_name(id) << " ell=" << ell;
            for (const auto& f : rep.fits)
                EXPECT_NEAR(f.fitted_slope, f.expected_exponent, 0.05) << lemma_name(id);
        }
    }
}

TEST(ScalingLaws, FirstLemmaExponentAtEllOne) {
    const auto rep = scaling_law_check(LemmaId::L5_1, make_params(1.0));
    ASSERT_EQ(rep.fits.size(), 1u);
    EXPECT_NEAR(rep.fits[0].expected_exponent, 2.0 / 3.0, 1e-15);
}

TEST(ScalingLaws, LeadingConstantLimit) {
    const auto rep = scaling_law_check(LemmaId::L5_4, make_params(1.0));
    ASSERT_TRUE(rep.leading_constant && rep.leading_constant_limit);
    EXPECT_NEAR(*rep.leading_constant_limit / *rep.leading_constant, 1.0, 1e-6);
    EXPECT_TRUE(rep.passed);
}

TEST(ScalingLaws, TerminatingBranchAndErrors) {
    const auto rep = scaling_law_check(LemmaId::L5_7, make_params(-4.0 / 3.0));
    EXPECT_TRUE(rep.passed);
    ASSERT_EQ(rep.fits.size(), 1u);
    EXPECT_TRUE(rep.fits[0].terminating);
    EXPECT_THROW(scaling_law_check(LemmaId::L5_1, make_params(0.0)), DomainError);
    EXPECT_THROW(scaling_law_check(LemmaId::L5_1, make_params(1.0), 2), DomainError);
}

TEST(GridCsv, HeaderAndPrecision) {
    GridFunction u(grid(16, 16));
    u.at(0, 0) = 0.1;
    std::ostringstream os;
    write_csv(os, u);
    const std::string s = os.str();
    EXPECT_EQ(s.substr(0, 10), "x,t,value\n");
    EXPECT_NE(s.find("0.10000000000000001"), std::string::npos);
}
