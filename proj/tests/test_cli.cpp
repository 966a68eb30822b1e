#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "tricomi_cli/run.hpp"

using namespace tricomi;
using namespace tricomi::cli;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

fs::path scratch(const std::string& name) {
    const fs::path d = fs::temp_directory_path() / "tricomi_cli_test" / name;
    fs::remove_all(d);
    return d;
}

RunConfig config(const std::string& command, const fs::path& out) {
    RunConfig c;
    c.command = command;
    c.out = out.string();
    return c;
}

} // namespace

TEST(Cli, DomainsWritesCurvesWithExponent) {
    const auto dir = scratch("domains");
    RunConfig c = config("domains", dir);
    std::ostringstream log;
    EXPECT_EQ(run(c, log), 0);
    const std::string csv = slurp(dir / "omega_phi.csv");
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "tau,half_width,coefficient,tau_exponent");
    EXPECT_NE(csv.find(",2.25\n"), std::string::npos);
    EXPECT_TRUE(fs::exists(dir / "omega.csv"));
    EXPECT_TRUE(fs::exists(dir / "omega_phi_image.csv"));
    EXPECT_FALSE(fs::exists(dir / "failures.json"));
}

TEST(Cli, KernelCheckAtEllZeroHasZeroResiduals) {
    const auto dir = scratch("kernel0");
    RunConfig c = config("kernel-check", dir);
    c.ell = 0.0;
    std::ostringstream log;
    EXPECT_EQ(run(c, log), 0);
    std::istringstream csv(slurp(dir / "kernel_check.csv"));
    std::string line;
    std::getline(csv, line);
    int rows = 0;
    while (std::getline(csv, line)) {
        std::vector<std::string> cols;
        std::stringstream ls(line);
        for (std::string col; std::getline(ls, col, ',');)
            cols.push_back(col);
        ASSERT_EQ(cols.size(), 8u);
        EXPECT_EQ(cols[5], "0");
        ++rows;
    }
    EXPECT_EQ(rows, 125);
}

TEST(Cli, IdenticalConfigGivesIdenticalFiles) {
    const auto a = scratch("det_a"), b = scratch("det_b");
    for (const std::string cmd : {"solve", "idcheck"}) {
        RunConfig ca = config(cmd, a / cmd), cb = config(cmd, b / cmd);
        ca.grid = cb.grid = std::array<std::size_t, 2>{16, 16};
        std::ostringstream log;
        EXPECT_EQ(run(ca, log), 0) << log.str();
        EXPECT_EQ(run(cb, log), 0) << log.str();
        for (const auto& e : fs::directory_iterator(a / cmd))
            EXPECT_EQ(slurp(e.path()), slurp(b / cmd / e.path().filename())) << e.path();
    }
}

TEST(Cli, SolveSummaryCarriesOracleComparison) {
    const auto dir = scratch("solve");
    RunConfig c = config("solve", dir);
    c.grid = std::array<std::size_t, 2>{16, 16};
    std::ostringstream log;
    ASSERT_EQ(run(c, log), 0) << log.str();
    const auto s = json::parse(slurp(dir / "summary.json"));
    EXPECT_TRUE(s["passed"].get<bool>());
    EXPECT_LT(s["results"]["oracle"]["max_error"].get<double>(), 1e-6);
    EXPECT_EQ(slurp(dir / "solution.csv").substr(0, 6), "x,t,u\n");
}

TEST(Cli, AbsurdToleranceFailsWithFailureList) {
    const auto dir = scratch("forced");
    RunConfig c = config("solve", dir);
    c.grid = std::array<std::size_t, 2>{16, 16};
    c.tol = 1e-300;
    std::ostringstream log;
    EXPECT_NE(run(c, log), 0);
    const auto f = json::parse(slurp(dir / "failures.json"));
    ASSERT_TRUE(f.is_array());
    ASSERT_FALSE(f.empty());
    EXPECT_EQ(f[0]["check"].get<std::string>(), "convergence");
    EXPECT_FALSE(json::parse(slurp(dir / "summary.json"))["passed"].get<bool>());
}

TEST(Cli, ConfigMergingAndValidation) {
    RunConfig c;
    merge_json(c, json::parse(R"({"command": "solve", "ell": 3, "grid": "32,48", "seed": 7})"));
    EXPECT_EQ(c.ell, 3.0);
    ASSERT_TRUE(c.grid);
    EXPECT_EQ((*c.grid)[1], 48u);
    EXPECT_EQ(c.seed, 7u);
    EXPECT_NO_THROW(validate(c));
    EXPECT_THROW(merge_json(c, json::parse(R"({"elll": 1})")), DomainError);
    EXPECT_THROW(merge_json(c, json::parse(R"({"ell": "one"})")), DomainError);
    EXPECT_THROW(parse_grid("32x48"), DomainError);
    c.ell = -2.0;
    EXPECT_THROW(validate(c), DomainError);
    c.ell = 1.0;
    c.command = "plot";
    EXPECT_THROW(validate(c), DomainError);
}

TEST(Cli, EnvironmentSetsDefaultOutputRoot) {
    const auto root = scratch("env");
    ::setenv("TRICOMI_OUT_DIR", root.string().c_str(), 1);
    RunConfig c;
    c.command = "domains";
    EXPECT_EQ(output_dir(c), root / "domains");
    ::unsetenv("TRICOMI_OUT_DIR");
    EXPECT_EQ(output_dir(c), fs::path("tricomi_out") / "domains");
}

TEST(Cli, PresetOutsideItsRangeIsReported) {
    const auto dir = scratch("cauchy_neg");
    RunConfig c = config("solve", dir);
    c.preset = "cauchy-cos";
    c.ell = -1.0;
    c.grid = std::array<std::size_t, 2>{16, 16};
    std::ostringstream log;
    EXPECT_NE(run(c, log), 0);
    EXPECT_TRUE(fs::exists(dir / "failures.json"));
}
