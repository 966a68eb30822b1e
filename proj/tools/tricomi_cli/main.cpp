#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "tricomi_cli/run.hpp"

int main(int argc, char** argv) {
    using namespace tricomi::cli;

    CLI::App app{"Integral transform for u_tt - t^ell A u = f: solvers, identity checks and artifacts"};
    std::string command, config_path, grid;
    RunConfig flags;
    app.add_option("command", command, "solve | kernel-check | idcheck | k0k1 | compare-fd | appendix | domains")
        ->required()
        ->check(CLI::IsMember(kCommands));
    app.add_option("--config", config_path, "JSON config file; flags override its fields");
    auto* o_ell = app.add_option("--ell", flags.ell, "exponent ell > -2");
    auto* o_preset = app.add_option("--preset", flags.preset, "separable-k1 | constant | cauchy-cos")
                         ->check(CLI::IsMember(kPresets));
    auto* o_out = app.add_option("--out", flags.out, "output directory (default $TRICOMI_OUT_DIR/<command>)");
    auto* o_nodes = app.add_option("--nodes", flags.nodes, "quadrature node budget per dimension");
    auto* o_tol = app.add_option("--tol", flags.tol, "quadrature tolerance (absolute and relative)");
    auto* o_check = app.add_option("--check-tol", flags.check_tol, "tolerance against the ODE oracle");
    auto* o_fd = app.add_option("--fd-tol", flags.fd_linf_tol, "max difference against the FD solver");
    auto* o_grid = app.add_option("--grid", grid, "grid as nx,nt");
    auto* o_seed = app.add_option("--seed", flags.seed, "seed for random sample lattices");
    auto* o_t = app.add_option("--t", flags.t, "final time");
    auto* o_x0 = app.add_option("--x0", flags.x0, "domain half-width at t = 0");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        RunConfig c = config_path.empty() ? RunConfig{} : load_config_file(config_path);
        c.command = command;
        if (o_ell->count()) c.ell = flags.ell;
        if (o_preset->count()) c.preset = flags.preset;
        if (o_out->count()) c.out = flags.out;
        if (o_nodes->count()) c.nodes = flags.nodes;
        if (o_tol->count()) c.tol = flags.tol;
        if (o_check->count()) c.check_tol = flags.check_tol;
        if (o_fd->count()) c.fd_linf_tol = flags.fd_linf_tol;
        if (o_grid->count()) c.grid = parse_grid(grid);
        if (o_seed->count()) c.seed = flags.seed;
        if (o_t->count()) c.t = flags.t;
        if (o_x0->count()) c.x0 = flags.x0;
        return run(c);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
