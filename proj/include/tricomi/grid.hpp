#pragma once

#include <cstddef>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "tricomi/errors.hpp"

namespace tricomi {

/// Space-time grid, periodic in x: x_i = x_min + i dx with dx = (x_max - x_min)/nx,
/// t_n = t_start + n dt with dt = (t_max - t_start)/(nt - 1).
struct Grid1D {
    double x_min = -3.141592653589793;
    double x_max = 3.141592653589793;
    double t_max = 1.0;
    std::size_t nx = 64;
    std::size_t nt = 64;
    double t_start = 0.0;

    double dx() const { return (x_max - x_min) / static_cast<double>(nx); }
    double dt() const { return (t_max - t_start) / static_cast<double>(nt - 1); }
    double x(std::size_t i) const { return x_min + static_cast<double>(i) * dx(); }
    double t(std::size_t n) const { return t_start + static_cast<double>(n) * dt(); }

    void validate() const {
        if (nx < 16 || nt < 16)
            throw DomainError("Grid1D: nx and nt must be >= 16");
        if (!(x_max > x_min))
            throw DomainError("Grid1D: x_max must exceed x_min");
        if (!(t_start >= 0.0 && t_max > t_start))
            throw DomainError("Grid1D: requires 0 <= t_start < t_max");
    }
};

struct GridFunction {
    Grid1D grid;
    std::vector<double> values;   // values[n * nx + i] = u(x_i, t_n)

    explicit GridFunction(const Grid1D& g = {}) : grid(g), values(g.nx * g.nt, 0.0) {}

    double& at(std::size_t i, std::size_t n) { return values[n * grid.nx + i]; }
    double at(std::size_t i, std::size_t n) const { return values[n * grid.nx + i]; }
};

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// CSV with header x,t,value; rows ordered by t, then x.
inline void write_csv(std::ostream& os, const GridFunction& u, const std::string& value_name = "value") {
    os << "x,t," << value_name << '\n';
    for (std::size_t n = 0; n < u.grid.nt; ++n)
        for (std::size_t i = 0; i < u.grid.nx; ++i)
            os << format_double(u.grid.x(i)) << ',' << format_double(u.grid.t(n)) << ','
               << format_double(u.at(i, n)) << '\n';
}

} // namespace tricomi
