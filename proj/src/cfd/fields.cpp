#include <cmath>

#include "qns/cfd.hpp"
#include "qns/error.hpp"
#include "qns/kernels.hpp"

namespace qns {

void NSConfig::validate() const {
    if (!(nu > 0.0) || !std::isfinite(nu)) {
        throw ConfigError("navier-stokes: viscosity must be positive");
    }
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw ConfigError("navier-stokes: time step must be positive");
    }
    if (steps < 0) {
        throw ConfigError("navier-stokes: step count must be non-negative");
    }
    if (!std::isfinite(lid_speed)) {
        throw ConfigError("navier-stokes: lid speed must be finite");
    }
}

namespace {

void check_size(std::span<const double> f, const Grid2D &grid, const char *what) {
    if (f.size() != grid.num_nodes()) {
        throw ContractViolation(std::string(what) + ": field size does not match grid");
    }
}

std::vector<double> couplings(const Axis &a) {
    std::vector<double> c(static_cast<std::size_t>(a.n) + 1);
    for (int i = 0; i <= a.n; ++i) {
        c[static_cast<std::size_t>(i)] = a.coupling(i);
    }
    return c;
}

} // namespace

void apply_neumann_ghosts(std::vector<double> &f, const Grid2D &grid) {
    const int nx = grid.n_xi();
    const int ny = grid.n_eta();
    for (int j = 1; j <= ny; ++j) {
        f[grid.node(0, j)] = f[grid.node(1, j)];
        f[grid.node(nx + 1, j)] = f[grid.node(nx, j)];
    }
    for (int i = 0; i <= nx + 1; ++i) {
        f[grid.node(i, 0)] = f[grid.node(i, 1)];
        f[grid.node(i, ny + 1)] = f[grid.node(i, ny)];
    }
}

void apply_periodic_ghosts(std::vector<double> &f, const Grid2D &grid) {
    const int nx = grid.n_xi();
    const int ny = grid.n_eta();
    for (int j = 1; j <= ny; ++j) {
        f[grid.node(0, j)] = f[grid.node(nx, j)];
        f[grid.node(nx + 1, j)] = f[grid.node(1, j)];
    }
    for (int i = 0; i <= nx + 1; ++i) {
        f[grid.node(i, 0)] = f[grid.node(i, ny)];
        f[grid.node(i, ny + 1)] = f[grid.node(i, 1)];
    }
}

void apply_cavity_bc(std::vector<double> &u, std::vector<double> &v, const Grid2D &grid, double lid_speed) {
    const int nx = grid.n_xi();
    const int ny = grid.n_eta();
    for (int j = 0; j <= ny + 1; ++j) {
        for (int i : {0, nx + 1}) {
            u[grid.node(i, j)] = 0.0;
            v[grid.node(i, j)] = 0.0;
        }
    }
    for (int i = 0; i <= nx + 1; ++i) {
        u[grid.node(i, 0)] = 0.0;
        v[grid.node(i, 0)] = 0.0;
        u[grid.node(i, ny + 1)] = lid_speed;
        v[grid.node(i, ny + 1)] = 0.0;
    }
}

void apply_cavity_bc(FlowField &field, double lid_speed) {
    apply_cavity_bc(field.u, field.v, *field.grid, lid_speed);
    apply_neumann_ghosts(field.p, *field.grid);
}

void apply_periodic_bc(FlowField &field) {
    if (!field.grid->periodic()) {
        throw ConfigError("periodic boundary conditions need a periodic grid layout");
    }
    apply_periodic_ghosts(field.u, *field.grid);
    apply_periodic_ghosts(field.v, *field.grid);
    apply_periodic_ghosts(field.p, *field.grid);
}

void apply_bc(FlowField &field, const NSConfig &cfg) {
    if (cfg.flow == FlowCase::cavity) {
        apply_cavity_bc(field, cfg.lid_speed);
    } else {
        apply_periodic_bc(field);
    }
}

std::vector<double> ddx(std::span<const double> f, const Grid2D &grid) {
    check_size(f, grid, "ddx");
    std::vector<double> out(f.size(), 0.0);
    const double inv = 1.0 / (2.0 * grid.d_xi());
    for (int j = 1; j <= grid.n_eta(); ++j) {
        for (int i = 1; i <= grid.n_xi(); ++i) {
            const auto k = grid.node(i, j);
            out[k] = grid.xi.metric[i] * (f[k + 1] - f[k - 1]) * inv;
        }
    }
    return out;
}

std::vector<double> ddy(std::span<const double> f, const Grid2D &grid) {
    check_size(f, grid, "ddy");
    std::vector<double> out(f.size(), 0.0);
    const double inv = 1.0 / (2.0 * grid.d_eta());
    const auto stride = grid.nx_total();
    for (int j = 1; j <= grid.n_eta(); ++j) {
        for (int i = 1; i <= grid.n_xi(); ++i) {
            const auto k = grid.node(i, j);
            out[k] = grid.eta.metric[j] * (f[k + stride] - f[k - stride]) * inv;
        }
    }
    return out;
}

std::vector<double> laplacian(std::span<const double> f, const Grid2D &grid) {
    check_size(f, grid, "laplacian");
    std::vector<double> out(f.size(), 0.0);
    const auto cx = couplings(grid.xi);
    const auto cy = couplings(grid.eta);
    kernels::laplacian5(f, out, grid.nx_total(), grid.ny_total(), cx, cy);
    return out;
}

void scatter_pressure(std::span<const double> p_unknowns, FlowField &field, const NSConfig &cfg) {
    const Grid2D &g = *field.grid;
    if (p_unknowns.size() != g.num_unknowns()) {
        throw ContractViolation("scatter_pressure: unknown count does not match grid");
    }
    for (int j = 1; j <= g.n_eta(); ++j) {
        for (int i = 1; i <= g.n_xi(); ++i) {
            field.p[g.node(i, j)] = p_unknowns[g.unknown(i, j)];
        }
    }
    if (cfg.flow == FlowCase::cavity) {
        apply_neumann_ghosts(field.p, g);
    } else {
        apply_periodic_ghosts(field.p, g);
    }
}

std::vector<double> gather_interior(std::span<const double> f, const Grid2D &grid) {
    check_size(f, grid, "gather_interior");
    std::vector<double> out(grid.num_unknowns());
    for (int j = 1; j <= grid.n_eta(); ++j) {
        for (int i = 1; i <= grid.n_xi(); ++i) {
            out[grid.unknown(i, j)] = f[grid.node(i, j)];
        }
    }
    return out;
}

double kinetic_energy(const FlowField &field) {
    const Grid2D &g = *field.grid;
    double s = 0.0;
    for (int j = 1; j <= g.n_eta(); ++j) {
        for (int i = 1; i <= g.n_xi(); ++i) {
            const auto k = g.node(i, j);
            s += field.u[k] * field.u[k] + field.v[k] * field.v[k];
        }
    }
    return 0.5 * s / static_cast<double>(g.num_unknowns());
}

} // namespace qns
