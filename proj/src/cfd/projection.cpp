#include <algorithm>
#include <cmath>
#include <numeric>

#include "qns/cfd.hpp"
#include "qns/error.hpp"

namespace qns {

namespace {

void check_case_layout(const Grid2D &grid, const NSConfig &cfg) {
    if (cfg.flow == FlowCase::cavity && grid.periodic()) {
        throw ConfigError("cavity flow needs a walled grid layout");
    }
    if (cfg.flow == FlowCase::tgv && !grid.periodic()) {
        throw ConfigError("taylor-green flow needs a periodic grid layout");
    }
}

void apply_velocity_bc(std::vector<double> &u, std::vector<double> &v, const Grid2D &grid, const NSConfig &cfg) {
    if (cfg.flow == FlowCase::cavity) {
        apply_cavity_bc(u, v, grid, cfg.lid_speed);
    } else {
        apply_periodic_ghosts(u, grid);
        apply_periodic_ghosts(v, grid);
    }
}

bool all_finite(std::span<const double> f) {
    return std::all_of(f.begin(), f.end(), [](double x) { return std::isfinite(x); });
}

} // namespace

FlowField make_initial_field(std::shared_ptr<const Grid2D> grid, const NSConfig &cfg) {
    cfg.validate();
    check_case_layout(*grid, cfg);
    if (cfg.flow == FlowCase::tgv) {
        return tgv_field(std::move(grid), 0.0, cfg.nu);
    }
    FlowField f;
    const auto n = grid->num_nodes();
    f.grid = std::move(grid);
    f.u.assign(n, 0.0);
    f.v.assign(n, 0.0);
    f.p.assign(n, 0.0);
    apply_cavity_bc(f, cfg.lid_speed);
    return f;
}

VelocityPair advect_diffuse(const FlowField &field, const NSConfig &cfg) {
    const Grid2D &g = *field.grid;
    const auto ux = ddx(field.u, g);
    const auto uy = ddy(field.u, g);
    const auto vx = ddx(field.v, g);
    const auto vy = ddy(field.v, g);
    const auto lu = laplacian(field.u, g);
    const auto lv = laplacian(field.v, g);

    VelocityPair star{field.u, field.v};
    for (int j = 1; j <= g.n_eta(); ++j) {
        for (int i = 1; i <= g.n_xi(); ++i) {
            const auto k = g.node(i, j);
            const double u = field.u[k];
            const double v = field.v[k];
            star.u[k] = u + cfg.dt * (-(u * ux[k] + v * uy[k]) + cfg.nu * lu[k]);
            star.v[k] = v + cfg.dt * (-(u * vx[k] + v * vy[k]) + cfg.nu * lv[k]);
        }
    }
    apply_velocity_bc(star.u, star.v, g, cfg);
    return star;
}

std::vector<double> divergence_rhs(std::span<const double> u_star, std::span<const double> v_star,
                                   const Grid2D &grid, double dt) {
    if (!(dt > 0.0)) {
        throw ConfigError("divergence_rhs: time step must be positive");
    }
    const auto dx = ddx(u_star, grid);
    const auto dy = ddy(v_star, grid);
    std::vector<double> b(grid.num_unknowns());
    for (int j = 1; j <= grid.n_eta(); ++j) {
        for (int i = 1; i <= grid.n_xi(); ++i) {
            const auto k = grid.node(i, j);
            b[grid.unknown(i, j)] = (dx[k] + dy[k]) / dt;
        }
    }
    return b;
}

VelocityPair pressure_gradient(std::span<const double> p, const Grid2D &grid, GradientMethod method,
                               const GradientFn &analytic) {
    if (method == GradientMethod::central) {
        return {ddx(p, grid), ddy(p, grid)};
    }
    if (!analytic) {
        throw ContractViolation("pressure_gradient: analytic mode needs an expansion to differentiate");
    }
    VelocityPair g{std::vector<double>(grid.num_nodes(), 0.0), std::vector<double>(grid.num_nodes(), 0.0)};
    for (int j = 1; j <= grid.n_eta(); ++j) {
        for (int i = 1; i <= grid.n_xi(); ++i) {
            const auto [gx, gy] = analytic(i, j);
            g.u[grid.node(i, j)] = gx;
            g.v[grid.node(i, j)] = gy;
        }
    }
    return g;
}

VelocityPair project_velocity(const VelocityPair &star, const VelocityPair &grad_p, double dt) {
    if (star.u.size() != grad_p.u.size() || star.v.size() != grad_p.v.size()) {
        throw ContractViolation("project_velocity: field sizes differ");
    }
    VelocityPair next = star;
    for (std::size_t k = 0; k < next.u.size(); ++k) {
        next.u[k] -= dt * grad_p.u[k];
        next.v[k] -= dt * grad_p.v[k];
    }
    return next;
}

std::vector<double> flux_divergence(std::span<const double> u_star, std::span<const double> v_star,
                                    std::span<const double> p, const Grid2D &grid, double dt) {
    const auto dx = ddx(u_star, grid);
    const auto dy = ddy(v_star, grid);
    const auto lp = laplacian(p, grid);
    std::vector<double> out(grid.num_unknowns());
    for (int j = 1; j <= grid.n_eta(); ++j) {
        for (int i = 1; i <= grid.n_xi(); ++i) {
            const auto k = grid.node(i, j);
            out[grid.unknown(i, j)] = dx[k] + dy[k] - dt * lp[k];
        }
    }
    return out;
}

SparseSymMatrix pressure_matrix(const Grid2D &grid, const NSConfig &cfg) {
    check_case_layout(grid, cfg);
    return assemble_laplacian(grid, cfg.flow == FlowCase::cavity ? BoundaryKind::neumann : BoundaryKind::periodic);
}

StepRecord projection_step(FlowField &field, const NSConfig &cfg, const PressureSolveFn &solve,
                           GradientMethod gradient) {
    const Grid2D &g = *field.grid;
    StepRecord rec;
    rec.star = advect_diffuse(field, cfg);
    rec.b = divergence_rhs(rec.star.u, rec.star.v, g, cfg.dt);
    const double mean = std::accumulate(rec.b.begin(), rec.b.end(), 0.0) / static_cast<double>(rec.b.size());
    for (double &x : rec.b) {
        x -= mean;
    }

    auto sol = solve(rec.b);
    if (sol.p.size() != g.num_unknowns()) {
        throw ContractViolation("projection_step: pressure solve returned the wrong size");
    }
    scatter_pressure(sol.p, field, cfg);
    const auto grad = pressure_gradient(field.p, g, gradient, sol.gradient);
    auto next = project_velocity(rec.star, grad, cfg.dt);
    apply_velocity_bc(next.u, next.v, g, cfg);
    field.u = std::move(next.u);
    field.v = std::move(next.v);
    field.time += cfg.dt;
    ++field.step;
    rec.p = std::move(sol.p);

    if (!all_finite(field.u) || !all_finite(field.v) || !all_finite(field.p)) {
        throw InstabilityError("navier-stokes: non-finite value at step " + std::to_string(field.step), field.step);
    }

    const auto fd = flux_divergence(rec.star.u, rec.star.v, field.p, g, cfg.dt);
    const double fd_mean = std::accumulate(fd.begin(), fd.end(), 0.0) / static_cast<double>(fd.size());
    for (double x : fd) {
        rec.max_flux_divergence = std::max(rec.max_flux_divergence, std::abs(x - fd_mean));
    }
    return rec;
}

StepRecord classical_step(FlowField &field, const NSConfig &cfg, const DirectSolver &solver) {
    return projection_step(field, cfg, [&](std::span<const double> b) { return PressureSolution{solver.solve(b), {}}; });
}

RunResult classical_run(std::shared_ptr<const Grid2D> grid, const NSConfig &cfg, const RunOptions &opts) {
    RunResult res{make_initial_field(grid, cfg), {}, false};
    const DirectSolver solver(pressure_matrix(*grid, cfg));
    res.history.reserve(static_cast<std::size_t>(cfg.steps));
    for (int s = 0; s < cfg.steps; ++s) {
        const auto u_prev = res.field.u;
        const auto v_prev = res.field.v;
        const auto rec = classical_step(res.field, cfg, solver);
        double change = 0.0;
        for (std::size_t k = 0; k < u_prev.size(); ++k) {
            change = std::max({change, std::abs(res.field.u[k] - u_prev[k]), std::abs(res.field.v[k] - v_prev[k])});
        }
        res.history.push_back({res.field.step, res.field.time, kinetic_energy(res.field), change / cfg.dt,
                               rec.max_flux_divergence});
        if (opts.steady_tolerance > 0.0 && opts.check_interval > 0 && (s + 1) % opts.check_interval == 0 &&
            change / cfg.dt < opts.steady_tolerance) {
            res.converged = true;
            break;
        }
    }
    return res;
}

} // namespace qns
