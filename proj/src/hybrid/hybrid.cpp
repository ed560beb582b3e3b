#include <algorithm>
#include <cmath>
#include <numeric>

#include "qns/error.hpp"
#include "qns/hybrid.hpp"
#include "qns/metrics.hpp"

namespace qns {

void HybridConfig::validate(const Grid2D &grid) const {
    ns.validate();
    hhl.validate();
    readout.shots.validate();
    if (hhl.n_b > 0 && grid.num_unknowns() > (std::size_t{1} << hhl.n_b)) {
        throw ConfigError("hybrid: grid interior does not fit into 2^n_b amplitudes");
    }
    if (readout.mode == ReadoutMode::chebyshev) {
        if (readout.m < 1 || readout.m > std::min(grid.n_xi(), grid.n_eta())) {
            throw ConfigError("hybrid: chebyshev m must lie in [1, grid size]");
        }
    } else if (gradient == GradientMethod::analytic) {
        throw ConfigError("hybrid: analytic gradient needs the chebyshev readout");
    }
}

Calibration calibrate_pressure(std::span<const double> readout, std::span<const double> reference) {
    if (readout.size() != reference.size()) {
        throw ContractViolation("calibrate_pressure: length mismatch");
    }
    Calibration c{std::vector<double>(readout.size(), 0.0), 0.0};
    const double nx = l2_norm(readout);
    const double nr = l2_norm(reference);
    if (nx == 0.0 || nr == 0.0) {
        return c;
    }
    double corr = 0.0;
    for (std::size_t k = 0; k < readout.size(); ++k) {
        corr += readout[k] * reference[k];
    }
    c.scale = (corr < 0.0 ? -1.0 : 1.0) * nr / nx;
    for (std::size_t k = 0; k < readout.size(); ++k) {
        c.p[k] = c.scale * readout[k];
    }
    const double mean = std::accumulate(c.p.begin(), c.p.end(), 0.0) / static_cast<double>(c.p.size());
    for (double &x : c.p) {
        x -= mean;
    }
    return c;
}

namespace {

std::vector<double> interior_coords(const Axis &axis) {
    return {axis.coord.begin() + 1, axis.coord.begin() + 1 + axis.n};
}

} // namespace

HybridPressureSolver::HybridPressureSolver(std::shared_ptr<const Grid2D> grid, const HybridConfig &cfg)
    : grid_((cfg.validate(*grid), std::move(grid))), cfg_(cfg), a_(pressure_matrix(*grid_, cfg.ns)),
      hhl_(a_, cfg.hhl) {
    if (cfg_.readout.mode == ReadoutMode::chebyshev) {
        const auto xs = interior_coords(grid_->xi);
        const auto ys = interior_coords(grid_->eta);
        basis_ = ChebyBasis::build_2d(xs, ys, cfg_.readout.m);
    }
}

HybridPressure HybridPressureSolver::solve(std::span<const double> b, std::span<const double> reference,
                                           std::uint64_t stream) const {
    const std::size_t n = grid_->num_unknowns();
    if (b.size() != n || reference.size() != n) {
        throw ContractViolation("hybrid pressure solve: vector length does not match the grid");
    }
    HybridPressure out;
    auto &d = out.diagnostics;
    if (basis_) {
        d.gram_condition = basis_->gram_condition();
    }
    const double b_norm = l2_norm(b);
    if (b_norm == 0.0) {
        out.solution.p.assign(n, 0.0);
        if (cfg_.gradient == GradientMethod::analytic) {
            out.solution.gradient = [](int, int) { return std::pair{0.0, 0.0}; };
        }
        return out;
    }

    const HHLResult r = hhl_.solve(b);
    d.success_probability = r.success_probability;

    std::vector<double> readout;
    std::vector<double> coeffs;
    if (basis_) {
        auto e = reconstruct(r.solution, *basis_, cfg_.readout.shots, stream);
        readout = std::move(e.values);
        coeffs = std::move(e.coefficients);
    } else {
        readout = r.solution;
    }

    auto cal = calibrate_pressure(readout, reference);
    d.scale = cal.scale;
    out.solution.p = std::move(cal.p);

    if (cfg_.gradient == GradientMethod::analytic) {
        for (double &c : coeffs) {
            c *= cal.scale;
        }
        out.solution.gradient = [basis = &*basis_, coeffs = std::move(coeffs)](int i, int j) {
            return basis->gradient_at(coeffs, static_cast<std::size_t>(i - 1), static_cast<std::size_t>(j - 1));
        };
    }

    d.pressure_are = metric_are(out.solution.p, reference).mean;
    const auto ap = a_.multiply(out.solution.p);
    double res = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        res += (ap[k] - b[k]) * (ap[k] - b[k]);
    }
    d.pressure_residual = std::sqrt(res) / b_norm;
    return out;
}

HybridPressure hybrid_pressure_solve(std::shared_ptr<const Grid2D> grid, std::span<const double> b,
                                     std::span<const double> reference, const HybridConfig &cfg,
                                     std::uint64_t stream) {
    const HybridPressureSolver solver(std::move(grid), cfg);
    return solver.solve(b, reference, stream);
}

std::vector<double> interior_speed(const FlowField &field) {
    const Grid2D &g = *field.grid;
    std::vector<double> s(g.num_unknowns());
    for (int j = 1; j <= g.n_eta(); ++j) {
        for (int i = 1; i <= g.n_xi(); ++i) {
            const auto k = g.node(i, j);
            s[g.unknown(i, j)] = std::hypot(field.u[k], field.v[k]);
        }
    }
    return s;
}

HybridRunResult hybrid_run(std::shared_ptr<const Grid2D> grid, const HybridConfig &cfg) {
    const HybridPressureSolver qsolver(grid, cfg);
    const DirectSolver csolver(qsolver.matrix());

    HybridRunResult res{make_initial_field(grid, cfg.ns), make_initial_field(grid, cfg.ns), {}, {}, 0.0, 0.0};
    res.history.reserve(static_cast<std::size_t>(cfg.ns.steps));
    for (int s = 0; s < cfg.ns.steps; ++s) {
        StepDiagnostics diag;
        const auto solve = [&](std::span<const double> b) {
            const auto reference = csolver.solve(b);
            auto hp = qsolver.solve(b, reference, static_cast<std::uint64_t>(s));
            diag = hp.diagnostics;
            return std::move(hp.solution);
        };
        projection_step(res.field, cfg.ns, solve, cfg.gradient);
        (void)classical_step(res.twin, cfg.ns, csolver);

        diag.step = res.field.step;
        diag.time = res.field.time;
        diag.velocity_are = metric_are(interior_speed(res.field), interior_speed(res.twin)).mean;
        res.history.push_back(diag);
    }

    res.velocity_are = metric_are(interior_speed(res.field), interior_speed(res.twin));
    if (cfg.ns.flow == FlowCase::tgv) {
        const Grid2D &g = *grid;
        const auto exact = tgv_field(grid, res.field.time, cfg.ns.nu);
        double vel_err = 0.0, vel_max = 0.0, p_err = 0.0, p_max = 0.0;
        for (int j = 1; j <= g.n_eta(); ++j) {
            for (int i = 1; i <= g.n_xi(); ++i) {
                const auto k = g.node(i, j);
                vel_err += std::hypot(res.field.u[k] - exact.u[k], res.field.v[k] - exact.v[k]);
                vel_max = std::max(vel_max, std::hypot(exact.u[k], exact.v[k]));
                p_err += std::abs(res.field.p[k] - exact.p[k]);
                p_max = std::max(p_max, std::abs(exact.p[k]));
            }
        }
        const auto n = static_cast<double>(g.num_unknowns());
        res.velocity_nare = vel_err / n / vel_max;
        res.pressure_nare = p_err / n / p_max;
    }
    return res;
}

} // namespace qns
