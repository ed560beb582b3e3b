#include <cmath>
#include <numeric>

#include "doctest.h"
#include "qns/error.hpp"
#include "qns/hybrid.hpp"

using namespace qns;

namespace {

std::shared_ptr<const Grid2D> cavity_grid(int n) {
    return std::make_shared<const Grid2D>(build_grid(n, n, StretchConfig::hyperbolic(2.5)));
}

HybridConfig cavity_config(int steps) {
    HybridConfig cfg;
    cfg.ns.nu = 0.01;
    cfg.ns.dt = 1e-3;
    cfg.ns.steps = steps;
    cfg.hhl.n_c = 8;
    return cfg;
}

double mean(std::span<const double> x) {
    return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double max_diff(std::span<const double> a, std::span<const double> b) {
    double m = 0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        m = std::max(m, std::abs(a[k] - b[k]));
    }
    return m;
}

// Pressure rhs of the first cavity step from rest.
std::vector<double> first_step_rhs(const std::shared_ptr<const Grid2D> &g, const NSConfig &ns) {
    const auto f = make_initial_field(g, ns);
    const auto star = advect_diffuse(f, ns);
    auto b = divergence_rhs(star.u, star.v, *g, ns.dt);
    const double m = mean(b);
    for (double &x : b) {
        x -= m;
    }
    return b;
}

} // namespace

TEST_CASE("calibration recovers a proportional readout exactly") {
    const std::vector<double> ref{0.4, -1.0, 0.25, 0.35};
    for (double k : {3.5, -0.02, 1.0}) {
        std::vector<double> x(ref.size());
        for (std::size_t i = 0; i < ref.size(); ++i) {
            x[i] = k * ref[i];
        }
        const auto c = calibrate_pressure(x, ref);
        CHECK(c.scale == doctest::Approx(1.0 / k));
        CHECK(max_diff(c.p, ref) < 1e-12);
    }
    // Gauge shift on a non-zero-mean readout.
    const std::vector<double> shifted{1.0, 2.0, 3.0};
    const auto c = calibrate_pressure(shifted, shifted);
    CHECK(std::abs(mean(c.p)) < 1e-15);
    CHECK(c.p[0] == doctest::Approx(-1.0));

    const std::vector<double> zero(4, 0.0);
    const auto z = calibrate_pressure(zero, ref);
    CHECK(z.scale == 0.0);
    CHECK(max_diff(z.p, zero) == 0.0);
    CHECK_THROWS_AS((void)calibrate_pressure(shifted, ref), ContractViolation);
}

TEST_CASE("proportional pressure reproduces the classical step") {
    const auto g = cavity_grid(16);
    NSConfig ns;
    ns.steps = 30;
    const DirectSolver solver(pressure_matrix(*g, ns));
    auto classical = make_initial_field(g, ns);
    auto hybrid = make_initial_field(g, ns);
    for (int s = 0; s < ns.steps; ++s) {
        (void)classical_step(classical, ns, solver);
        (void)projection_step(hybrid, ns, [&](std::span<const double> b) {
            const auto ref = solver.solve(b);
            std::vector<double> readout(ref.size());
            for (std::size_t k = 0; k < ref.size(); ++k) {
                readout[k] = -0.037 * ref[k];
            }
            return PressureSolution{calibrate_pressure(readout, ref).p, {}};
        });
    }
    CHECK(max_diff(classical.u, hybrid.u) < 1e-10);
    CHECK(max_diff(classical.v, hybrid.v) < 1e-10);
    CHECK(max_diff(classical.p, hybrid.p) < 1e-10);
}

TEST_CASE("zero rhs gives zero pressure") {
    const auto g = cavity_grid(8);
    auto cfg = cavity_config(1);
    const HybridPressureSolver solver(g, cfg);
    const std::vector<double> zero(64, 0.0);
    const auto r = solver.solve(zero, zero);
    CHECK(r.solution.p == zero);

    cfg.readout.mode = ReadoutMode::chebyshev;
    cfg.readout.m = 4;
    cfg.gradient = GradientMethod::analytic;
    const HybridPressureSolver qs(g, cfg);
    const auto q = qs.solve(zero, zero);
    CHECK(q.solution.p == zero);
    REQUIRE(q.solution.gradient);
    CHECK(q.solution.gradient(3, 4) == std::pair{0.0, 0.0});
}

TEST_CASE("single pressure solve diagnostics") {
    const auto g = cavity_grid(16);
    auto cfg = cavity_config(1);
    const auto b = first_step_rhs(g, cfg.ns);
    const auto ref = direct_solve(pressure_matrix(*g, cfg.ns), b);
    const auto full = hybrid_pressure_solve(g, b, ref, cfg);
    CHECK(std::abs(mean(full.solution.p)) < 1e-12);
    CHECK(std::isfinite(full.diagnostics.pressure_are));
    CHECK(full.diagnostics.pressure_residual < 0.5);
    CHECK(full.diagnostics.success_probability > 0.0);
    CHECK(full.diagnostics.gram_condition == 1.0);
    CHECK(full.diagnostics.scale > 0.0);

    cfg.readout.mode = ReadoutMode::chebyshev;
    cfg.readout.shots = ShotModel::sampled(10'000'000, 1);
    const auto q = hybrid_pressure_solve(g, b, ref, cfg, 0);
    CHECK(std::abs(mean(q.solution.p)) < 1e-12);
    CHECK(q.diagnostics.gram_condition > 1.0);
    const auto q2 = hybrid_pressure_solve(g, b, ref, cfg, 0);
    CHECK(q.solution.p == q2.solution.p);
    const auto q3 = hybrid_pressure_solve(g, b, ref, cfg, 1);
    CHECK(q.solution.p != q3.solution.p);
}

TEST_CASE("configuration checks") {
    const auto g = cavity_grid(8);
    auto cfg = cavity_config(1);
    cfg.hhl.n_b = 5;
    CHECK_THROWS_AS(cfg.validate(*g), ConfigError);
    cfg.hhl.n_b = 0;
    cfg.gradient = GradientMethod::analytic;
    CHECK_THROWS_AS(cfg.validate(*g), ConfigError);
    cfg.readout.mode = ReadoutMode::chebyshev;
    cfg.readout.m = 8;
    CHECK_NOTHROW(cfg.validate(*g));
    cfg.readout.m = 9;
    CHECK_THROWS_AS(cfg.validate(*g), ConfigError);
    cfg.readout.m = 0;
    CHECK_THROWS_AS(cfg.validate(*g), ConfigError);
}

TEST_CASE("full-rank exact tomography matches the full-state readout") {
    const auto g = cavity_grid(4);
    auto cfg = cavity_config(15);
    const auto full = hybrid_run(g, cfg);
    cfg.readout.mode = ReadoutMode::chebyshev;
    cfg.readout.m = 4;
    cfg.readout.shots = ShotModel::exact();
    const auto cheb = hybrid_run(g, cfg);
    CHECK(max_diff(full.field.u, cheb.field.u) < 1e-8);
    CHECK(max_diff(full.field.v, cheb.field.v) < 1e-8);
    CHECK(max_diff(full.field.p, cheb.field.p) < 1e-8);
    for (std::size_t s = 0; s < full.history.size(); ++s) {
        CHECK(full.history[s].velocity_are == doctest::Approx(cheb.history[s].velocity_are).epsilon(1e-6));
    }
}

TEST_CASE("hybrid steps keep the zero-mean gauge") {
    const auto g = cavity_grid(8);
    auto cfg = cavity_config(10);
    cfg.readout.mode = ReadoutMode::chebyshev;
    cfg.readout.m = 4;
    cfg.readout.shots = ShotModel::sampled(100'000, 3);
    const HybridPressureSolver qs(g, cfg);
    const DirectSolver cs(qs.matrix());
    auto f = make_initial_field(g, cfg.ns);
    for (int s = 0; s < cfg.ns.steps; ++s) {
        const auto rec = projection_step(f, cfg.ns, [&](std::span<const double> b) {
            return qs.solve(b, cs.solve(b), static_cast<std::uint64_t>(s)).solution;
        });
        CHECK(std::abs(mean(rec.p)) < 1e-12);
        CHECK(std::abs(mean(gather_interior(f.p, *g))) < 1e-12);
    }
}

TEST_CASE("analytic gradient mode runs and stays finite") {
    const auto g = cavity_grid(8);
    auto cfg = cavity_config(10);
    cfg.readout.mode = ReadoutMode::chebyshev;
    cfg.readout.m = 6;
    cfg.readout.shots = ShotModel::exact();
    cfg.gradient = GradientMethod::analytic;
    const auto r = hybrid_run(g, cfg);
    REQUIRE(r.history.size() == 10);
    for (const auto &d : r.history) {
        CHECK(std::isfinite(d.velocity_are));
    }
}

TEST_CASE("pressure residual degrades as m shrinks") {
    const auto g = cavity_grid(16);
    std::vector<double> avg;
    for (int m : {10, 6, 4, 2}) {
        auto cfg = cavity_config(12);
        cfg.readout.mode = ReadoutMode::chebyshev;
        cfg.readout.m = m;
        cfg.readout.shots = ShotModel::sampled(10'000'000, 7);
        const auto r = hybrid_run(g, cfg);
        double s = 0;
        for (const auto &d : r.history) {
            s += d.pressure_residual;
        }
        avg.push_back(s / static_cast<double>(r.history.size()));
    }
    for (std::size_t k = 1; k < avg.size(); ++k) {
        CHECK(avg[k] > avg[k - 1]);
    }
}

TEST_CASE("cavity velocity error concentrates in the lower cavity") {
    const auto g = cavity_grid(16);
    auto cfg = cavity_config(200);
    cfg.readout.mode = ReadoutMode::chebyshev;
    cfg.readout.m = 10;
    cfg.readout.shots = ShotModel::sampled(10'000'000, 1);
    const auto r = hybrid_run(g, cfg);
    CHECK(r.velocity_are.mean <= 0.15);
    CHECK(r.velocity_are.max >= 10 * r.velocity_are.mean);
    const auto j = static_cast<int>(r.velocity_are.argmax / 16) + 1;
    CHECK(j <= 8);
}
