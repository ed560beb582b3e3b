#include <cmath>
#include <numbers>

#include "doctest.h"
#include "qns/cfd.hpp"
#include "qns/error.hpp"
#include "qns/metrics.hpp"

using namespace qns;

namespace {

constexpr double pi = std::numbers::pi;

std::shared_ptr<const Grid2D> tgv_grid(int n) {
    return std::make_shared<const Grid2D>(build_periodic_grid(n, n, 2 * pi));
}

std::shared_ptr<const Grid2D> cavity_grid(int n, double beta = 2.5) {
    return std::make_shared<const Grid2D>(build_grid(n, n, StretchConfig::hyperbolic(beta)));
}

NSConfig tgv_config() {
    NSConfig cfg;
    cfg.flow = FlowCase::tgv;
    cfg.nu = 0.01;
    cfg.dt = 1e-3;
    cfg.steps = 200;
    return cfg;
}

double max_abs(std::span<const double> x) {
    double m = 0;
    for (double v : x) {
        m = std::max(m, std::abs(v));
    }
    return m;
}

double mean(std::span<const double> x) {
    double s = 0;
    for (double v : x) {
        s += v;
    }
    return s / static_cast<double>(x.size());
}

} // namespace

TEST_CASE("tgv exact solution") {
    const auto s = tgv_exact(pi / 2, 0.0, 0.0, 0.01);
    CHECK(s.u == doctest::Approx(1.0));
    CHECK(tgv_exact(0, 0, 0, 0.01).p == doctest::Approx(0.5));
    for (double x : {0.1, 1.3, 2.9}) {
        for (double y : {0.4, 2.2, 5.0}) {
            CHECK(tgv_exact(x, y, 0.7, 0.01).u == doctest::Approx(-tgv_exact(y, x, 0.7, 0.01).v));
        }
    }
    CHECK(tgv_exact(pi / 2, 0, 10.0, 0.01).u == doctest::Approx(std::exp(-0.2)));
    CHECK(tgv_exact(0, 0, 10.0, 0.01).p == doctest::Approx(0.5 * std::exp(-0.4)));
}

TEST_CASE("advect_diffuse trivial fields") {
    const auto g = cavity_grid(8);
    NSConfig cfg;
    cfg.lid_speed = 0.0;
    auto f = make_initial_field(g, cfg);
    const auto star = advect_diffuse(f, cfg);
    CHECK(max_abs(star.u) == 0.0);
    CHECK(max_abs(star.v) == 0.0);

    const auto pg = tgv_grid(8);
    auto uf = make_initial_field(pg, tgv_config());
    std::fill(uf.u.begin(), uf.u.end(), 0.7);
    std::fill(uf.v.begin(), uf.v.end(), 0.0);
    const auto s2 = advect_diffuse(uf, tgv_config());
    for (int j = 1; j <= 8; ++j) {
        for (int i = 1; i <= 8; ++i) {
            CHECK(s2.u[pg->node(i, j)] == doctest::Approx(0.7).epsilon(1e-15));
            CHECK(s2.v[pg->node(i, j)] == 0.0);
        }
    }
}

TEST_CASE("advect_diffuse matches a direct periodic stencil") {
    const int n = 16;
    const auto g = tgv_grid(n);
    const auto cfg = tgv_config();
    const auto f = make_initial_field(g, cfg);
    const auto star = advect_diffuse(f, cfg);
    const double h = 2 * pi / n;
    auto at = [&](const std::vector<double> &a, int i, int j) {
        const int ii = (i + n) % n, jj = (j + n) % n;
        return a[g->node(ii + 1, jj + 1)];
    };
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const double u = at(f.u, i, j), v = at(f.v, i, j);
            auto update = [&](const std::vector<double> &q) {
                const double qx = (at(q, i + 1, j) - at(q, i - 1, j)) / (2 * h);
                const double qy = (at(q, i, j + 1) - at(q, i, j - 1)) / (2 * h);
                const double lap = (at(q, i + 1, j) + at(q, i - 1, j) + at(q, i, j + 1) + at(q, i, j - 1) -
                                    4 * at(q, i, j)) /
                                   (h * h);
                return at(q, i, j) + cfg.dt * (-(u * qx + v * qy) + cfg.nu * lap);
            };
            CHECK(std::abs(star.u[g->node(i + 1, j + 1)] - update(f.u)) < 1e-12);
            CHECK(std::abs(star.v[g->node(i + 1, j + 1)] - update(f.v)) < 1e-12);
        }
    }
}

TEST_CASE("divergence_rhs examples") {
    const auto g = std::make_shared<const Grid2D>(build_grid(10, 10, StretchConfig::uniform()));
    const double dt = 0.01;
    std::vector<double> u(g->num_nodes()), v(g->num_nodes(), 0.0);
    for (int j = 0; j <= 11; ++j) {
        for (int i = 0; i <= 11; ++i) {
            u[g->node(i, j)] = g->xi.coord[static_cast<std::size_t>(i)];
        }
    }
    for (double b : divergence_rhs(u, v, *g, dt)) {
        CHECK(b == doctest::Approx(1.0 / dt));
    }
    std::fill(u.begin(), u.end(), 3.0);
    std::fill(v.begin(), v.end(), -2.0);
    CHECK(max_abs(divergence_rhs(u, v, *g, dt)) < 1e-12);
}

TEST_CASE("divergence of a solenoidal field decays at second order") {
    // Stream function ψ = sin²(πx)·sin²(πy) sampled on stretched grids.
    std::vector<double> err;
    for (int n : {16, 32, 64}) {
        const auto g = cavity_grid(n);
        std::vector<double> u(g->num_nodes()), v(g->num_nodes());
        for (int j = 0; j <= n + 1; ++j) {
            for (int i = 0; i <= n + 1; ++i) {
                const double x = g->xi.coord[static_cast<std::size_t>(i)];
                const double y = g->eta.coord[static_cast<std::size_t>(j)];
                u[g->node(i, j)] = pi * std::pow(std::sin(pi * x), 2) * std::sin(2 * pi * y);
                v[g->node(i, j)] = -pi * std::sin(2 * pi * x) * std::pow(std::sin(pi * y), 2);
            }
        }
        err.push_back(max_abs(divergence_rhs(u, v, *g, 1.0)));
    }
    CHECK(err[0] / err[1] > 3.0);
    CHECK(err[1] / err[2] > 3.5);
}

TEST_CASE("pressure_gradient examples") {
    const auto g = std::make_shared<const Grid2D>(build_grid(8, 8, StretchConfig::uniform()));
    std::vector<double> p(g->num_nodes(), 4.2);
    auto grad = pressure_gradient(p, *g, GradientMethod::central);
    CHECK(max_abs(grad.u) == 0.0);
    CHECK(max_abs(grad.v) == 0.0);
    for (int j = 0; j <= 9; ++j) {
        for (int i = 0; i <= 9; ++i) {
            p[g->node(i, j)] = g->xi.coord[static_cast<std::size_t>(i)];
        }
    }
    grad = pressure_gradient(p, *g, GradientMethod::central);
    for (int j = 1; j <= 8; ++j) {
        for (int i = 1; i <= 8; ++i) {
            CHECK(grad.u[g->node(i, j)] == doctest::Approx(1.0));
            CHECK(std::abs(grad.v[g->node(i, j)]) < 1e-12);
        }
    }
    CHECK_THROWS_AS((void)pressure_gradient(p, *g, GradientMethod::analytic), ContractViolation);
    const GradientFn fn = [](int i, int j) { return std::pair{double(i), double(-j)}; };
    grad = pressure_gradient(p, *g, GradientMethod::analytic, fn);
    CHECK(grad.u[g->node(3, 5)] == 3.0);
    CHECK(grad.v[g->node(3, 5)] == -5.0);
}

TEST_CASE("tgv pressure gradient converges at second order") {
    std::vector<double> err;
    for (int n : {16, 32, 64}) {
        const auto g = tgv_grid(n);
        const auto f = tgv_field(g, 0.0, 0.01);
        const auto grad = pressure_gradient(f.p, *g, GradientMethod::central);
        double e = 0;
        for (int j = 1; j <= n; ++j) {
            for (int i = 1; i <= n; ++i) {
                const double x = g->xi.coord[static_cast<std::size_t>(i)];
                const double y = g->eta.coord[static_cast<std::size_t>(j)];
                e = std::max(e, std::abs(grad.u[g->node(i, j)] + 0.5 * std::sin(2 * x)));
                e = std::max(e, std::abs(grad.v[g->node(i, j)] + 0.5 * std::sin(2 * y)));
            }
        }
        err.push_back(e);
    }
    CHECK(err[0] / err[1] == doctest::Approx(4.0).epsilon(0.05));
    CHECK(err[1] / err[2] == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("project_velocity is affine in the gradient") {
    const VelocityPair star{{1.0, 2.0, 3.0}, {-1.0, 0.5, 0.0}};
    const VelocityPair zero{{0, 0, 0}, {0, 0, 0}};
    const auto same = project_velocity(star, zero, 0.1);
    CHECK(same.u == star.u);
    CHECK(same.v == star.v);

    const VelocityPair g1{{0.3, -0.2, 1.0}, {0.1, 0.1, 0.4}};
    const VelocityPair g2{{-1.1, 0.6, 0.2}, {0.0, 2.0, -0.5}};
    VelocityPair g12{{}, {}};
    for (std::size_t k = 0; k < 3; ++k) {
        g12.u.push_back(g1.u[k] + g2.u[k]);
        g12.v.push_back(g1.v[k] + g2.v[k]);
    }
    const auto both = project_velocity(star, g12, 0.1);
    const auto chained = project_velocity(project_velocity(star, g1, 0.1), g2, 0.1);
    for (std::size_t k = 0; k < 3; ++k) {
        CHECK(std::abs(both.u[k] - chained.u[k]) < 1e-12);
        CHECK(std::abs(both.v[k] - chained.v[k]) < 1e-12);
    }
}

TEST_CASE("boundary conditions") {
    const auto g = cavity_grid(8);
    NSConfig cfg;
    cfg.lid_speed = 1.5;
    auto f = make_initial_field(g, cfg);
    std::fill(f.u.begin(), f.u.end(), 0.3);
    std::fill(f.v.begin(), f.v.end(), -0.2);
    apply_cavity_bc(f, cfg.lid_speed);
    for (int k = 0; k <= 9; ++k) {
        CHECK(f.u[g->node(k, 9)] == 1.5);
        CHECK(f.v[g->node(k, 9)] == 0.0);
        CHECK(f.u[g->node(k, 0)] == 0.0);
        CHECK(f.v[g->node(k, 0)] == 0.0);
    }
    for (int j = 0; j <= 8; ++j) {
        CHECK(f.u[g->node(0, j)] == 0.0);
        CHECK(f.u[g->node(9, j)] == 0.0);
        CHECK(f.v[g->node(0, j)] == 0.0);
        CHECK(f.v[g->node(9, j)] == 0.0);
    }

    std::vector<double> p(g->num_nodes());
    for (std::size_t k = 0; k < p.size(); ++k) {
        p[k] = std::sin(0.37 * static_cast<double>(k));
    }
    apply_neumann_ghosts(p, *g);
    for (int j = 1; j <= 8; ++j) {
        CHECK(p[g->node(0, j)] == p[g->node(1, j)]);
        CHECK(p[g->node(9, j)] == p[g->node(8, j)]);
        CHECK(p[g->node(j, 0)] == p[g->node(j, 1)]);
        CHECK(p[g->node(j, 9)] == p[g->node(j, 8)]);
    }

    const auto pg = tgv_grid(8);
    std::vector<double> q(pg->num_nodes());
    for (std::size_t k = 0; k < q.size(); ++k) {
        q[k] = std::cos(1.7 * static_cast<double>(k));
    }
    apply_periodic_ghosts(q, *pg);
    for (int j = 1; j <= 8; ++j) {
        CHECK(q[pg->node(0, j)] == q[pg->node(8, j)]);
        CHECK(q[pg->node(9, j)] == q[pg->node(1, j)]);
        CHECK(q[pg->node(j, 0)] == q[pg->node(j, 8)]);
        CHECK(q[pg->node(j, 9)] == q[pg->node(j, 1)]);
    }
}

TEST_CASE("case and layout must agree") {
    NSConfig cfg;
    CHECK_THROWS_AS((void)make_initial_field(tgv_grid(8), cfg), ConfigError);
    cfg.flow = FlowCase::tgv;
    CHECK_THROWS_AS((void)make_initial_field(cavity_grid(8), cfg), ConfigError);
    cfg.dt = 0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg.dt = 1e-3;
    cfg.nu = -1;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("zero lid keeps the cavity at rest") {
    NSConfig cfg;
    cfg.lid_speed = 0.0;
    cfg.steps = 20;
    const auto r = classical_run(cavity_grid(8), cfg);
    CHECK(max_abs(r.field.u) == 0.0);
    CHECK(max_abs(r.field.v) == 0.0);
    CHECK(max_abs(r.field.p) == 0.0);
}

TEST_CASE("projection removes divergence with the direct solver") {
    const auto g = cavity_grid(16);
    NSConfig cfg;
    cfg.steps = 50;
    auto f = make_initial_field(g, cfg);
    const DirectSolver solver(pressure_matrix(*g, cfg));
    for (int s = 0; s < cfg.steps; ++s) {
        const auto rec = classical_step(f, cfg, solver);
        CHECK(rec.max_flux_divergence <= 1e-8 * cfg.dt * std::max(1.0, max_abs(rec.b)));
        CHECK(std::abs(mean(rec.p)) < 1e-10);
        CHECK(std::abs(mean(rec.b)) < 1e-8 * std::max(1.0, max_abs(rec.b)));
        // All-Neumann: the compatibility shift of b leaves a uniform offset.
        auto fd = flux_divergence(rec.star.u, rec.star.v, f.p, *g, cfg.dt);
        const double offset = mean(fd);
        for (double &x : fd) {
            x -= offset;
        }
        CHECK(max_abs(fd) <= 1e-8 * cfg.dt * std::max(1.0, max_abs(rec.b)));
    }

    const auto pg = tgv_grid(16);
    auto tf = make_initial_field(pg, tgv_config());
    const DirectSolver psolver(pressure_matrix(*pg, tgv_config()));
    for (int s = 0; s < 20; ++s) {
        const auto rec = classical_step(tf, tgv_config(), psolver);
        CHECK(rec.max_flux_divergence <= 1e-8 * 1e-3 * std::max(1.0, max_abs(rec.b)));
        CHECK(std::abs(mean(rec.p)) < 1e-10);
    }
}

TEST_CASE("classical tgv run") {
    const auto g = tgv_grid(16);
    const auto cfg = tgv_config();
    const auto r = classical_run(g, cfg);
    REQUIRE(r.history.size() == 200);

    double prev = kinetic_energy(make_initial_field(g, cfg));
    const double e0 = prev;
    for (const auto &h : r.history) {
        CHECK(h.kinetic_energy <= prev + 1e-15);
        CHECK(h.kinetic_energy / e0 == doctest::Approx(std::exp(-4 * cfg.nu * h.time)).epsilon(0.02));
        prev = h.kinetic_energy;
    }

    const auto exact = tgv_field(g, r.field.time, cfg.nu);
    const auto u = gather_interior(r.field.u, *g);
    const auto ue = gather_interior(exact.u, *g);
    CHECK(metric_normalized_are(u, ue).mean < 0.02);

    // u odd and v even under x → −x.
    for (int j = 1; j <= 16; ++j) {
        for (int i = 1; i <= 16; ++i) {
            const int mi = (16 - (i - 1)) % 16 + 1;
            CHECK(std::abs(r.field.u[g->node(i, j)] + r.field.u[g->node(mi, j)]) < 1e-10);
            CHECK(std::abs(r.field.v[g->node(i, j)] - r.field.v[g->node(mi, j)]) < 1e-10);
        }
    }
}

TEST_CASE("cavity stays finite over the reference configuration") {
    NSConfig cfg;
    cfg.nu = 0.01;
    cfg.dt = 1e-3;
    cfg.steps = 2000;
    const auto r = classical_run(cavity_grid(16), cfg);
    CHECK(r.history.size() == 2000);
    for (double x : r.field.u) {
        REQUIRE(std::isfinite(x));
    }
    CHECK(std::abs(mean(gather_interior(r.field.p, *r.field.grid))) < 1e-10);
    CHECK(r.field.time == doctest::Approx(2.0));
}

TEST_CASE("blow-up raises an instability error naming the step") {
    NSConfig cfg;
    cfg.nu = 0.01;
    cfg.dt = 5.0;
    cfg.steps = 200;
    cfg.lid_speed = 50.0;
    try {
        (void)classical_run(cavity_grid(8), cfg);
        FAIL("expected InstabilityError");
    } catch (const InstabilityError &e) {
        CHECK(e.step() >= 1);
        CHECK(std::string(e.what()).find(std::to_string(e.step())) != std::string::npos);
    }
}
