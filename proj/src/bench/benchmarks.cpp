#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <sstream>

#include "qns/bench.hpp"
#include "qns/error.hpp"
#include "qns/hybrid.hpp"
#include "qns/metrics.hpp"
#include "qns/qst.hpp"

namespace qns {

double poisson2d_source(double x, double) {
    const double h = x > 0.5 ? 1.0 : (x < 0.5 ? 0.0 : 0.5);
    return 4.0 - 8.0 * h;
}

double poisson2d_boundary(double x, double y) {
    if (x <= 0.0) {
        return 0.5;
    }
    if (x >= 1.0) {
        return std::sin(y);
    }
    if (y <= 0.0) {
        return (x - 0.5) * (x - 1.0);
    }
    return 0.5 * (x - 1.0);
}

double cheb_demo_function(double x) { return std::log(x + 2.0) * std::sin(5.0 * std::exp(x + 1.0)); }

bool BenchmarkReport::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check &c) { return c.passed(); });
}

std::string BenchmarkReport::to_text() const {
    std::ostringstream os;
    os.precision(10);
    os << "benchmark " << name << "\n";
    if (!command.empty()) {
        os << "command   " << command << "\n";
    }
    os << "seed      " << seed << "\n";
    os << "config\n";
    for (const auto &[k, v] : config) {
        os << "  " << k << " = " << v << "\n";
    }
    os << "metrics\n";
    for (const auto &[k, v] : metrics) {
        os << "  " << k << " = " << v << "\n";
    }
    if (!checks.empty()) {
        os << "checks\n";
        for (const auto &c : checks) {
            os << "  " << (c.passed() ? "PASS " : "FAIL ") << c.name << " = " << c.value << " (limit " << c.threshold
               << ")\n";
        }
    }
    os << "artifacts\n";
    for (const auto &a : artifacts) {
        os << "  " << a.string() << "\n";
    }
    os << "elapsed   " << seconds << " s\n";
    return os.str();
}

const std::vector<std::string> &benchmark_names() {
    static const std::vector<std::string> names{"poisson1d",        "poisson2d",       "nc-sweep",      "cheb-demo",
                                                "cavity-classical", "cavity-fullstate", "cavity-hybrid", "tgv-hybrid"};
    return names;
}

namespace {

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(12);
    os << x;
    return os.str();
}

std::string backend_name(EvolutionBackend b) { return b == EvolutionBackend::spectral ? "spectral" : "trotter"; }

StretchConfig stretch_from(const BenchOptions &o) {
    if (o.beta < 0.0) {
        throw ConfigError("--beta must be non-negative");
    }
    return o.beta > 0.0 ? StretchConfig::hyperbolic(o.beta) : StretchConfig::uniform();
}

HHLConfig hhl_from(const BenchOptions &o) {
    HHLConfig h;
    h.n_c = o.clock_qubits.value_or(8);
    h.trotter_steps = o.trotter_steps;
    h.backend = o.backend;
    h.validate();
    return h;
}

class Runner {
  public:
    Runner(std::string name, const BenchOptions &opts, const std::string &command) : o_(opts) {
        r_.name = std::move(name);
        r_.command = command;
        r_.seed = opts.seed;
        dir_ = opts.out / r_.name;
        std::filesystem::create_directories(dir_);
    }

    BenchmarkReport finish(double seconds) {
        for (const auto &[k, v] : r_.metrics) {
            if (!std::isfinite(v)) {
                throw ConsistencyError("benchmark " + r_.name + ": metric " + k + " is not finite");
            }
        }
        r_.seconds = seconds;
        const auto metrics_path = dir_ / "metrics.csv";
        {
            CsvWriter w(metrics_path, {"name", "value"});
            for (const auto &[k, v] : r_.metrics) {
                w << k << v;
                w.end_row();
            }
        }
        r_.artifacts.push_back(metrics_path);
        const auto report_path = dir_ / "report.txt";
        r_.artifacts.push_back(report_path);
        std::ofstream(report_path) << r_.to_text();
        return std::move(r_);
    }

    void run() {
        const auto &n = r_.name;
        if (n == "poisson1d") {
            poisson1d();
        } else if (n == "poisson2d") {
            poisson2d();
        } else if (n == "nc-sweep") {
            sweep();
        } else if (n == "cheb-demo") {
            cheb_demo();
        } else if (n == "cavity-classical") {
            cavity_classical();
        } else if (n == "cavity-fullstate") {
            hybrid(FlowCase::cavity, ReadoutMode::full_state);
        } else if (n == "cavity-hybrid") {
            hybrid(FlowCase::cavity, ReadoutMode::chebyshev);
        } else if (n == "tgv-hybrid") {
            hybrid(FlowCase::tgv, ReadoutMode::chebyshev);
        } else {
            throw ConfigError("unknown benchmark '" + n + "'");
        }
    }

  private:
    void config(const std::string &k, const std::string &v) { r_.config.emplace_back(k, v); }
    void config(const std::string &k, double v) { config(k, fmt(v)); }
    void metric(const std::string &k, double v) { r_.metrics.emplace_back(k, v); }
    void check(const std::string &k, double v, double limit) { r_.checks.push_back({k, v, limit}); }
    std::filesystem::path artifact(const std::string &file) {
        r_.artifacts.push_back(dir_ / file);
        return dir_ / file;
    }

    void echo_hhl(const HHLConfig &h) {
        config("clock_qubits", h.n_c);
        config("backend", backend_name(h.backend));
        config("trotter_steps", h.trotter_steps);
    }

    void reject(bool bad, const std::string &what) {
        if (bad) {
            throw ConfigError(r_.name + ": " + what);
        }
    }

    void no_flow_flags() {
        reject(o_.dt || o_.steps || o_.readout || o_.cheb_m || o_.long_run || o_.gradient != "central",
               "flow options (--dt, --steps, --readout, --cheb-m, --gradient, --long) do not apply");
    }

    void poisson1d() {
        no_flow_flags();
        const int n = o_.grid.value_or(16);
        const auto axis = build_axis(n, stretch_from(o_));
        const auto a = assemble_laplacian_1d(axis, BoundaryKind::dirichlet);
        const auto rhs = dirichlet_rhs_fold_1d(axis, 0.0, 1.0, [](double x) { return 10.0 * x; });
        const auto h = hhl_from(o_);
        config("grid", n);
        config("beta", o_.beta);
        echo_hhl(h);

        const auto ref = direct_solve(a, rhs);
        const auto res = hhl_solve(a, rhs, h);
        const auto x = match_sign_and_norm(res.solution, ref);
        const auto are = metric_are(x, ref);
        metric("mean_are", are.mean);
        metric("max_are", are.max);
        metric("cosine_similarity", cosine_similarity(x, ref));
        metric("success_probability", res.success_probability);
        metric("evolution_time", res.evolution_time);
        check("mean_are", are.mean, 0.05);

        CsvWriter w(artifact("solution.csv"), {"i", "x", "hhl", "direct", "are"});
        for (int i = 0; i < n; ++i) {
            const auto k = static_cast<std::size_t>(i);
            w << i + 1 << axis.coord[k + 1] << x[k] << ref[k] << are.pointwise[k];
            w.end_row();
        }
    }

    void poisson2d() {
        no_flow_flags();
        const int n = o_.grid.value_or(16);
        const auto grid = build_grid(n, n, stretch_from(o_));
        const auto a = assemble_laplacian(grid, BoundaryKind::dirichlet);
        const auto rhs = dirichlet_rhs_fold(grid, poisson2d_boundary, poisson2d_source);
        const auto h = hhl_from(o_);
        config("grid", n);
        config("beta", o_.beta);
        echo_hhl(h);

        const auto ref = direct_solve(a, rhs);
        const auto res = hhl_solve(a, rhs, h);
        const auto x = match_sign_and_norm(res.solution, ref);
        const auto are = metric_are(x, ref);
        metric("mean_are", are.mean);
        metric("max_are", are.max);
        metric("cosine_similarity", cosine_similarity(x, ref));
        metric("success_probability", res.success_probability);
        check("mean_are", are.mean, 0.05);

        CsvWriter w(artifact("solution.csv"), {"i", "j", "x", "y", "hhl", "direct", "are"});
        for (int j = 1; j <= n; ++j) {
            for (int i = 1; i <= n; ++i) {
                const auto k = grid.unknown(i, j);
                w << i << j << grid.xi.coord[static_cast<std::size_t>(i)] << grid.eta.coord[static_cast<std::size_t>(j)]
                  << x[k] << ref[k] << are.pointwise[k];
                w.end_row();
            }
        }
    }

    void sweep() {
        no_flow_flags();
        reject(o_.clock_qubits.has_value(), "--clock-qubits does not apply; the sweep covers 2..10");
        const int n = o_.grid.value_or(16);
        const auto axis = build_axis(n, stretch_from(o_));
        const auto a = assemble_laplacian_1d(axis, BoundaryKind::dirichlet);
        const auto rhs = dirichlet_rhs_fold_1d(axis, 0.0, 1.0, [](double x) { return 10.0 * x; });
        auto h = hhl_from(o_);
        config("grid", n);
        config("beta", o_.beta);
        config("clock_qubits", "2..10");
        config("backend", backend_name(h.backend));
        config("trotter_steps", h.trotter_steps);

        const std::vector<int> ncs{2, 3, 4, 5, 6, 7, 8, 9, 10};
        const auto pts = nc_sweep(a, rhs, ncs, h);
        CsvWriter w(artifact("nc_sweep.csv"), {"n_c", "mean_are", "success_probability"});
        for (const auto &p : pts) {
            w << p.n_c << p.mean_are << p.success_probability;
            w.end_row();
            metric("mean_are_nc" + std::to_string(p.n_c), p.mean_are);
            if (p.n_c == 8) {
                check("mean_are_nc8", p.mean_are, 0.05);
            }
        }
    }

    void cheb_demo() {
        no_flow_flags();
        reject(o_.clock_qubits.has_value(), "--clock-qubits does not apply");
        const int n = o_.grid.value_or(64);
        const int m = o_.cheb_m.value_or(20);
        const std::uint64_t shots = o_.shots.value_or(300);
        config("nodes", n);
        config("cheb_m", m);
        config("shots", shots == 0 ? std::string("exact") : std::to_string(shots));

        const auto x = chebyshev_nodes(n);
        std::vector<double> f(x.size());
        std::transform(x.begin(), x.end(), f.begin(), cheb_demo_function);
        const double fn = l2_norm(f);
        std::vector<double> psi(f.size());
        std::transform(f.begin(), f.end(), psi.begin(), [fn](double v) { return v / fn; });

        const auto basis = ChebyBasis::build_1d(x, m, Interval{-1.0, 1.0});
        const auto model = shots == 0 ? ShotModel::exact() : ShotModel::sampled(shots, o_.seed);
        const auto e = reconstruct(psi, basis, model);
        const auto exact = reconstruct(psi, basis, ShotModel::exact());

        const double amp_mse = mse(e.values, psi);
        std::vector<double> phys(e.values.size());
        std::transform(e.values.begin(), e.values.end(), phys.begin(), [fn](double v) { return v * fn; });

        // Circuit-level Hadamard test against the direct overlap, every basis vector.
        double hadamard_dev = 0.0;
        if (psi.size() <= 64) {
            for (std::size_t a = 0; a < basis.size(); ++a) {
                const auto ht = gate_level_hadamard_test(psi, basis.vector(a), ShotModel::exact());
                hadamard_dev = std::max(hadamard_dev, std::abs(ht.estimate - exact.overlaps[a]));
            }
        }

        metric("mse", amp_mse);
        metric("mse_truncation_only", mse(exact.values, psi));
        metric("mse_physical", mse(phys, f));
        metric("gram_condition", basis.gram_condition());
        metric("hadamard_circuit_max_deviation", hadamard_dev);
        check("mse", amp_mse, 0.01);

        CsvWriter w(artifact("reconstruction.csv"), {"k", "x", "f", "state", "reconstruction", "reconstruction_exact"});
        for (std::size_t k = 0; k < x.size(); ++k) {
            w << static_cast<long long>(k) << x[k] << f[k] << psi[k] << e.values[k] << exact.values[k];
            w.end_row();
        }
    }

    void cavity_classical() {
        reject(o_.readout || o_.cheb_m || o_.gradient != "central" || o_.clock_qubits || o_.shots,
               "quantum options do not apply to the classical cavity");
        const int n = o_.grid.value_or(64);
        NSConfig ns;
        ns.nu = 1.0 / o_.re;
        ns.dt = o_.dt.value_or(1e-3);
        ns.steps = o_.steps.value_or(60000);
        ns.flow = FlowCase::cavity;
        RunOptions ro;
        ro.steady_tolerance = 1e-4;
        ro.check_interval = 500;
        config("grid", n);
        config("beta", o_.beta);
        config("re", o_.re);
        config("dt", ns.dt);
        config("max_steps", ns.steps);
        config("steady_tolerance", ro.steady_tolerance);

        const auto grid = std::make_shared<const Grid2D>(build_grid(n, n, stretch_from(o_)));
        const auto run = classical_run(grid, ns, ro);
        const auto ghia = load_ghia(default_ghia_path());
        const double rms = ghia_u_rms(run.field, ghia);
        metric("steps", run.field.step);
        metric("time", run.field.time);
        metric("converged", run.converged ? 1.0 : 0.0);
        metric("final_change_rate", run.history.empty() ? 0.0 : run.history.back().max_change_rate);
        metric("ghia_u_rms", rms);
        check("ghia_u_rms", rms, 0.03);

        write_field_csv(artifact("field.csv"), run.field);
        emit_centerlines(run.field, &ghia);
    }

    void emit_centerlines(const FlowField &field, const GhiaReference *ghia) {
        write_profile_csv(artifact("centerline_u.csv"), centerline_extract(field, CenterlineAxis::vertical), "y", "u");
        write_profile_csv(artifact("centerline_v.csv"), centerline_extract(field, CenterlineAxis::horizontal), "x",
                          "v");
        if (ghia) {
            const auto pu = centerline_extract(field, CenterlineAxis::vertical);
            const auto pv = centerline_extract(field, CenterlineAxis::horizontal);
            CsvWriter w(artifact("ghia_comparison.csv"), {"y", "u_ghia", "u", "x", "v_ghia", "v"});
            for (std::size_t k = 0; k < ghia->y.size(); ++k) {
                w << ghia->y[k] << ghia->u[k] << pu.at(ghia->y[k]) << ghia->x[k] << ghia->v[k] << pv.at(ghia->x[k]);
                w.end_row();
            }
        }
    }

    void hybrid(FlowCase flow, ReadoutMode default_mode) {
        HybridConfig cfg;
        cfg.ns.flow = flow;
        cfg.ns.nu = 1.0 / o_.re;
        cfg.ns.dt = o_.dt.value_or(1e-3);
        const int default_steps = (flow == FlowCase::cavity && o_.long_run) ? 2000 : 200;
        reject(o_.long_run && flow != FlowCase::cavity, "--long applies to the cavity runs only");
        cfg.ns.steps = o_.steps.value_or(default_steps);
        cfg.hhl = hhl_from(o_);

        cfg.readout.mode = default_mode;
        if (o_.readout) {
            if (*o_.readout == "fullstate") {
                cfg.readout.mode = ReadoutMode::full_state;
            } else if (*o_.readout == "chebyshev") {
                cfg.readout.mode = ReadoutMode::chebyshev;
            } else {
                throw ConfigError("--readout must be fullstate or chebyshev");
            }
        }
        reject(r_.name == "cavity-fullstate" && cfg.readout.mode != ReadoutMode::full_state,
               "this benchmark uses the full-state readout");
        cfg.readout.m = o_.cheb_m.value_or(10);
        const std::uint64_t shots = o_.shots.value_or(10'000'000);
        cfg.readout.shots = shots == 0 ? ShotModel::exact() : ShotModel::sampled(shots, o_.seed);
        if (o_.gradient == "central") {
            cfg.gradient = GradientMethod::central;
        } else if (o_.gradient == "analytic") {
            cfg.gradient = GradientMethod::analytic;
        } else {
            throw ConfigError("--gradient must be central or analytic");
        }

        const int n = o_.grid.value_or(16);
        std::shared_ptr<const Grid2D> grid;
        if (flow == FlowCase::cavity) {
            grid = std::make_shared<const Grid2D>(build_grid(n, n, stretch_from(o_)));
        } else {
            grid = std::make_shared<const Grid2D>(build_periodic_grid(n, n, 2.0 * std::numbers::pi));
        }

        config("grid", n);
        if (flow == FlowCase::cavity) {
            config("beta", o_.beta);
        }
        config("re", o_.re);
        config("nu", cfg.ns.nu);
        config("dt", cfg.ns.dt);
        config("steps", cfg.ns.steps);
        echo_hhl(cfg.hhl);
        config("readout", cfg.readout.mode == ReadoutMode::full_state ? "fullstate" : "chebyshev");
        if (cfg.readout.mode == ReadoutMode::chebyshev) {
            config("cheb_m", cfg.readout.m);
            config("shots", shots == 0 ? std::string("exact") : std::to_string(shots));
        }
        config("gradient", o_.gradient);

        const auto res = hybrid_run(grid, cfg);

        double mean_p_are = 0.0, mean_ps = 0.0, mean_resid = 0.0, max_gram = 0.0;
        for (const auto &d : res.history) {
            mean_p_are += d.pressure_are;
            mean_ps += d.success_probability;
            mean_resid += d.pressure_residual;
            max_gram = std::max(max_gram, d.gram_condition);
        }
        const auto steps = static_cast<double>(std::max<std::size_t>(res.history.size(), 1));
        metric("velocity_are_mean", res.velocity_are.mean);
        metric("velocity_are_max", res.velocity_are.max);
        const Grid2D &g = *grid;
        const auto arg_i = static_cast<int>(res.velocity_are.argmax % static_cast<std::size_t>(g.n_xi())) + 1;
        const auto arg_j = static_cast<int>(res.velocity_are.argmax / static_cast<std::size_t>(g.n_xi())) + 1;
        metric("velocity_are_argmax_i", arg_i);
        metric("velocity_are_argmax_j", arg_j);
        metric("pressure_are_time_mean", mean_p_are / steps);
        metric("pressure_residual_time_mean", mean_resid / steps);
        metric("success_probability_time_mean", mean_ps / steps);
        metric("gram_condition", max_gram);

        const auto gq = pressure_gradient(res.field.p, g, GradientMethod::central);
        const auto gc = pressure_gradient(res.twin.p, g, GradientMethod::central);
        std::vector<double> gmq(g.num_unknowns()), gmc(g.num_unknowns());
        for (int j = 1; j <= g.n_eta(); ++j) {
            for (int i = 1; i <= g.n_xi(); ++i) {
                const auto k = g.node(i, j);
                gmq[g.unknown(i, j)] = std::hypot(gq.u[k], gq.v[k]);
                gmc[g.unknown(i, j)] = std::hypot(gc.u[k], gc.v[k]);
            }
        }
        metric("pressure_gradient_are_mean", metric_are(gmq, gmc).mean);

        if (flow == FlowCase::tgv) {
            metric("velocity_nare", res.velocity_nare);
            metric("pressure_nare", res.pressure_nare);
            check("velocity_nare", res.velocity_nare, 0.05);
            check("pressure_nare", res.pressure_nare, 0.10);
        } else if (r_.name == "cavity-hybrid") {
            check("velocity_are_mean", res.velocity_are.mean, o_.long_run ? 0.12 : 0.15);
        }

        {
            CsvWriter w(artifact("diagnostics.csv"), {"step", "time", "success_probability", "scale", "gram_condition",
                                                      "pressure_are", "pressure_residual", "velocity_are"});
            for (const auto &d : res.history) {
                w << d.step << d.time << d.success_probability << d.scale << d.gram_condition << d.pressure_are
                  << d.pressure_residual << d.velocity_are;
                w.end_row();
            }
        }
        write_field_csv(artifact("field_hybrid.csv"), res.field);
        write_field_csv(artifact("field_classical.csv"), res.twin);
        {
            CsvWriter w(artifact("velocity_are.csv"), {"i", "j", "x", "y", "are"});
            for (int j = 1; j <= g.n_eta(); ++j) {
                for (int i = 1; i <= g.n_xi(); ++i) {
                    w << i << j << g.xi.coord[static_cast<std::size_t>(i)]
                      << g.eta.coord[static_cast<std::size_t>(j)] << res.velocity_are.pointwise[g.unknown(i, j)];
                    w.end_row();
                }
            }
        }
        if (flow == FlowCase::cavity) {
            emit_centerlines(res.field, nullptr);
        }
    }

    BenchOptions o_;
    BenchmarkReport r_;
    std::filesystem::path dir_;
};

} // namespace

BenchmarkReport run_benchmark(const std::string &name, const BenchOptions &opts, const std::string &command) {
    if (std::find(benchmark_names().begin(), benchmark_names().end(), name) == benchmark_names().end()) {
        throw ConfigError("unknown benchmark '" + name + "'");
    }
    const auto t0 = std::chrono::steady_clock::now();
    Runner r(name, opts, command);
    r.run();
    return r.finish(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
}

} // namespace qns
