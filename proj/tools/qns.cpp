// qns: run the solver benchmarks and write CSV artifacts.

#include <cstdlib>
#include <iostream>
#include <map>

#include "CLI11.hpp"
#include "qns/bench.hpp"
#include "qns/error.hpp"

int main(int argc, char **argv) {
    CLI::App app{"Hybrid HHL / Navier-Stokes benchmark harness"};
    app.set_help_flag("-h,--help", "Print this help message and exit");

    std::string name;
    app.add_option("benchmark", name, "Benchmark to run")
        ->required()
        ->check(CLI::IsMember(qns::benchmark_names()));

    qns::BenchOptions o;
    int grid = 0, clock = 0, cheb_m = 0, steps = 0;
    std::uint64_t shots = 0, seed = 0;
    double dt = 0.0;
    std::string backend = "spectral", readout;

    auto *grid_opt = app.add_option("--grid", grid, "Grid points per direction (or sample nodes)")
                         ->check(CLI::PositiveNumber);
    auto *clock_opt = app.add_option("--clock-qubits", clock, "Clock register size n_c")->check(CLI::Range(1, 16));
    app.add_option("--trotter-steps", o.trotter_steps, "Trotter steps R")->check(CLI::PositiveNumber);
    app.add_option("--backend", backend, "Controlled-evolution backend")
        ->check(CLI::IsMember({"spectral", "trotter"}));
    auto *m_opt = app.add_option("--cheb-m", cheb_m, "Chebyshev degrees per dimension")->check(CLI::PositiveNumber);
    auto *shots_opt = app.add_option("--shots", shots, "Shots per overlap estimate (0 = exact)");
    app.add_option("--beta", o.beta, "Hyperbolic stretching parameter (0 = uniform)")
        ->check(CLI::NonNegativeNumber);
    app.add_option("--re", o.re, "Reynolds number (nu = 1/Re)")->check(CLI::PositiveNumber);
    auto *dt_opt = app.add_option("--dt", dt, "Time step")->check(CLI::PositiveNumber);
    auto *steps_opt = app.add_option("--steps", steps, "Time steps (upper bound for the classical cavity)")
                          ->check(CLI::PositiveNumber);
    auto *readout_opt = app.add_option("--readout", readout, "Pressure readout")
                            ->check(CLI::IsMember({"fullstate", "chebyshev"}));
    app.add_option("--gradient", o.gradient, "Pressure gradient evaluation")
        ->check(CLI::IsMember({"central", "analytic"}));
    auto *seed_opt = app.add_option("--seed", seed, "Shot-noise seed (falls back to QNS_SEED)");
    app.add_option("--out", o.out, "Output directory");
    app.add_flag("--check", o.check, "Exit nonzero when an acceptance threshold is breached");
    app.add_flag("--long", o.long_run, "Full-length 2000-step cavity run");

    CLI11_PARSE(app, argc, argv);

    if (grid_opt->count()) o.grid = grid;
    if (clock_opt->count()) o.clock_qubits = clock;
    if (m_opt->count()) o.cheb_m = cheb_m;
    if (shots_opt->count()) o.shots = shots;
    if (dt_opt->count()) o.dt = dt;
    if (steps_opt->count()) o.steps = steps;
    if (readout_opt->count()) o.readout = readout;
    o.backend = backend == "trotter" ? qns::EvolutionBackend::trotter : qns::EvolutionBackend::spectral;
    if (seed_opt->count()) {
        o.seed = seed;
    } else if (const char *env = std::getenv("QNS_SEED")) {
        try {
            o.seed = std::stoull(env);
        } catch (const std::exception &) {
            std::cerr << "qns: QNS_SEED is not an unsigned integer\n";
            return 2;
        }
    }

    std::string command;
    for (int i = 0; i < argc; ++i) {
        command += (i ? " " : "") + std::string(argv[i]);
    }

    try {
        const auto report = qns::run_benchmark(name, o, command);
        std::cout << report.to_text();
        if (o.check && !report.passed()) {
            std::cerr << "qns: acceptance threshold breached\n";
            return 1;
        }
    } catch (const qns::ConfigError &e) {
        std::cerr << "qns: " << e.what() << "\n";
        return 2;
    } catch (const std::exception &e) {
        std::cerr << "qns: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
