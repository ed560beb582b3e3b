#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "qns/bench.hpp"
#include "qns/error.hpp"
#include "qns/metrics.hpp"

using namespace qns;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string &name) {
    const auto p = fs::temp_directory_path() / ("qns-test-" + name);
    fs::remove_all(p);
    return p;
}

std::string slurp(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::vector<std::string> lines(const fs::path &p) {
    std::ifstream in(p);
    std::vector<std::string> out;
    for (std::string l; std::getline(in, l);) {
        out.push_back(l);
    }
    return out;
}

double metric_value(const BenchmarkReport &r, const std::string &name) {
    for (const auto &[k, v] : r.metrics) {
        if (k == name) {
            return v;
        }
    }
    FAIL("missing metric " << name);
    return 0.0;
}

} // namespace

TEST_CASE("metric examples") {
    const std::vector<double> a{1.0, -2.0, 3.0};
    CHECK(metric_are(a, a).mean == 0.0);
    const std::vector<double> c{1.1}, r{1.0};
    CHECK(metric_are(c, r, 0.0).mean == doctest::Approx(0.1));
    const std::vector<double> flipped{-1.0, 2.0, -3.0};
    CHECK(metric_are(flipped, a).max == 0.0);
    CHECK_THROWS_AS((void)metric_are(c, a), ContractViolation);

    CHECK(metric_normalized_are(a, a).max == 0.0);
    const std::vector<double> off{1.0, 1.0, 3.0};
    const auto n = metric_normalized_are(off, a);
    CHECK(n.pointwise[1] == doctest::Approx(1.0));
    CHECK(n.argmax == 1);
    CHECK(n.mean == doctest::Approx(1.0 / 3));
    const std::vector<double> zero(3, 0.0);
    CHECK_THROWS_AS((void)metric_normalized_are(a, zero), DegenerateInputError);

    CHECK(mse(a, off) == doctest::Approx(3.0));
    CHECK(rms_difference(a, off) == doctest::Approx(std::sqrt(3.0)));
    CHECK(cosine_similarity(a, flipped) == doctest::Approx(-1.0));
    const auto m = match_sign_and_norm(std::vector<double>{-2.0, 4.0, -6.0}, a);
    for (std::size_t k = 0; k < 3; ++k) {
        CHECK(m[k] == doctest::Approx(a[k]));
    }
}

TEST_CASE("centerline profiles") {
    const auto g = std::make_shared<const Grid2D>(build_grid(16, 16, StretchConfig::hyperbolic(2.5)));
    FlowField f;
    f.grid = g;
    f.u.assign(g->num_nodes(), 0.0);
    f.v.assign(g->num_nodes(), 0.0);
    f.p.assign(g->num_nodes(), 0.0);
    // Linear fields are reproduced exactly by the interpolation between node lines.
    for (int j = 0; j <= 17; ++j) {
        for (int i = 0; i <= 17; ++i) {
            const double x = g->xi.coord[static_cast<std::size_t>(i)];
            const double y = g->eta.coord[static_cast<std::size_t>(j)];
            f.u[g->node(i, j)] = x + 2 * y;
            f.v[g->node(i, j)] = std::sin(std::numbers::pi * x) * (3 - y);
        }
    }
    const auto pu = centerline_extract(f, CenterlineAxis::vertical);
    REQUIRE(pu.coord.size() == 18);
    for (std::size_t k = 0; k < pu.coord.size(); ++k) {
        CHECK(pu.value[k] == doctest::Approx(0.5 + 2 * pu.coord[k]).epsilon(1e-12));
    }
    CHECK(pu.at(0.3) == doctest::Approx(1.1).epsilon(1e-12));
    CHECK(pu.at(-1.0) == doctest::Approx(pu.value.front()));

    // sin(πx) is symmetric about x = 0.5 on a symmetric grid.
    const auto pv = centerline_extract(f, CenterlineAxis::horizontal);
    for (double s : {0.05, 0.2, 0.37}) {
        CHECK(pv.at(s) == doctest::Approx(pv.at(1.0 - s)).epsilon(1e-12));
    }

    NSConfig cfg;
    cfg.lid_speed = 1.0;
    auto cav = make_initial_field(g, cfg);
    const auto lid = centerline_extract(cav, CenterlineAxis::vertical);
    CHECK(lid.at(1.0) == 1.0);
    CHECK(lid.at(0.0) == 0.0);
}

TEST_CASE("ghia reference table") {
    const auto ref = load_ghia(default_ghia_path());
    REQUIRE(ref.y.size() == 17);
    REQUIRE(ref.x.size() == 17);
    CHECK(ref.y.front() == 1.0);
    CHECK(ref.u.front() == 1.0);
    CHECK(ref.y.back() == 0.0);
    CHECK(ref.u.back() == 0.0);
    for (std::size_t k = 0; k < 17; ++k) {
        if (ref.y[k] == 0.5) {
            CHECK(ref.u[k] == doctest::Approx(-0.20581));
        }
        if (ref.x[k] == 0.5) {
            CHECK(ref.v[k] == doctest::Approx(0.05454));
        }
    }

    const auto dir = scratch("ghia");
    fs::create_directories(dir);
    std::ofstream(dir / "bad.csv") << "# comment\ny,u,x,v\n1.0,1.0,oops,0\n";
    CHECK_THROWS_AS((void)load_ghia(dir / "bad.csv"), ParseError);
    std::ofstream(dir / "short.csv") << "y,u,x,v\n1.0,1.0,1.0\n";
    CHECK_THROWS_AS((void)load_ghia(dir / "short.csv"), ParseError);

    // A resting cavity deviates by the RMS of the table itself.
    const auto g = std::make_shared<const Grid2D>(build_grid(8, 8, StretchConfig::hyperbolic(2.5)));
    NSConfig cfg;
    cfg.lid_speed = 0.0;
    const auto rest = make_initial_field(g, cfg);
    double s = 0;
    for (double u : ref.u) {
        s += u * u;
    }
    CHECK(ghia_u_rms(rest, ref) == doctest::Approx(std::sqrt(s / 17)));
}

TEST_CASE("csv writer") {
    const auto dir = scratch("csv");
    fs::create_directories(dir);
    {
        CsvWriter w(dir / "a.csv", {"k", "x", "name"});
        w << 3 << 0.1 << std::string("t");
        w.end_row();
        w << 4 << 1.0 / 3.0;
        CHECK_THROWS_AS(w.end_row(), ContractViolation);
    }
    const auto l = lines(dir / "a.csv");
    REQUIRE(l.size() >= 2);
    CHECK(l[0] == "k,x,name");
    CHECK(l[1] == "3,0.1,t");
    CHECK_THROWS_AS(CsvWriter(dir / "missing" / "x.csv", {"a"}), ConfigError);
}

TEST_CASE("benchmark registry and option checks") {
    const auto &names = benchmark_names();
    CHECK(names.size() == 8);
    BenchOptions o;
    o.out = scratch("reg");
    CHECK_THROWS_AS((void)run_benchmark("cavity-quantum", o), ConfigError);
    o.steps = 10;
    CHECK_THROWS_AS((void)run_benchmark("poisson1d", o), ConfigError);
    o.steps.reset();
    o.long_run = true;
    CHECK_THROWS_AS((void)run_benchmark("tgv-hybrid", o), ConfigError);
}

TEST_CASE("poisson1d report and artifacts") {
    BenchOptions o;
    o.out = scratch("p1");
    o.seed = 5;
    const auto r = run_benchmark("poisson1d", o, "qns poisson1d");
    CHECK(r.passed());
    CHECK(r.seed == 5);
    CHECK(metric_value(r, "mean_are") <= 0.05);
    CHECK_FALSE(r.config.empty());
    const auto text = r.to_text();
    CHECK(text.find("command   qns poisson1d") != std::string::npos);
    CHECK(text.find("seed      5") != std::string::npos);
    CHECK(fs::exists(o.out / "poisson1d" / "solution.csv"));
    CHECK(fs::exists(o.out / "poisson1d" / "report.txt"));
    CHECK(lines(o.out / "poisson1d" / "solution.csv").size() == 17);
}

TEST_CASE("nc sweep emits one row per clock size") {
    BenchOptions o;
    o.out = scratch("sweep");
    const auto r = run_benchmark("nc-sweep", o);
    const auto l = lines(o.out / "nc-sweep" / "nc_sweep.csv");
    REQUIRE(l.size() == 10);
    CHECK(l[0] == "n_c,mean_are,success_probability");
    for (int k = 0; k < 9; ++k) {
        CHECK(l[static_cast<std::size_t>(k + 1)].rfind(std::to_string(k + 2) + ",", 0) == 0);
    }
    CHECK(metric_value(r, "mean_are_nc8") <= 0.05);
}

TEST_CASE("identical command and seed give byte-identical csv") {
    for (const std::string name : {"cheb-demo", "poisson2d"}) {
        const auto first = scratch("det-a"), second = scratch("det-b");
        BenchOptions o;
        o.seed = 42;
        o.out = first;
        (void)run_benchmark(name, o);
        o.out = second;
        (void)run_benchmark(name, o);
        std::size_t compared = 0;
        for (const auto &e : fs::directory_iterator(first / name)) {
            if (e.path().extension() == ".csv") {
                CHECK(slurp(e.path()) == slurp(second / name / e.path().filename()));
                ++compared;
            }
        }
        CHECK(compared >= 2);
    }
}

TEST_CASE("different seeds change sampled output") {
    BenchOptions o;
    o.out = scratch("seed-a");
    o.seed = 1;
    const auto a = run_benchmark("cheb-demo", o);
    o.out = scratch("seed-b");
    o.seed = 2;
    const auto b = run_benchmark("cheb-demo", o);
    CHECK(metric_value(a, "mse") != metric_value(b, "mse"));
    CHECK(metric_value(a, "mse") <= 0.01);
    CHECK(metric_value(b, "mse") <= 0.01);
}

TEST_CASE("problem definitions") {
    CHECK(poisson2d_source(0.2, 0.3) == 4.0);
    CHECK(poisson2d_source(0.7, 0.3) == -4.0);
    CHECK(poisson2d_source(0.5, 0.9) == 0.0);
    CHECK(poisson2d_boundary(0.0, 0.4) == 0.5);
    CHECK(poisson2d_boundary(1.0, 0.4) == doctest::Approx(std::sin(0.4)));
    CHECK(poisson2d_boundary(0.3, 0.0) == doctest::Approx(-0.2 * -0.7));
    CHECK(poisson2d_boundary(0.3, 1.0) == doctest::Approx(-0.35));
    CHECK(cheb_demo_function(0.0) == doctest::Approx(std::log(2.0) * std::sin(5 * std::exp(1.0))));
}
