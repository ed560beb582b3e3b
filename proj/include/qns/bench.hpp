#pragma once

// Benchmark harness: Ghia reference data, centerline profiles, CSV output and
// the named experiment runners behind the command-line tool.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qns/cfd.hpp"
#include "qns/hhl.hpp"

namespace qns {

struct GhiaReference {
    std::vector<double> y, u; ///< u(0.5, y), y descending from 1 to 0
    std::vector<double> x, v; ///< v(x, 0.5), x descending from 1 to 0
};

/// Parses the bundled table; '#' lines are comments. Throws ParseError on malformed input.
[[nodiscard]] GhiaReference load_ghia(const std::filesystem::path &path);
[[nodiscard]] std::filesystem::path default_ghia_path();

enum class CenterlineAxis {
    vertical,  ///< u along x = L/2, ordered by y
    horizontal ///< v along y = L/2, ordered by x
};

struct Profile {
    std::vector<double> coord;
    std::vector<double> value;

    /// Linear interpolation at s (clamped to the profile ends).
    [[nodiscard]] double at(double s) const;
};

/// Profile over all nodes (boundary included) along the centerline; interpolates between the two nearest node lines.
[[nodiscard]] Profile centerline_extract(const FlowField &field, CenterlineAxis axis);

/// u-profile RMS deviation at the Ghia stations.
[[nodiscard]] double ghia_u_rms(const FlowField &field, const GhiaReference &ref);

class CsvWriter {
  public:
    CsvWriter(const std::filesystem::path &path, const std::vector<std::string> &header);

    CsvWriter &operator<<(double x);
    CsvWriter &operator<<(long long x);
    CsvWriter &operator<<(int x) { return *this << static_cast<long long>(x); }
    CsvWriter &operator<<(const std::string &s);
    void end_row();

  private:
    void separator();

    std::ofstream out_;
    std::size_t columns_;
    std::size_t in_row_ = 0;
};

/// Interior-plus-boundary dump with i, j, x, y columns followed by u, v, p.
void write_field_csv(const std::filesystem::path &path, const FlowField &field);
void write_profile_csv(const std::filesystem::path &path, const Profile &profile, const std::string &coord_name,
                       const std::string &value_name);

struct BenchOptions {
    std::optional<int> grid;
    std::optional<int> clock_qubits;
    int trotter_steps = 150;
    EvolutionBackend backend = EvolutionBackend::spectral;
    std::optional<int> cheb_m;
    std::optional<std::uint64_t> shots;
    double beta = 2.5;
    double re = 100.0;
    std::optional<double> dt;
    std::optional<int> steps;
    std::optional<std::string> readout; ///< fullstate or chebyshev; defaults per benchmark
    std::string gradient = "central";
    std::uint64_t seed = 0;
    std::filesystem::path out = "qns-out";
    bool check = false;
    bool long_run = false;
};

struct Check {
    std::string name;
    double value;
    double threshold; ///< pass when value ≤ threshold
    [[nodiscard]] bool passed() const { return value <= threshold; }
};

struct BenchmarkReport {
    std::string name;
    std::string command;
    std::uint64_t seed = 0;
    std::vector<std::pair<std::string, std::string>> config;
    std::vector<std::pair<std::string, double>> metrics;
    std::vector<Check> checks;
    std::vector<std::filesystem::path> artifacts;
    double seconds = 0.0;

    [[nodiscard]] bool passed() const;
    [[nodiscard]] std::string to_text() const;
};

[[nodiscard]] const std::vector<std::string> &benchmark_names();

/// Runs one experiment, writes its CSV artifacts under opts.out and the report files.
/// Unknown names and invalid option combinations raise ConfigError.
[[nodiscard]] BenchmarkReport run_benchmark(const std::string &name, const BenchOptions &opts,
                                            const std::string &command = {});

/// Right-hand side 4 − 8·H(x − 0.5) with H(0) = 1/2.
[[nodiscard]] double poisson2d_source(double x, double y);
/// u(0,y) = 0.5, u(1,y) = sin y, u(x,0) = (x − 0.5)(x − 1), u(x,1) = 0.5(x − 1).
[[nodiscard]] double poisson2d_boundary(double x, double y);

/// f(x) = ln(x + 2)·sin(5·e^{x+1}).
[[nodiscard]] double cheb_demo_function(double x);

} // namespace qns
