#pragma once

#include <cstddef>
#include <vector>

namespace qns {

enum class StretchMode { uniform, hyperbolic };

/**
 * Mapping of the computational coordinate ξ ∈ [0,1] onto [0, length].
 *
 * Hyperbolic mode uses
 *   x(ξ) = L/2 · [1 + β·atan((2ξ − 1)·tan(1/β))]
 * which clusters nodes towards both ends for β > 0. Uniform mode ignores β.
 */
struct StretchConfig {
    double beta = 2.5;
    double length = 1.0;
    StretchMode mode = StretchMode::uniform;

    void validate() const;

    static StretchConfig uniform(double length = 1.0) { return {2.5, length, StretchMode::uniform}; }
    static StretchConfig hyperbolic(double beta, double length = 1.0) {
        return {beta, length, StretchMode::hyperbolic};
    }
};

[[nodiscard]] double stretch_map(double xi, const StretchConfig &cfg);

/// Metric coefficient h = dξ/dx from the analytic derivative of stretch_map.
[[nodiscard]] double metric_coeff(double xi, const StretchConfig &cfg);

enum class AxisLayout {
    walled,  ///< boundary nodes at ξ = 0 and ξ = 1, Δξ = 1/(N+1)
    periodic ///< N nodes per period at ξ = (i−1)/N, ghosts are periodic images
};

/// One coordinate direction: N interior nodes plus one boundary/ghost node on each side.
struct Axis {
    int n = 0;
    double d = 0.0; ///< computational spacing Δξ
    AxisLayout layout = AxisLayout::walled;
    StretchConfig stretch;
    std::vector<double> coord;  ///< physical coordinate, size n + 2
    std::vector<double> metric; ///< h at each node, size n + 2

    [[nodiscard]] std::size_t total() const { return static_cast<std::size_t>(n) + 2; }
    [[nodiscard]] double length() const { return stretch.length; }
    /// Coupling between nodes i and i+1 of the symmetric 5-point stencil: h_i·h_{i+1}/Δξ².
    [[nodiscard]] double coupling(int i) const { return metric[i] * metric[i + 1] / (d * d); }
};

[[nodiscard]] Axis build_axis(int n, const StretchConfig &cfg);
[[nodiscard]] Axis build_periodic_axis(int n, double length);

/**
 * Tensor-product grid over the square [0, L]². Nodes are stored row-major on an
 * (N_ξ+2)×(N_η+2) layout with i (ξ direction) fastest. Interior unknowns are
 * flattened as k = (i−1) + (j−1)·N_ξ for i, j ∈ [1, N].
 */
struct Grid2D {
    Axis xi;
    Axis eta;

    [[nodiscard]] int n_xi() const { return xi.n; }
    [[nodiscard]] int n_eta() const { return eta.n; }
    [[nodiscard]] double d_xi() const { return xi.d; }
    [[nodiscard]] double d_eta() const { return eta.d; }
    [[nodiscard]] std::size_t nx_total() const { return xi.total(); }
    [[nodiscard]] std::size_t ny_total() const { return eta.total(); }
    [[nodiscard]] std::size_t num_nodes() const { return nx_total() * ny_total(); }
    [[nodiscard]] std::size_t num_unknowns() const {
        return static_cast<std::size_t>(xi.n) * static_cast<std::size_t>(eta.n);
    }
    [[nodiscard]] bool periodic() const { return xi.layout == AxisLayout::periodic; }

    [[nodiscard]] std::size_t node(int i, int j) const {
        return static_cast<std::size_t>(i) + static_cast<std::size_t>(j) * nx_total();
    }
    [[nodiscard]] std::size_t unknown(int i, int j) const {
        return static_cast<std::size_t>(i - 1) +
               static_cast<std::size_t>(j - 1) * static_cast<std::size_t>(xi.n);
    }
};

[[nodiscard]] Grid2D build_grid(int n_xi, int n_eta, const StretchConfig &cfg);
[[nodiscard]] Grid2D build_periodic_grid(int n_xi, int n_eta, double length);

} // namespace qns
