#pragma once

// Collocated projection-method solver for the 2D incompressible Navier–Stokes
// equations (ρ = 1). Fields live on the (N_ξ+2)×(N_η+2) node layout of a Grid2D,
// i fastest; interior unknowns use the Grid2D flattening k = (i−1) + (j−1)·N_ξ.

#include <functional>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "qns/grid.hpp"
#include "qns/linalg.hpp"

namespace qns {

enum class FlowCase { cavity, tgv };
enum class GradientMethod { central, analytic };

struct NSConfig {
    double nu = 0.01;
    double dt = 1e-3;
    int steps = 200;
    double lid_speed = 1.0;
    FlowCase flow = FlowCase::cavity;

    void validate() const;
};

struct FlowField {
    std::shared_ptr<const Grid2D> grid;
    std::vector<double> u, v, p;
    double time = 0.0;
    int step = 0;

    [[nodiscard]] std::size_t node(int i, int j) const { return grid->node(i, j); }
};

/// Zero field (cavity) or the exact vortex at t = 0 (tgv), boundary conditions applied.
[[nodiscard]] FlowField make_initial_field(std::shared_ptr<const Grid2D> grid, const NSConfig &cfg);

/// No-slip walls, lid row (corners included) at lid_speed, Neumann pressure ghosts mirroring the interior.
void apply_cavity_bc(std::vector<double> &u, std::vector<double> &v, const Grid2D &grid, double lid_speed);
void apply_neumann_ghosts(std::vector<double> &f, const Grid2D &grid);
/// Ghost ring copied from the opposite interior column/row.
void apply_periodic_ghosts(std::vector<double> &f, const Grid2D &grid);
void apply_cavity_bc(FlowField &field, double lid_speed);
void apply_periodic_bc(FlowField &field);
void apply_bc(FlowField &field, const NSConfig &cfg);

/// Metric central differences h·(f_{i+1} − f_{i−1})/(2Δξ) at interior nodes; zero on the ring.
[[nodiscard]] std::vector<double> ddx(std::span<const double> f, const Grid2D &grid);
[[nodiscard]] std::vector<double> ddy(std::span<const double> f, const Grid2D &grid);
/// Symmetric-coupling 5-point Laplacian (same operator as assemble_laplacian) at interior nodes.
[[nodiscard]] std::vector<double> laplacian(std::span<const double> f, const Grid2D &grid);

struct VelocityPair {
    std::vector<double> u, v;
};

/// u* = u + Δt·(−(u·∂u/∂x + v·∂u/∂y) + ν∇²u), likewise v*; boundary conditions reapplied.
[[nodiscard]] VelocityPair advect_diffuse(const FlowField &field, const NSConfig &cfg);

/// b_k = (1/Δt)·(∂u*/∂x + ∂v*/∂y) at interior node k.
[[nodiscard]] std::vector<double> divergence_rhs(std::span<const double> u_star, std::span<const double> v_star,
                                                 const Grid2D &grid, double dt);

/// ∂p/∂x, ∂p/∂y in physical coordinates at interior node (i, j).
using GradientFn = std::function<std::pair<double, double>(int i, int j)>;

/// Central mode differentiates the node values; analytic mode evaluates `analytic` (ContractViolation if empty).
[[nodiscard]] VelocityPair pressure_gradient(std::span<const double> p, const Grid2D &grid, GradientMethod method,
                                             const GradientFn &analytic = {});

/// u^{n+1} = u* − Δt·∇p at interior nodes.
[[nodiscard]] VelocityPair project_velocity(const VelocityPair &star, const VelocityPair &grad_p, double dt);

/**
 * Δt × divergence of the projected velocity measured on the flux stencil that the
 * Laplacian is built from: D(u*) − Δt·L(p). Equals Δt·(b − A·p) at each node, so it
 * vanishes with an exact pressure solve (up to the gauge constant for all-Neumann).
 */
[[nodiscard]] std::vector<double> flux_divergence(std::span<const double> u_star, std::span<const double> v_star,
                                                  std::span<const double> p, const Grid2D &grid, double dt);

/// Writes interior unknowns into a node array and fills its ghosts for the case.
void scatter_pressure(std::span<const double> p_unknowns, FlowField &field, const NSConfig &cfg);
[[nodiscard]] std::vector<double> gather_interior(std::span<const double> f, const Grid2D &grid);

struct PressureSolution {
    std::vector<double> p; ///< interior unknowns, zero mean
    GradientFn gradient;   ///< optional analytic gradient of the same pressure
};
using PressureSolveFn = std::function<PressureSolution(std::span<const double> b)>;

struct StepRecord {
    std::vector<double> b;       ///< zero-mean pressure rhs
    std::vector<double> p;       ///< pressure unknowns used for the projection
    VelocityPair star;           ///< intermediate velocity
    double max_flux_divergence = 0.0;
};

/// Pressure matrix of the case: all-Neumann for the cavity, periodic for tgv.
[[nodiscard]] SparseSymMatrix pressure_matrix(const Grid2D &grid, const NSConfig &cfg);

/**
 * One projection cycle: advect_diffuse, divergence_rhs (zero-meaned), pressure
 * solve, gradient, projection, boundary conditions. Throws InstabilityError
 * naming the step when any value becomes non-finite.
 */
StepRecord projection_step(FlowField &field, const NSConfig &cfg, const PressureSolveFn &solve,
                           GradientMethod gradient = GradientMethod::central);

/// projection_step with the sparse direct solver.
StepRecord classical_step(FlowField &field, const NSConfig &cfg, const DirectSolver &solver);

struct StepStats {
    int step = 0;
    double time = 0.0;
    double kinetic_energy = 0.0;
    double max_change_rate = 0.0; ///< max|u^{n+1} − u^n|/Δt over both components
    double max_flux_divergence = 0.0;
};

struct RunResult {
    FlowField field;
    std::vector<StepStats> history;
    bool converged = false;
};

struct RunOptions {
    /// Stop early once max_change_rate drops below this value (0 runs all steps).
    double steady_tolerance = 0.0;
    /// Check the steady tolerance every this many steps.
    int check_interval = 100;
};

[[nodiscard]] RunResult classical_run(std::shared_ptr<const Grid2D> grid, const NSConfig &cfg,
                                      const RunOptions &opts = {});

/// 0.5·mean(u² + v²) over interior nodes.
[[nodiscard]] double kinetic_energy(const FlowField &field);

struct TgvState {
    double u, v, p;
};
/// u = sin x cos y e^{−2νt}, v = −cos x sin y e^{−2νt}, p = (cos 2x + cos 2y)/4 · e^{−4νt}.
[[nodiscard]] TgvState tgv_exact(double x, double y, double t, double nu);
/// Exact fields on every node of the grid at time t.
[[nodiscard]] FlowField tgv_field(std::shared_ptr<const Grid2D> grid, double t, double nu);

} // namespace qns
