#pragma once

// Hybrid projection loop: the pressure Poisson solve goes through HHL, the
// solution is read out either from the full statevector or by Chebyshev
// tomography, and is then calibrated in norm and sign against a classical
// reference solve of the same right-hand side.

#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "qns/cfd.hpp"
#include "qns/hhl.hpp"
#include "qns/metrics.hpp"
#include "qns/qst.hpp"

namespace qns {

enum class ReadoutMode { full_state, chebyshev };

struct ReadoutConfig {
    ReadoutMode mode = ReadoutMode::full_state;
    int m = 10; ///< Chebyshev degrees per dimension
    ShotModel shots;
};

struct HybridConfig {
    NSConfig ns;
    HHLConfig hhl;
    ReadoutConfig readout;
    GradientMethod gradient = GradientMethod::central;

    /// Also checks the interior fits into 2^{n_b} amplitudes.
    void validate(const Grid2D &grid) const;
};

struct StepDiagnostics {
    int step = 0;
    double time = 0.0;
    double success_probability = 0.0;
    double scale = 0.0;          ///< calibration factor applied to the unit-norm readout
    double gram_condition = 1.0; ///< 1 in full-state mode
    double pressure_are = 0.0;   ///< mean ARE of p against the classical reference
    double pressure_residual = 0.0; ///< ‖A·p − b‖₂ / ‖b‖₂
    double velocity_are = 0.0;   ///< mean speed ARE against the classical twin
};

struct Calibration {
    std::vector<double> p;
    double scale = 0.0; ///< signed factor mapping the readout onto p (before the gauge shift)
};

/// p = s·‖ref‖/‖x‖·x with s = ±1 maximizing ⟨p, ref⟩ (ties keep +1), then p − mean(p).
[[nodiscard]] Calibration calibrate_pressure(std::span<const double> readout, std::span<const double> reference);

struct HybridPressure {
    PressureSolution solution;
    StepDiagnostics diagnostics;
};

/**
 * HHL solver, readout basis and pressure matrix for one grid, set up once and
 * reused every step.
 */
class HybridPressureSolver {
  public:
    HybridPressureSolver(std::shared_ptr<const Grid2D> grid, const HybridConfig &cfg);

    /// `stream` selects the shot-noise stream (the step index in a run).
    [[nodiscard]] HybridPressure solve(std::span<const double> b, std::span<const double> reference,
                                       std::uint64_t stream = 0) const;

    [[nodiscard]] const HHLSolver &hhl() const { return hhl_; }
    [[nodiscard]] const std::optional<ChebyBasis> &basis() const { return basis_; }
    [[nodiscard]] const SparseSymMatrix &matrix() const { return a_; }

  private:
    std::shared_ptr<const Grid2D> grid_;
    HybridConfig cfg_;
    SparseSymMatrix a_;
    HHLSolver hhl_;
    std::optional<ChebyBasis> basis_;
};

/// One-shot convenience wrapper around HybridPressureSolver.
[[nodiscard]] HybridPressure hybrid_pressure_solve(std::shared_ptr<const Grid2D> grid, std::span<const double> b,
                                                   std::span<const double> reference, const HybridConfig &cfg,
                                                   std::uint64_t stream = 0);

struct HybridRunResult {
    FlowField field;
    FlowField twin; ///< classical trajectory advanced in lockstep
    std::vector<StepDiagnostics> history;
    FieldError velocity_are;  ///< speed ARE against the twin at the final step (interior nodes)
    double velocity_nare = 0.0; ///< tgv: mean |(u,v) − exact| / max|exact|
    double pressure_nare = 0.0; ///< tgv: mean |p − exact| / max|exact|
};

[[nodiscard]] HybridRunResult hybrid_run(std::shared_ptr<const Grid2D> grid, const HybridConfig &cfg);

/// Interior speed √(u² + v²), unknown-ordered.
[[nodiscard]] std::vector<double> interior_speed(const FlowField &field);

} // namespace qns
