#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qns/linalg.hpp"
#include "qns/qsim.hpp"

namespace qns {

enum class EvolutionBackend { spectral, trotter };

/// How the evolution time t in e^{iAt} is chosen from the spectrum of A.
enum class TimeScaling {
    /// Smallest nonzero |λ| lands exactly on clock bin l = ⌊(2^{n_c}−1)·λ_min/λ_max⌋ ≥ 1;
    /// falls back to max_top when that bin would be 0.
    min_exact,
    /// Largest |λ| lands in the top clock bin: t = 2π(1 − 2^{−n_c})/λ_max.
    max_top,
    /// t taken from HHLConfig::evolution_time.
    explicit_time
};

struct HHLConfig {
    int n_b = 0; ///< problem qubits; 0 derives ⌈log₂ dim⌉
    int n_c = 8; ///< clock qubits
    int trotter_steps = 150;
    EvolutionBackend backend = EvolutionBackend::spectral;
    TimeScaling scaling = TimeScaling::min_exact;
    double evolution_time = 0.0;   ///< used with TimeScaling::explicit_time
    double evolution_scale = 1.0;  ///< extra factor on the chosen t
    double reciprocal_constant = 0.0; ///< C; 0 selects 2^{−n_c}

    void validate() const;
};

struct HHLResult {
    std::vector<double> solution; ///< unit-norm, length dim(A); global sign fixed so the largest entry is positive
    double success_probability = 0.0;
    double clock_zero_weight = 0.0; ///< post-selected weight left in clock |0⟩ after uncomputation
    double lambda_min = 0.0; ///< smallest nonzero |λ| of the (possibly negated) system
    double lambda_max = 0.0;
    double evolution_time = 0.0;
    double b_norm = 0.0; ///< ‖b‖₂ discarded by amplitude encoding
    bool negated = false;
    bool singular = false;
    int n_b = 0;
    int n_c = 0;
};

/// Amplitude encoding: b/‖b‖₂ zero-padded to 2^{n_b}. Returns the state and ‖b‖₂.
struct PreparedState {
    StateVector state;
    double norm;
};
[[nodiscard]] PreparedState prepare_b(std::span<const double> b, int n_b);

/**
 * Controlled e^{iAt·power} on a problem register. enter_basis / leave_basis /
 * apply_in_basis let a backend hoist a change of basis out of the QPE loop;
 * the default basis is the computational one.
 */
class ControlledEvolution {
  public:
    virtual ~ControlledEvolution() = default;

    [[nodiscard]] virtual int num_qubits() const = 0;
    [[nodiscard]] virtual double time() const = 0;

    /// Controlled-U^{power} (U† when adjoint) in the computational basis.
    virtual void apply(StateVector &state, QubitRange reg, int control, std::uint64_t power, bool adjoint) const = 0;

    virtual void enter_basis(StateVector &, QubitRange) const {}
    virtual void leave_basis(StateVector &, QubitRange) const {}
    virtual void apply_in_basis(StateVector &state, QubitRange reg, int control, std::uint64_t power,
                                bool adjoint) const {
        apply(state, reg, control, power, adjoint);
    }

    /// U^{power} as a dense matrix in the computational basis.
    [[nodiscard]] virtual Eigen::MatrixXcd unitary(std::uint64_t power) const = 0;
};

/// U = V·e^{iΛt}·Vᵀ from the exact eigendecomposition.
class SpectralEvolution final : public ControlledEvolution {
  public:
    SpectralEvolution(EigenDecomposition eig, double t);

    [[nodiscard]] int num_qubits() const override { return num_qubits_; }
    [[nodiscard]] double time() const override { return t_; }
    void apply(StateVector &state, QubitRange reg, int control, std::uint64_t power, bool adjoint) const override;
    void enter_basis(StateVector &state, QubitRange reg) const override;
    void leave_basis(StateVector &state, QubitRange reg) const override;
    void apply_in_basis(StateVector &state, QubitRange reg, int control, std::uint64_t power,
                        bool adjoint) const override;
    [[nodiscard]] Eigen::MatrixXcd unitary(std::uint64_t power) const override;

  private:
    [[nodiscard]] std::vector<cplx> phases(std::uint64_t power, bool adjoint) const;

    EigenDecomposition eig_;
    Eigen::MatrixXcd v_;
    Eigen::MatrixXcd v_adj_;
    double t_;
    int num_qubits_;
};

/**
 * First-order Lie–Trotter: one step S = Π_k exp(i·c_k·P_k·t/R) over the Pauli
 * terms in list order, U ≈ S^R. U^{2^k} = S^{R·2^k} is composed once by
 * repeated squaring and applied as a dense controlled unitary.
 */
class TrotterEvolution final : public ControlledEvolution {
  public:
    TrotterEvolution(PauliTermList terms, double t, int steps);

    [[nodiscard]] int num_qubits() const override { return terms_.num_qubits; }
    [[nodiscard]] double time() const override { return t_; }
    [[nodiscard]] int steps() const { return steps_; }
    [[nodiscard]] const PauliTermList &terms() const { return terms_; }
    void apply(StateVector &state, QubitRange reg, int control, std::uint64_t power, bool adjoint) const override;
    [[nodiscard]] Eigen::MatrixXcd unitary(std::uint64_t power) const override;

    /// The single step S, built gate by gate on each basis column.
    [[nodiscard]] const Eigen::MatrixXcd &step_unitary() const { return step_; }

  private:
    PauliTermList terms_;
    double t_;
    int steps_;
    Eigen::MatrixXcd step_;
    Eigen::MatrixXcd full_; ///< S^R
    mutable std::vector<Eigen::MatrixXcd> pow2_; ///< full_^{2^k}, grown on demand
};

[[nodiscard]] std::unique_ptr<ControlledEvolution> make_evolution(const Eigen::MatrixXd &a, double t,
                                                                  EvolutionBackend backend, int trotter_steps);

/// Controlled-U^{power} with U = e^{iAt}; phase-wrap (t·|λ|_max ≥ 2π) is a ConfigError.
void controlled_evolution(StateVector &state, const ControlledEvolution &u, QubitRange reg, int control,
                          std::uint64_t power);

/// Hadamards on the clock, controlled-U^{2^k} from clock qubit k, inverse QFT on the clock.
void qpe(StateVector &state, const ControlledEvolution &u, QubitRange problem, QubitRange clock);
void inverse_qpe(StateVector &state, const ControlledEvolution &u, QubitRange problem, QubitRange clock);

/// Ry(2·asin(C·2^{n_c}/l)) on the ancilla for each clock value l ≥ 1; l = 0 is left alone.
void reciprocal_rotation(StateVector &state, QubitRange clock, int ancilla, double c);

/// Rotation angles used by reciprocal_rotation. Throws ConfigError when C·2^{n_c} > 1.
[[nodiscard]] std::vector<double> reciprocal_angles(int n_c, double c);

/**
 * Reusable HHL pipeline for one matrix: spectrum, evolution time and backend
 * unitaries are computed once, then solve() runs the circuit for each b.
 *
 * Qubit layout: problem register on qubits 0..n_b−1, clock on n_b..n_b+n_c−1,
 * ancilla on the top qubit. The solution is read from the problem register at
 * clock |0⟩ after post-selecting the ancilla on |1⟩.
 */
class HHLSolver {
  public:
    HHLSolver(const SparseSymMatrix &a, const HHLConfig &cfg);
    HHLSolver(const Eigen::MatrixXd &a, bool constant_nullspace, const HHLConfig &cfg);

    [[nodiscard]] HHLResult solve(std::span<const double> b) const;

    /// Full circuit up to (not including) the ancilla measurement.
    [[nodiscard]] StateVector pre_measurement_state(std::span<const double> b) const;

    [[nodiscard]] int n_b() const { return n_b_; }
    [[nodiscard]] int n_c() const { return cfg_.n_c; }
    [[nodiscard]] double evolution_time() const { return evolution_->time(); }
    [[nodiscard]] const ControlledEvolution &evolution() const { return *evolution_; }
    [[nodiscard]] QubitRange problem_register() const { return {0, n_b_}; }
    [[nodiscard]] QubitRange clock_register() const { return {n_b_, cfg_.n_c}; }
    [[nodiscard]] int ancilla() const { return n_b_ + cfg_.n_c; }

  private:
    void init(Eigen::MatrixXd a, bool constant_nullspace);
    [[nodiscard]] std::vector<double> condition_rhs(std::span<const double> b) const;

    HHLConfig cfg_;
    std::size_t dim_ = 0;
    int n_b_ = 0;
    bool negated_ = false;
    bool singular_ = false;
    double lambda_min_ = 0.0;
    double lambda_max_ = 0.0;
    double c_ = 0.0;
    Eigen::MatrixXd null_basis_; ///< columns spanning the numerical nullspace (original dimension)
    std::unique_ptr<ControlledEvolution> evolution_;
};

[[nodiscard]] HHLResult hhl_solve(const SparseSymMatrix &a, std::span<const double> b, const HHLConfig &cfg);

struct SweepPoint {
    int n_c;
    double mean_are;
    double success_probability;
};

/// One hhl_solve per clock size against the direct solve; solution rescaled to the reference norm and sign.
[[nodiscard]] std::vector<SweepPoint> nc_sweep(const SparseSymMatrix &a, std::span<const double> b,
                                               std::span<const int> nc_values, const HHLConfig &base);

/// Picks the evolution time for a spectrum with the given nonzero |λ| extremes.
[[nodiscard]] double choose_evolution_time(double lambda_min, double lambda_max, const HHLConfig &cfg);

} // namespace qns
