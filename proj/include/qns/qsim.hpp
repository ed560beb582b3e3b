#pragma once

// Dense statevector simulator. Qubit 0 is the least significant bit of the
// basis index; a register {first, count} reads its value from bits
// first .. first+count−1 with qubit `first` as the register's LSB.

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qns {

using cplx = std::complex<double>;
using Gate2 = Eigen::Matrix2cd;

struct QubitRange {
    int first = 0;
    int count = 0;

    [[nodiscard]] std::uint64_t mask() const { return ((std::uint64_t{1} << count) - 1) << first; }
    [[nodiscard]] std::size_t size() const { return std::size_t{1} << count; }
};

class StateVector {
  public:
    static constexpr int max_qubits = 28;

    /// |0…0⟩ on num_qubits qubits.
    explicit StateVector(int num_qubits);

    /// Takes the amplitudes as given (no normalization), length must be a power of two.
    static StateVector from_amplitudes(std::vector<cplx> amps);
    static StateVector basis_state(int num_qubits, std::uint64_t index);

    [[nodiscard]] int num_qubits() const { return num_qubits_; }
    [[nodiscard]] std::size_t dim() const { return amps_.size(); }
    [[nodiscard]] std::span<cplx> amplitudes() { return amps_; }
    [[nodiscard]] std::span<const cplx> amplitudes() const { return amps_; }
    [[nodiscard]] cplx operator[](std::size_t i) const { return amps_[i]; }

    [[nodiscard]] double norm_squared() const;
    void normalize();

    /// Born weight of `outcome` on one qubit.
    [[nodiscard]] double probability_of(int qubit, int outcome) const;
    /// Marginal distribution of a register's value.
    [[nodiscard]] std::vector<double> register_distribution(QubitRange reg) const;

  private:
    StateVector() = default;
    int num_qubits_ = 0;
    std::vector<cplx> amps_;
};

namespace gates {
[[nodiscard]] Gate2 H();
[[nodiscard]] Gate2 X();
[[nodiscard]] Gate2 Y();
[[nodiscard]] Gate2 Z();
[[nodiscard]] Gate2 rx(double theta);
[[nodiscard]] Gate2 ry(double theta);
[[nodiscard]] Gate2 rz(double theta);
/// diag(1, e^{iφ})
[[nodiscard]] Gate2 phase(double phi);
} // namespace gates

/// Throws ContractViolation unless ‖G·G† − I‖_max < 1e-10.
void apply_single_qubit(StateVector &state, const Gate2 &gate, int target);
void apply_controlled(StateVector &state, const Gate2 &gate, int control, int target);
void apply_multi_controlled(StateVector &state, const Gate2 &gate, std::span<const int> controls, int target);

/// Multiplies e^{iφ} onto every basis state with all listed qubits set.
void apply_multi_controlled_phase(StateVector &state, double phi, std::span<const int> qubits);

/**
 * exp(−i·(angle/2)·P) for the Pauli word P, with word[p] acting on qubits[p].
 * Optional controls restrict the action to their all-ones subspace.
 */
void apply_pauli_rotation(StateVector &state, const std::string &word, double angle, std::span<const int> qubits,
                          std::span<const int> controls = {});

/// Qubit list of a register ordered most significant first, matching the Pauli word convention.
[[nodiscard]] std::vector<int> msb_first(QubitRange reg);

/// |x⟩ → 2^{−r/2} Σ_y e^{±2πi·xy/2^r} |y⟩ (minus sign for the inverse), built from H,
/// controlled phases and swaps.
void qft(StateVector &state, QubitRange reg, bool inverse = false);

void apply_swap(StateVector &state, int a, int b);

/**
 * Projects `qubit` onto `outcome` and renormalizes. Returns the Born weight the
 * outcome had before projection. Throws PostSelectionError when it is below 1e-14.
 */
double project_and_renormalize(StateVector &state, int qubit, int outcome);

/// Applies the 2^r×2^r unitary U to register `reg` on the all-ones subspace of `controls`.
/// Throws ContractViolation unless ‖U†U − I‖_max < 1e-9.
void apply_dense_unitary(StateVector &state, const Eigen::MatrixXcd &u, QubitRange reg,
                         std::span<const int> controls = {});

/// Diagonal unitary on a register: a[i] *= diag[value of reg in i], restricted to controls.
void apply_controlled_diagonal(StateVector &state, std::span<const cplx> diag, QubitRange reg,
                               std::span<const int> controls = {});

/// For every register value l, applies Ry(angles[l]) to `target` on the reg = l subspace.
void apply_register_controlled_ry(StateVector &state, QubitRange reg, std::span<const double> angles, int target);

} // namespace qns
