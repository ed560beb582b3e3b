#include <bit>
#include <cmath>
#include <numbers>

#include "qns/error.hpp"
#include "qns/hhl.hpp"

namespace qns {

namespace {

int qubits_for_dim(Eigen::Index dim) {
    if (dim < 2 || !std::has_single_bit(static_cast<std::uint64_t>(dim))) {
        throw ConfigError("evolution: matrix dimension must be a power of two ≥ 2 (pad upstream)");
    }
    return std::countr_zero(static_cast<std::uint64_t>(dim));
}

Eigen::MatrixXcd matrix_power(Eigen::MatrixXcd base, std::uint64_t e) {
    Eigen::MatrixXcd result = Eigen::MatrixXcd::Identity(base.rows(), base.cols());
    bool first = true;
    while (e > 0) {
        if (e & 1U) {
            result = first ? base : Eigen::MatrixXcd(result * base);
            first = false;
        }
        e >>= 1U;
        if (e > 0) {
            base = (base * base).eval();
        }
    }
    return result;
}

void check_phase_wrap(double t, double lambda_abs_max) {
    if (!(t >= 0.0) || !std::isfinite(t)) {
        throw ConfigError("evolution: time must be finite and non-negative");
    }
    if (t * lambda_abs_max >= 2.0 * std::numbers::pi) {
        throw ConfigError("evolution: t·|λ|max ≥ 2π, eigenphases would wrap");
    }
}

} // namespace

SpectralEvolution::SpectralEvolution(EigenDecomposition eig, double t)
    : eig_(std::move(eig)), t_(t), num_qubits_(qubits_for_dim(eig_.values.size())) {
    check_phase_wrap(t, eig_.values.cwiseAbs().maxCoeff());
    v_ = eig_.vectors.cast<cplx>();
    v_adj_ = v_.adjoint();
}

std::vector<cplx> SpectralEvolution::phases(std::uint64_t power, bool adjoint) const {
    const double sign = adjoint ? -1.0 : 1.0;
    std::vector<cplx> d(static_cast<std::size_t>(eig_.values.size()));
    for (Eigen::Index j = 0; j < eig_.values.size(); ++j) {
        const double angle = std::fmod(eig_.values[j] * t_ * static_cast<double>(power), 2.0 * std::numbers::pi);
        d[static_cast<std::size_t>(j)] = std::polar(1.0, sign * angle);
    }
    return d;
}

void SpectralEvolution::apply(StateVector &state, QubitRange reg, int control, std::uint64_t power,
                              bool adjoint) const {
    const Eigen::MatrixXcd u = adjoint ? Eigen::MatrixXcd(unitary(power).adjoint()) : unitary(power);
    const int controls[] = {control};
    apply_dense_unitary(state, u, reg, controls);
}

void SpectralEvolution::enter_basis(StateVector &state, QubitRange reg) const {
    apply_dense_unitary(state, v_adj_, reg);
}

void SpectralEvolution::leave_basis(StateVector &state, QubitRange reg) const { apply_dense_unitary(state, v_, reg); }

void SpectralEvolution::apply_in_basis(StateVector &state, QubitRange reg, int control, std::uint64_t power,
                                       bool adjoint) const {
    const auto d = phases(power, adjoint);
    const int controls[] = {control};
    apply_controlled_diagonal(state, d, reg, controls);
}

Eigen::MatrixXcd SpectralEvolution::unitary(std::uint64_t power) const {
    const auto d = phases(power, false);
    const Eigen::Map<const Eigen::VectorXcd> dv(d.data(), static_cast<Eigen::Index>(d.size()));
    return v_ * dv.asDiagonal() * v_adj_;
}

TrotterEvolution::TrotterEvolution(PauliTermList terms, double t, int steps)
    : terms_(std::move(terms)), t_(t), steps_(steps) {
    if (steps < 1) {
        throw ConfigError("trotter: step count must be ≥ 1");
    }
    if (terms_.num_qubits < 1) {
        throw ConfigError("trotter: at least one problem qubit required");
    }
    const int n = terms_.num_qubits;
    const auto dim = Eigen::Index{1} << n;
    const double tau = t / static_cast<double>(steps);
    const auto qubits = msb_first({0, n});

    // exp(i·c·P·τ) = exp(−i·(θ/2)·P) with θ = −2cτ
    step_.resize(dim, dim);
    for (Eigen::Index col = 0; col < dim; ++col) {
        auto sv = StateVector::basis_state(n, static_cast<std::uint64_t>(col));
        for (const auto &term : terms_.terms) {
            apply_pauli_rotation(sv, term.word, -2.0 * term.coeff * tau, qubits);
        }
        for (Eigen::Index row = 0; row < dim; ++row) {
            step_(row, col) = sv[static_cast<std::size_t>(row)];
        }
    }
    full_ = matrix_power(step_, static_cast<std::uint64_t>(steps));
    pow2_.push_back(full_);
}

Eigen::MatrixXcd TrotterEvolution::unitary(std::uint64_t power) const {
    if (power == 0) {
        return Eigen::MatrixXcd::Identity(full_.rows(), full_.cols());
    }
    if (std::has_single_bit(power)) {
        const auto k = static_cast<std::size_t>(std::countr_zero(power));
        while (pow2_.size() <= k) {
            pow2_.push_back(pow2_.back() * pow2_.back());
        }
        return pow2_[k];
    }
    return matrix_power(full_, power);
}

void TrotterEvolution::apply(StateVector &state, QubitRange reg, int control, std::uint64_t power,
                             bool adjoint) const {
    const Eigen::MatrixXcd u = adjoint ? Eigen::MatrixXcd(unitary(power).adjoint()) : unitary(power);
    const int controls[] = {control};
    apply_dense_unitary(state, u, reg, controls);
}

std::unique_ptr<ControlledEvolution> make_evolution(const Eigen::MatrixXd &a, double t, EvolutionBackend backend,
                                                    int trotter_steps) {
    auto eig = sym_eigendecomposition(a);
    if (backend == EvolutionBackend::spectral) {
        return std::make_unique<SpectralEvolution>(std::move(eig), t);
    }
    qubits_for_dim(a.rows());
    check_phase_wrap(t, eig.values.cwiseAbs().maxCoeff());
    return std::make_unique<TrotterEvolution>(pauli_decompose(a), t, trotter_steps);
}

void controlled_evolution(StateVector &state, const ControlledEvolution &u, QubitRange reg, int control,
                          std::uint64_t power) {
    if (reg.count != u.num_qubits()) {
        throw ContractViolation("controlled_evolution: register size does not match the evolution");
    }
    u.apply(state, reg, control, power, false);
}

} // namespace qns
