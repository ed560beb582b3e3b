#include <bit>
#include <cmath>

#include "qns/error.hpp"
#include "qns/kernels.hpp"
#include "qns/qsim.hpp"

namespace qns {

StateVector::StateVector(int num_qubits) : num_qubits_(num_qubits) {
    if (num_qubits < 1 || num_qubits > max_qubits) {
        throw ConfigError("state vector: qubit count must be in [1, " + std::to_string(max_qubits) + "]");
    }
    amps_.assign(std::size_t{1} << num_qubits, cplx{0.0, 0.0});
    amps_[0] = 1.0;
}

StateVector StateVector::from_amplitudes(std::vector<cplx> amps) {
    if (amps.size() < 2 || !std::has_single_bit(amps.size())) {
        throw ContractViolation("state vector: amplitude count must be a power of two ≥ 2");
    }
    StateVector s;
    s.num_qubits_ = std::countr_zero(amps.size());
    if (s.num_qubits_ > max_qubits) {
        throw ConfigError("state vector: too many qubits");
    }
    s.amps_ = std::move(amps);
    return s;
}

StateVector StateVector::basis_state(int num_qubits, std::uint64_t index) {
    StateVector s(num_qubits);
    if (index >= s.dim()) {
        throw ContractViolation("state vector: basis index out of range");
    }
    s.amps_[0] = 0.0;
    s.amps_[index] = 1.0;
    return s;
}

double StateVector::norm_squared() const { return kernels::norm_squared(amps_); }

void StateVector::normalize() {
    const double n2 = norm_squared();
    if (!(n2 > 0.0)) {
        throw DegenerateInputError("state vector: cannot normalize a zero state");
    }
    const double s = 1.0 / std::sqrt(n2);
    for (auto &a : amps_) {
        a *= s;
    }
}

double StateVector::probability_of(int qubit, int outcome) const {
    if (qubit < 0 || qubit >= num_qubits_ || (outcome != 0 && outcome != 1)) {
        throw ContractViolation("probability_of: qubit or outcome out of range");
    }
    const std::size_t bit = std::size_t{1} << qubit;
    const std::size_t want = outcome != 0 ? bit : 0;
    double p = 0.0;
    for (std::size_t i = 0; i < amps_.size(); ++i) {
        if ((i & bit) == want) {
            p += std::norm(amps_[i]);
        }
    }
    return p;
}

std::vector<double> StateVector::register_distribution(QubitRange reg) const {
    if (reg.first < 0 || reg.count < 1 || reg.first + reg.count > num_qubits_) {
        throw ContractViolation("register_distribution: register out of range");
    }
    std::vector<double> p(reg.size(), 0.0);
    const std::size_t m = reg.size() - 1;
    for (std::size_t i = 0; i < amps_.size(); ++i) {
        p[(i >> reg.first) & m] += std::norm(amps_[i]);
    }
    return p;
}

double project_and_renormalize(StateVector &state, int qubit, int outcome) {
    const double p = state.probability_of(qubit, outcome);
    if (!(p > 1e-14)) {
        throw PostSelectionError("post-selection: outcome probability " + std::to_string(p) + " is below 1e-14");
    }
    const std::size_t bit = std::size_t{1} << qubit;
    const std::size_t want = outcome != 0 ? bit : 0;
    const double s = 1.0 / std::sqrt(p);
    auto amps = state.amplitudes();
    for (std::size_t i = 0; i < amps.size(); ++i) {
        amps[i] = (i & bit) == want ? amps[i] * s : cplx{0.0, 0.0};
    }
    return p;
}

} // namespace qns
