#include <algorithm>
#include <bit>
#include <cmath>
#include <random>

#include "qns/error.hpp"
#include "qns/kernels.hpp"
#include "qns/qsim.hpp"
#include "qns/qst.hpp"

namespace qns {

void ShotModel::validate() const {
    if (shots && *shots < 1) {
        throw ConfigError("shot model: shots must be ≥ 1");
    }
}

namespace {

void check_unit(std::span<const double> v, const char *what) {
    const double n2 = kernels::dot(v, v);
    if (!(std::abs(n2 - 1.0) <= 1e-8)) {
        throw ContractViolation(std::string(what) + ": vector is not normalized");
    }
}

std::mt19937_64 stream_rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
    const auto lo = [](std::uint64_t x) { return static_cast<std::uint32_t>(x); };
    const auto hi = [](std::uint64_t x) { return static_cast<std::uint32_t>(x >> 32); };
    std::seed_seq seq{lo(seed), hi(seed), lo(stream), hi(stream), lo(index), hi(index)};
    return std::mt19937_64(seq);
}

double sample_estimate(double p_agree, const ShotModel &model, std::uint64_t stream, std::uint64_t index) {
    const double p = std::clamp(p_agree, 0.0, 1.0);
    if (!model.shots) {
        return 2.0 * p - 1.0;
    }
    auto rng = stream_rng(model.seed, stream, index);
    std::binomial_distribution<std::uint64_t> dist(*model.shots, p);
    const auto k = dist(rng);
    return 2.0 * static_cast<double>(k) / static_cast<double>(*model.shots) - 1.0;
}

Eigen::MatrixXcd householder_prep(std::span<const double> target, Eigen::Index dim) {
    Eigen::VectorXd psi = Eigen::VectorXd::Zero(dim);
    for (std::size_t i = 0; i < target.size(); ++i) {
        psi[static_cast<Eigen::Index>(i)] = target[i];
    }
    Eigen::VectorXd w = -psi;
    w[0] += 1.0;
    const double n = w.norm();
    if (n < 1e-15) {
        return Eigen::MatrixXcd::Identity(dim, dim);
    }
    w /= n;
    // Reflection swapping e₀ and ψ (both unit vectors).
    const Eigen::MatrixXd u = Eigen::MatrixXd::Identity(dim, dim) - 2.0 * w * w.transpose();
    return u.cast<cplx>();
}

} // namespace

double overlap_estimate(std::span<const double> state, std::span<const double> phi, const ShotModel &model,
                        std::uint64_t stream, std::uint64_t index) {
    model.validate();
    if (state.size() != phi.size()) {
        throw ContractViolation("overlap_estimate: vector lengths differ");
    }
    check_unit(state, "overlap_estimate");
    check_unit(phi, "overlap_estimate");
    const double r = std::clamp(kernels::dot(phi, state), -1.0, 1.0);
    if (!model.shots) {
        return r;
    }
    return sample_estimate(0.5 * (1.0 + r), model, stream, index);
}

HadamardTestResult gate_level_hadamard_test(std::span<const double> state, std::span<const double> phi,
                                            const ShotModel &model, std::uint64_t stream) {
    model.validate();
    if (state.size() != phi.size() || state.empty()) {
        throw ContractViolation("hadamard test: vector lengths differ");
    }
    if (state.size() > 64) {
        throw ScopeError("hadamard test: gate-level construction limited to 6 data qubits");
    }
    check_unit(state, "hadamard test");
    check_unit(phi, "hadamard test");
    const int n = std::max(1, static_cast<int>(std::bit_width(state.size() - 1)));
    const auto dim = Eigen::Index{1} << n;
    const int anc = n;
    const int ctrl[] = {anc};
    const QubitRange data{0, n};

    StateVector sv(n + 1);
    apply_single_qubit(sv, gates::H(), anc);
    apply_single_qubit(sv, gates::X(), anc);
    apply_dense_unitary(sv, householder_prep(state, dim), data, ctrl);
    apply_single_qubit(sv, gates::X(), anc);
    apply_dense_unitary(sv, householder_prep(phi, dim), data, ctrl);
    apply_single_qubit(sv, gates::H(), anc);

    const double p0 = sv.probability_of(anc, 0);
    return {p0, sample_estimate(p0, model, stream, 0)};
}

ChebyExpansion reconstruct(std::span<const double> state, const ChebyBasis &basis, const ShotModel &model,
                           std::uint64_t stream, bool gram_correction) {
    if (state.size() != basis.length()) {
        throw ContractViolation("reconstruct: state length does not match the basis sample count");
    }
    ChebyExpansion e;
    e.overlaps.resize(basis.size());
    for (std::size_t a = 0; a < basis.size(); ++a) {
        e.overlaps[a] = overlap_estimate(state, basis.vector(a), model, stream, a);
    }
    const Eigen::Map<const Eigen::VectorXd> v(e.overlaps.data(), static_cast<Eigen::Index>(e.overlaps.size()));
    if (gram_correction) {
        const Eigen::VectorXd c = basis.gram_solve(v);
        e.coefficients.assign(c.data(), c.data() + c.size());
    } else {
        e.coefficients = e.overlaps;
    }
    e.values = basis.synthesize(e.coefficients);
    return e;
}

} // namespace qns
