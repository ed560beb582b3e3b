#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <numbers>

#include "qns/error.hpp"
#include "qns/kernels.hpp"
#include "qns/qsim.hpp"

namespace qns {

namespace gates {

Gate2 H() {
    const double s = 1.0 / std::numbers::sqrt2;
    Gate2 g;
    g << s, s, s, -s;
    return g;
}

Gate2 X() {
    Gate2 g;
    g << 0.0, 1.0, 1.0, 0.0;
    return g;
}

Gate2 Y() {
    Gate2 g;
    g << 0.0, cplx(0.0, -1.0), cplx(0.0, 1.0), 0.0;
    return g;
}

Gate2 Z() {
    Gate2 g;
    g << 1.0, 0.0, 0.0, -1.0;
    return g;
}

Gate2 rx(double theta) {
    const double c = std::cos(theta / 2);
    const double s = std::sin(theta / 2);
    Gate2 g;
    g << c, cplx(0.0, -s), cplx(0.0, -s), c;
    return g;
}

Gate2 ry(double theta) {
    const double c = std::cos(theta / 2);
    const double s = std::sin(theta / 2);
    Gate2 g;
    g << c, -s, s, c;
    return g;
}

Gate2 rz(double theta) {
    Gate2 g;
    g << std::polar(1.0, -theta / 2), 0.0, 0.0, std::polar(1.0, theta / 2);
    return g;
}

Gate2 phase(double phi) {
    Gate2 g;
    g << 1.0, 0.0, 0.0, std::polar(1.0, phi);
    return g;
}

} // namespace gates

namespace {

void check_qubit(const StateVector &s, int q, const char *what) {
    if (q < 0 || q >= s.num_qubits()) {
        throw ContractViolation(std::string(what) + ": qubit index " + std::to_string(q) + " out of range");
    }
}

std::uint64_t mask_of(const StateVector &s, std::span<const int> qubits, const char *what) {
    std::uint64_t m = 0;
    for (int q : qubits) {
        check_qubit(s, q, what);
        const auto bit = std::uint64_t{1} << q;
        if (m & bit) {
            throw ContractViolation(std::string(what) + ": repeated qubit index");
        }
        m |= bit;
    }
    return m;
}

void check_register(const StateVector &s, QubitRange reg, const char *what) {
    if (reg.count < 1 || reg.first < 0 || reg.first + reg.count > s.num_qubits()) {
        throw ContractViolation(std::string(what) + ": register out of range");
    }
}

void check_unitary2(const Gate2 &g) {
    if ((g * g.adjoint() - Gate2::Identity()).cwiseAbs().maxCoeff() >= 1e-10) {
        throw ContractViolation("gate is not unitary to 1e-10");
    }
}

kernels::Mat2 to_mat2(const Gate2 &g) { return {g(0, 0), g(0, 1), g(1, 0), g(1, 1)}; }

void apply_masked(StateVector &state, const Gate2 &gate, std::uint64_t ctrl, int target) {
    check_unitary2(gate);
    kernels::apply_mat2(state.amplitudes(), static_cast<unsigned>(target), ctrl, to_mat2(gate));
}

} // namespace

void apply_single_qubit(StateVector &state, const Gate2 &gate, int target) {
    check_qubit(state, target, "apply_single_qubit");
    apply_masked(state, gate, 0, target);
}

void apply_controlled(StateVector &state, const Gate2 &gate, int control, int target) {
    const int controls[] = {control};
    apply_multi_controlled(state, gate, controls, target);
}

void apply_multi_controlled(StateVector &state, const Gate2 &gate, std::span<const int> controls, int target) {
    check_qubit(state, target, "apply_controlled");
    const auto ctrl = mask_of(state, controls, "apply_controlled");
    if ((ctrl >> target) & 1U) {
        throw ContractViolation("apply_controlled: control and target overlap");
    }
    apply_masked(state, gate, ctrl, target);
}

void apply_multi_controlled_phase(StateVector &state, double phi, std::span<const int> qubits) {
    const auto ctrl = mask_of(state, qubits, "apply_multi_controlled_phase");
    const cplx table[] = {std::polar(1.0, phi)};
    kernels::multiply_phase_table(state.amplitudes(), ctrl, 0, table);
}

void apply_pauli_rotation(StateVector &state, const std::string &word, double angle, std::span<const int> qubits,
                          std::span<const int> controls) {
    if (word.size() != qubits.size()) {
        throw ContractViolation("apply_pauli_rotation: word length differs from qubit count");
    }
    const auto support = mask_of(state, qubits, "apply_pauli_rotation");
    const auto ctrl = mask_of(state, controls, "apply_pauli_rotation");
    if (support & ctrl) {
        throw ContractViolation("apply_pauli_rotation: control overlaps rotated qubits");
    }
    std::uint64_t xm = 0;
    std::uint64_t zm = 0;
    int ny = 0;
    for (std::size_t p = 0; p < word.size(); ++p) {
        const auto bit = std::uint64_t{1} << qubits[p];
        switch (word[p]) {
        case 'I': break;
        case 'X': xm |= bit; break;
        case 'Y': xm |= bit; zm |= bit; ++ny; break;
        case 'Z': zm |= bit; break;
        default: throw ParseError(std::string("apply_pauli_rotation: invalid letter '") + word[p] + "'");
        }
    }

    const double c = std::cos(angle / 2);
    const double s = std::sin(angle / 2);
    const cplx minus_i_s{0.0, -s};
    // P|r⟩ = i^{ny}·(−1)^{popcount(r & z)}·|r ⊕ x⟩
    const cplx yphase = std::array<cplx, 4>{cplx{1, 0}, cplx{0, 1}, cplx{-1, 0}, cplx{0, -1}}[ny & 3];
    auto phase_of = [&](std::uint64_t r) { return (std::popcount(r & zm) & 1) ? -yphase : yphase; };

    auto amps = state.amplitudes();
    const std::uint64_t n = amps.size();
    if (xm == 0) {
        const cplx plus{c, -s};  // e^{−iθ/2}
        const cplx minus{c, s}; // e^{+iθ/2}
        for (std::uint64_t i = 0; i < n; ++i) {
            if ((i & ctrl) == ctrl) {
                amps[i] *= (std::popcount(i & zm) & 1) ? minus : plus;
            }
        }
        return;
    }
    const std::uint64_t pivot = xm & (~xm + 1);
    for (std::uint64_t i = 0; i < n; ++i) {
        if ((i & pivot) || (i & ctrl) != ctrl) {
            continue;
        }
        const std::uint64_t j = i ^ xm;
        const cplx ai = amps[i];
        const cplx aj = amps[j];
        // (P a)[i] = phase(j)·a[j], (P a)[j] = phase(i)·a[i]
        amps[i] = c * ai + minus_i_s * phase_of(j) * aj;
        amps[j] = c * aj + minus_i_s * phase_of(i) * ai;
    }
}

std::vector<int> msb_first(QubitRange reg) {
    std::vector<int> q(static_cast<std::size_t>(reg.count));
    for (int p = 0; p < reg.count; ++p) {
        q[static_cast<std::size_t>(p)] = reg.first + reg.count - 1 - p;
    }
    return q;
}

void apply_swap(StateVector &state, int a, int b) {
    check_qubit(state, a, "apply_swap");
    check_qubit(state, b, "apply_swap");
    if (a == b) {
        return;
    }
    const std::uint64_t ba = std::uint64_t{1} << a;
    const std::uint64_t bb = std::uint64_t{1} << b;
    auto amps = state.amplitudes();
    for (std::uint64_t i = 0; i < amps.size(); ++i) {
        if ((i & ba) && !(i & bb)) {
            std::swap(amps[i], amps[i ^ ba ^ bb]);
        }
    }
}

void qft(StateVector &state, QubitRange reg, bool inverse) {
    check_register(state, reg, "qft");
    const double sign = inverse ? -1.0 : 1.0;
    const int r = reg.count;
    const auto q = [&](int k) { return reg.first + k; };

    auto forward_layer = [&](int m) {
        apply_single_qubit(state, gates::H(), q(m));
        for (int k = m - 1; k >= 0; --k) {
            const double phi = sign * 2.0 * std::numbers::pi / static_cast<double>(std::uint64_t{1} << (m - k + 1));
            const int pair[] = {q(k), q(m)};
            apply_multi_controlled_phase(state, phi, pair);
        }
    };
    auto reverse_bits = [&] {
        for (int k = 0; k < r / 2; ++k) {
            apply_swap(state, q(k), q(r - 1 - k));
        }
    };

    if (!inverse) {
        for (int m = r - 1; m >= 0; --m) {
            forward_layer(m);
        }
        reverse_bits();
        return;
    }
    // Adjoint: reversed gate order with conjugated phases; each layer's
    // controlled phases commute with each other, so only H moves to the end.
    reverse_bits();
    for (int m = 0; m < r; ++m) {
        for (int k = 0; k < m; ++k) {
            const double phi = sign * 2.0 * std::numbers::pi / static_cast<double>(std::uint64_t{1} << (m - k + 1));
            const int pair[] = {q(k), q(m)};
            apply_multi_controlled_phase(state, phi, pair);
        }
        apply_single_qubit(state, gates::H(), q(m));
    }
}

void apply_dense_unitary(StateVector &state, const Eigen::MatrixXcd &u, QubitRange reg,
                         std::span<const int> controls) {
    check_register(state, reg, "apply_dense_unitary");
    const auto dim = static_cast<Eigen::Index>(reg.size());
    if (u.rows() != dim || u.cols() != dim) {
        throw ContractViolation("apply_dense_unitary: matrix size does not match register");
    }
    if ((u.adjoint() * u - Eigen::MatrixXcd::Identity(dim, dim)).cwiseAbs().maxCoeff() >= 1e-9) {
        throw ContractViolation("apply_dense_unitary: matrix is not unitary to 1e-9");
    }
    const auto ctrl = mask_of(state, controls, "apply_dense_unitary");
    const auto rmask = reg.mask();
    if (ctrl & rmask) {
        throw ContractViolation("apply_dense_unitary: control overlaps register");
    }

    auto amps = state.amplitudes();
    std::vector<std::uint64_t> bases;
    bases.reserve(amps.size() / reg.size());
    for (std::uint64_t i = 0; i < amps.size(); ++i) {
        if (!(i & rmask) && (i & ctrl) == ctrl) {
            bases.push_back(i);
        }
    }
    if (bases.empty()) {
        return;
    }
    const auto cols = static_cast<Eigen::Index>(bases.size());
    if (reg.first == 0 && ctrl == 0) {
        // Register occupies the low bits: the state is a dim × rest column-major matrix.
        Eigen::Map<Eigen::MatrixXcd> m(amps.data(), dim, cols);
        m = (u * m).eval();
        return;
    }
    Eigen::MatrixXcd m(dim, cols);
    for (Eigen::Index c = 0; c < cols; ++c) {
        for (Eigen::Index v = 0; v < dim; ++v) {
            m(v, c) = amps[bases[static_cast<std::size_t>(c)] | (static_cast<std::uint64_t>(v) << reg.first)];
        }
    }
    const Eigen::MatrixXcd out = u * m;
    for (Eigen::Index c = 0; c < cols; ++c) {
        for (Eigen::Index v = 0; v < dim; ++v) {
            amps[bases[static_cast<std::size_t>(c)] | (static_cast<std::uint64_t>(v) << reg.first)] = out(v, c);
        }
    }
}

void apply_controlled_diagonal(StateVector &state, std::span<const cplx> diag, QubitRange reg,
                               std::span<const int> controls) {
    check_register(state, reg, "apply_controlled_diagonal");
    if (diag.size() != reg.size()) {
        throw ContractViolation("apply_controlled_diagonal: diagonal length does not match register");
    }
    for (const auto &d : diag) {
        if (std::abs(std::abs(d) - 1.0) >= 1e-9) {
            throw ContractViolation("apply_controlled_diagonal: entry is not unit modulus");
        }
    }
    const auto ctrl = mask_of(state, controls, "apply_controlled_diagonal");
    if (ctrl & reg.mask()) {
        throw ContractViolation("apply_controlled_diagonal: control overlaps register");
    }
    kernels::multiply_phase_table(state.amplitudes(), ctrl, static_cast<unsigned>(reg.first), diag);
}

void apply_register_controlled_ry(StateVector &state, QubitRange reg, std::span<const double> angles, int target) {
    check_register(state, reg, "apply_register_controlled_ry");
    check_qubit(state, target, "apply_register_controlled_ry");
    if (angles.size() != reg.size()) {
        throw ContractViolation("apply_register_controlled_ry: one angle per register value required");
    }
    const std::uint64_t tbit = std::uint64_t{1} << target;
    if (tbit & reg.mask()) {
        throw ContractViolation("apply_register_controlled_ry: target lies inside the register");
    }
    std::vector<double> cs(angles.size());
    std::vector<double> sn(angles.size());
    for (std::size_t l = 0; l < angles.size(); ++l) {
        cs[l] = std::cos(angles[l] / 2);
        sn[l] = std::sin(angles[l] / 2);
    }
    const std::uint64_t m = reg.size() - 1;
    auto amps = state.amplitudes();
    for (std::uint64_t i = 0; i < amps.size(); ++i) {
        if (i & tbit) {
            continue;
        }
        const auto l = (i >> reg.first) & m;
        const cplx a0 = amps[i];
        const cplx a1 = amps[i | tbit];
        amps[i] = cs[l] * a0 - sn[l] * a1;
        amps[i | tbit] = sn[l] * a0 + cs[l] * a1;
    }
}

} // namespace qns
