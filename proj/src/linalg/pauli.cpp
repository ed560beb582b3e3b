#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>

#include "qns/error.hpp"
#include "qns/linalg.hpp"

namespace qns {

namespace {

using cplx = std::complex<double>;

int letter_rank(char c) {
    switch (c) {
    case 'I': return 0;
    case 'X': return 1;
    case 'Y': return 2;
    case 'Z': return 3;
    default: throw ParseError(std::string("pauli: invalid letter '") + c + "'");
    }
}

// i^k for k mod 4
cplx i_power(int k) {
    switch (k & 3) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
    }
}

struct Masks {
    std::uint64_t x = 0;
    std::uint64_t z = 0;
};

Masks masks_of(const std::string &word) {
    Masks m;
    const auto n = word.size();
    for (std::size_t p = 0; p < n; ++p) {
        const auto bit = std::uint64_t{1} << (n - 1 - p);
        switch (letter_rank(word[p])) {
        case 1: m.x |= bit; break;
        case 2: m.x |= bit; m.z |= bit; break;
        case 3: m.z |= bit; break;
        default: break;
        }
    }
    return m;
}

std::string word_of(std::uint64_t x, std::uint64_t z, int n) {
    std::string w(static_cast<std::size_t>(n), 'I');
    for (int q = 0; q < n; ++q) {
        const bool xb = (x >> q) & 1U;
        const bool zb = (z >> q) & 1U;
        w[static_cast<std::size_t>(n - 1 - q)] = xb ? (zb ? 'Y' : 'X') : (zb ? 'Z' : 'I');
    }
    return w;
}

int qubits_for(Eigen::Index dim) {
    if (dim <= 0 || !std::has_single_bit(static_cast<std::uint64_t>(dim))) {
        throw ConfigError("pauli: dimension must be a power of two (pad upstream)");
    }
    return std::countr_zero(static_cast<std::uint64_t>(dim));
}

} // namespace

Eigen::MatrixXcd pauli_matrix(const std::string &word) {
    const auto n = static_cast<int>(word.size());
    const Masks m = masks_of(word);
    const auto dim = std::int64_t{1} << n;
    const cplx base = i_power(std::popcount(m.x & m.z));
    Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(dim, dim);
    for (std::int64_t c = 0; c < dim; ++c) {
        const auto cu = static_cast<std::uint64_t>(c);
        const double sign = (std::popcount(cu & m.z) & 1) ? -1.0 : 1.0;
        p(static_cast<Eigen::Index>(cu ^ m.x), c) = base * sign;
    }
    return p;
}

PauliTermList pauli_decompose(const Eigen::MatrixXcd &a, double prune) {
    if (a.rows() != a.cols()) {
        throw ContractViolation("pauli: matrix must be square");
    }
    const int n = qubits_for(a.rows());
    const double scale = std::max(a.cwiseAbs().maxCoeff(), 1e-300);
    if ((a - a.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
        throw ContractViolation("pauli: matrix is not Hermitian");
    }

    const auto dim = std::uint64_t{1} << n;
    PauliTermList out;
    out.num_qubits = n;
    for (std::uint64_t x = 0; x < dim; ++x) {
        for (std::uint64_t z = 0; z < dim; ++z) {
            // tr(P·A) = Σ_c P[c, c^x]·A[c^x, c]
            cplx tr{0.0, 0.0};
            for (std::uint64_t c = 0; c < dim; ++c) {
                const auto r = c ^ x;
                const double sign = (std::popcount(r & z) & 1) ? -1.0 : 1.0;
                tr += sign * a(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
            }
            tr *= i_power(std::popcount(x & z));
            const double coeff = tr.real() / static_cast<double>(dim);
            if (std::abs(coeff) >= prune) {
                out.terms.push_back({coeff, word_of(x, z, n)});
            }
        }
    }
    std::sort(out.terms.begin(), out.terms.end(), [](const PauliTerm &l, const PauliTerm &r) {
        return std::lexicographical_compare(l.word.begin(), l.word.end(), r.word.begin(), r.word.end(),
                                            [](char a, char b) { return letter_rank(a) < letter_rank(b); });
    });
    return out;
}

PauliTermList pauli_decompose(const Eigen::MatrixXd &a, double prune) {
    return pauli_decompose(Eigen::MatrixXcd(a.cast<cplx>()), prune);
}

Eigen::MatrixXcd PauliTermList::reconstruct() const {
    const auto dim = std::int64_t{1} << num_qubits;
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
    for (const auto &t : terms) {
        m += t.coeff * pauli_matrix(t.word);
    }
    return m;
}

} // namespace qns
