#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "qns/error.hpp"
#include "qns/kernels.hpp"
#include "qns/qsim.hpp"

using namespace qns;

namespace {

constexpr double pi = std::numbers::pi;

StateVector random_state(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> d;
    std::vector<cplx> a(std::size_t{1} << n);
    for (auto &x : a) {
        x = {d(rng), d(rng)};
    }
    auto s = StateVector::from_amplitudes(std::move(a));
    s.normalize();
    return s;
}

Eigen::VectorXcd to_vec(const StateVector &s) {
    Eigen::VectorXcd v(static_cast<Eigen::Index>(s.dim()));
    for (std::size_t i = 0; i < s.dim(); ++i) {
        v[static_cast<Eigen::Index>(i)] = s[i];
    }
    return v;
}

double distance(const StateVector &a, const StateVector &b) { return (to_vec(a) - to_vec(b)).norm(); }

Eigen::MatrixXcd random_unitary(int dim, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> d;
    Eigen::MatrixXcd z(dim, dim);
    for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < dim; ++j) {
            z(i, j) = {d(rng), d(rng)};
        }
    }
    return Eigen::HouseholderQR<Eigen::MatrixXcd>(z).householderQ();
}

// Dense operator of a 2×2 gate on `target` of an n-qubit register, built from Kronecker products.
Eigen::MatrixXcd embed(const Gate2 &g, int target, int n) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(1, 1);
    for (int q = n - 1; q >= 0; --q) {
        const Eigen::MatrixXcd f = q == target ? Eigen::MatrixXcd(g) : Eigen::MatrixXcd::Identity(2, 2);
        Eigen::MatrixXcd k(m.rows() * 2, m.cols() * 2);
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            for (Eigen::Index j = 0; j < m.cols(); ++j) {
                k.block(2 * i, 2 * j, 2, 2) = m(i, j) * f;
            }
        }
        m = k;
    }
    return m;
}

} // namespace

TEST_CASE("single-qubit basics") {
    StateVector s(1);
    apply_single_qubit(s, gates::H(), 0);
    CHECK(s[0].real() == doctest::Approx(1 / std::sqrt(2.0)));
    CHECK(s[1].real() == doctest::Approx(1 / std::sqrt(2.0)));

    StateVector t(2);
    apply_single_qubit(t, gates::X(), 1);
    CHECK(std::abs(t[2]) == doctest::Approx(1.0));

    Gate2 bad = Gate2::Identity();
    bad(0, 0) = 2.0;
    CHECK_THROWS_AS(apply_single_qubit(t, bad, 0), ContractViolation);
    CHECK_THROWS_AS(apply_single_qubit(t, gates::X(), 2), ContractViolation);
}

TEST_CASE("gate then adjoint is identity on random states") {
    const auto u = random_unitary(2, 5);
    const Gate2 g = u;
    const Gate2 gd = u.adjoint();
    for (int target = 0; target < 5; ++target) {
        auto s = random_state(5, 100 + static_cast<std::uint64_t>(target));
        const auto ref = s;
        apply_single_qubit(s, g, target);
        CHECK(std::abs(s.norm_squared() - 1.0) < 1e-10);
        apply_single_qubit(s, gd, target);
        CHECK(distance(s, ref) < 1e-10);
    }
}

TEST_CASE("single-qubit gate matches the Kronecker oracle") {
    const Gate2 g = random_unitary(2, 9);
    for (int target = 0; target < 4; ++target) {
        auto s = random_state(4, 7);
        const Eigen::VectorXcd expect = embed(g, target, 4) * to_vec(s);
        apply_single_qubit(s, g, target);
        CHECK((to_vec(s) - expect).norm() < 1e-12);
    }
}

TEST_CASE("controlled gates") {
    auto s = StateVector::basis_state(2, 0b10);
    apply_controlled(s, gates::X(), 1, 0);
    CHECK(std::abs(s[0b11]) == doctest::Approx(1.0));

    auto r = random_state(3, 1);
    auto zero_ctrl = StateVector::basis_state(3, 0b010);
    const auto before = zero_ctrl;
    apply_controlled(zero_ctrl, gates::H(), 0, 2);
    CHECK(distance(zero_ctrl, before) < 1e-15);

    const auto ref = r;
    const int qs[] = {0, 2};
    apply_multi_controlled_phase(r, pi, qs);
    apply_multi_controlled_phase(r, pi, qs);
    CHECK(distance(r, ref) < 1e-12);

    CHECK_THROWS_AS(apply_controlled(r, gates::X(), 1, 1), ContractViolation);
}

TEST_CASE("pauli rotations") {
    auto s = random_state(3, 4);
    const auto ref = s;
    const int q1[] = {1};
    apply_pauli_rotation(s, "Z", 2 * pi, q1);
    for (std::size_t i = 0; i < s.dim(); ++i) {
        CHECK(std::abs(s[i] + ref[i]) < 1e-12);
    }

    auto t = random_state(3, 5);
    const auto tref = t;
    const int q3[] = {0, 1, 2};
    apply_pauli_rotation(t, "III", 0.7, q3);
    for (std::size_t i = 0; i < t.dim(); ++i) {
        CHECK(std::abs(t[i] - std::polar(1.0, -0.35) * tref[i]) < 1e-12);
    }

    StateVector u(1);
    const int q0[] = {0};
    apply_pauli_rotation(u, "X", pi / 3, q0);
    // Oracle: matrix exponential of −iθX/2 via the eigen-decomposition of X.
    Eigen::Matrix2cd x;
    x << 0, 1, 1, 0;
    const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(x);
    Eigen::Matrix2cd e = es.eigenvectors() *
                         Eigen::Vector2cd(std::exp(cplx(0, -pi / 6 * es.eigenvalues()[0])),
                                          std::exp(cplx(0, -pi / 6 * es.eigenvalues()[1])))
                             .asDiagonal() *
                         es.eigenvectors().adjoint();
    CHECK(std::abs(u[0] - e(0, 0)) < 1e-12);
    CHECK(std::abs(u[1] - e(1, 0)) < 1e-12);
    CHECK(u[0].real() == doctest::Approx(std::cos(pi / 6)));
    CHECK(u[1].imag() == doctest::Approx(-std::sin(pi / 6)));

    CHECK_THROWS_AS(apply_pauli_rotation(u, "Q", 0.1, q0), ParseError);
}

TEST_CASE("pauli rotation of a two-qubit word matches the dense exponential") {
    const char *words[] = {"XY", "ZX", "YY", "XZ"};
    for (const char *w : words) {
        auto s = random_state(3, 21);
        const Eigen::VectorXcd v0 = to_vec(s);
        const int qs[] = {2, 0}; // word[0] on qubit 2, word[1] on qubit 0
        apply_pauli_rotation(s, w, 0.9, qs);
        auto pm = [](char c) {
            Gate2 g;
            if (c == 'X') g = gates::X();
            if (c == 'Y') g = gates::Y();
            if (c == 'Z') g = gates::Z();
            return g;
        };
        const Eigen::MatrixXcd p = embed(pm(w[0]), 2, 3) * embed(pm(w[1]), 0, 3);
        // P² = I, so exp(−iθP/2) = cos(θ/2)·I − i·sin(θ/2)·P.
        const Eigen::MatrixXcd u =
            std::cos(0.45) * Eigen::MatrixXcd::Identity(8, 8) - cplx(0, std::sin(0.45)) * p;
        CHECK((to_vec(s) - u * v0).norm() < 1e-12);
    }
}

TEST_CASE("qft") {
    StateVector z(4);
    qft(z, {0, 4});
    for (std::size_t i = 0; i < z.dim(); ++i) {
        CHECK(std::abs(z[i] - cplx(0.25, 0)) < 1e-12);
    }

    auto a = random_state(1, 3);
    auto b = a;
    qft(a, {0, 1});
    apply_single_qubit(b, gates::H(), 0);
    CHECK(distance(a, b) < 1e-12);

    for (int n = 1; n <= 10; ++n) {
        auto s = random_state(n, 50 + static_cast<std::uint64_t>(n));
        const auto ref = s;
        qft(s, {0, n});
        CHECK(std::abs(s.norm_squared() - 1.0) < 1e-10);
        qft(s, {0, n}, true);
        CHECK(distance(s, ref) < 1e-10);
    }
}

TEST_CASE("qft matches the DFT matrix on a sub-register") {
    // Register on qubits 1..3 of a 5-qubit state; oracle is the dense unitary DFT e^{+2πixy/N}/√N.
    const int n = 3;
    const int dim = 1 << n;
    Eigen::MatrixXcd f(dim, dim);
    for (int y = 0; y < dim; ++y) {
        for (int x = 0; x < dim; ++x) {
            f(y, x) = std::polar(1.0 / std::sqrt(double(dim)), 2 * pi * x * y / dim);
        }
    }
    auto s = random_state(5, 77);
    auto t = s;
    qft(s, {1, n});
    apply_dense_unitary(t, f, {1, n});
    CHECK(distance(s, t) < 1e-12);
}

TEST_CASE("projection and post-selection") {
    std::vector<cplx> bell(4);
    bell[0] = bell[3] = 1 / std::sqrt(2.0);
    auto s = StateVector::from_amplitudes(bell);
    CHECK(s.probability_of(0, 0) + s.probability_of(0, 1) == doctest::Approx(1.0));
    const double p = project_and_renormalize(s, 0, 1);
    CHECK(p == doctest::Approx(0.5));
    CHECK(std::abs(s[3]) == doctest::Approx(1.0));

    auto zero = StateVector::basis_state(2, 0);
    CHECK_THROWS_AS((void)project_and_renormalize(zero, 1, 1), PostSelectionError);

    // Product state: the other qubit is untouched.
    StateVector prod(2);
    apply_single_qubit(prod, gates::ry(0.8), 0);
    apply_single_qubit(prod, gates::ry(1.3), 1);
    const double p1 = project_and_renormalize(prod, 1, 1);
    CHECK(p1 == doctest::Approx(std::pow(std::sin(0.65), 2)));
    CHECK(std::abs(prod[0b10]) == doctest::Approx(std::cos(0.4)));
    CHECK(std::abs(prod[0b11]) == doctest::Approx(std::sin(0.4)));
}

TEST_CASE("dense unitary") {
    auto s = random_state(4, 8);
    const auto ref = s;
    apply_dense_unitary(s, Eigen::MatrixXcd::Identity(4, 4), {1, 2});
    CHECK(distance(s, ref) < 1e-15);

    const Gate2 g = random_unitary(2, 31);
    auto a = random_state(3, 9);
    auto b = a;
    const int ctrl[] = {2};
    apply_dense_unitary(a, Eigen::MatrixXcd(g), {0, 1}, ctrl);
    apply_controlled(b, g, 2, 0);
    CHECK(distance(a, b) < 1e-12);

    Eigen::MatrixXcd bad = Eigen::MatrixXcd::Identity(2, 2) * 1.1;
    CHECK_THROWS_AS(apply_dense_unitary(a, bad, {0, 1}), ContractViolation);
}

TEST_CASE("two-qubit unitary equals its gate synthesis") {
    // U = (A⊗B)·CNOT·(C⊗D)·CNOT built from gates, compared with the dense product applied as one block.
    const Gate2 ga = random_unitary(2, 1), gb = random_unitary(2, 2), gc = random_unitary(2, 3),
                gd = random_unitary(2, 4);
    const Eigen::MatrixXcd cnot = [] {
        Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(4, 4);
        m(0, 0) = m(1, 3) = m(2, 2) = m(3, 1) = 1; // control qubit 0, target qubit 1
        return m;
    }();
    const Eigen::MatrixXcd u = embed(gb, 1, 2) * embed(ga, 0, 2) * cnot * embed(gd, 1, 2) * embed(gc, 0, 2) * cnot;
    for (int trial = 0; trial < 4; ++trial) {
        auto s = random_state(4, 200 + static_cast<std::uint64_t>(trial));
        auto t = s;
        apply_dense_unitary(s, u, {1, 2});
        apply_controlled(t, gates::X(), 1, 2);
        apply_single_qubit(t, gc, 1);
        apply_single_qubit(t, gd, 2);
        apply_controlled(t, gates::X(), 1, 2);
        apply_single_qubit(t, ga, 1);
        apply_single_qubit(t, gb, 2);
        const double fidelity = std::norm(to_vec(s).dot(to_vec(t)));
        CHECK(fidelity > 1 - 1e-9);
    }
}

TEST_CASE("operations are linear") {
    auto a = random_state(4, 61);
    auto b = random_state(4, 62);
    const cplx alpha(0.3, -0.2), beta(-1.1, 0.4);
    std::vector<cplx> mix(a.dim());
    for (std::size_t i = 0; i < mix.size(); ++i) {
        mix[i] = alpha * a[i] + beta * b[i];
    }
    auto m = StateVector::from_amplitudes(mix);
    const auto op = [](StateVector &s) {
        apply_single_qubit(s, gates::ry(0.4), 1);
        apply_controlled(s, gates::H(), 0, 3);
        qft(s, {1, 3});
        const int qs[] = {0, 2};
        apply_pauli_rotation(s, "XY", 0.3, qs);
    };
    op(a);
    op(b);
    op(m);
    for (std::size_t i = 0; i < m.dim(); ++i) {
        CHECK(std::abs(m[i] - (alpha * a[i] + beta * b[i])) < 1e-12);
    }
}

TEST_CASE("controlled diagonal and register-controlled ry") {
    auto s = random_state(3, 12);
    const auto ref = s;
    const std::vector<cplx> diag{std::polar(1.0, 0.1), std::polar(1.0, 0.2), std::polar(1.0, 0.3),
                                 std::polar(1.0, 0.4)};
    const int ctrl[] = {2};
    apply_controlled_diagonal(s, diag, {0, 2}, ctrl);
    for (std::size_t i = 0; i < 8; ++i) {
        const cplx f = (i & 4) ? diag[i & 3] : cplx(1.0);
        CHECK(std::abs(s[i] - f * ref[i]) < 1e-14);
    }

    StateVector r = StateVector::basis_state(3, 0b10);
    const std::vector<double> angles{0.0, 0.0, 1.2, 0.0};
    apply_register_controlled_ry(r, {0, 2}, angles, 2);
    CHECK(r.probability_of(2, 1) == doctest::Approx(std::pow(std::sin(0.6), 2)));
}

TEST_CASE("simulator agrees across kernel sets") {
    if (!kernels::isa_available(kernels::Isa::avx2)) {
        return;
    }
    const auto run = [] {
        auto s = random_state(9, 314);
        for (int q = 0; q < 9; ++q) {
            apply_single_qubit(s, gates::rx(0.1 * q + 0.2), q);
        }
        apply_controlled(s, gates::H(), 0, 5);
        apply_controlled(s, gates::Y(), 6, 1);
        qft(s, {2, 6});
        return s;
    };
    StateVector a(1), b(1);
    {
        kernels::ScopedIsa g(kernels::Isa::scalar);
        a = run();
    }
    {
        kernels::ScopedIsa g(kernels::Isa::avx2);
        b = run();
    }
    CHECK(distance(a, b) < 1e-12);
}
