#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>

#include "qns/error.hpp"
#include "qns/hhl.hpp"
#include "qns/metrics.hpp"

namespace qns {

void HHLConfig::validate() const {
    if (n_c < 1 || n_c > 16) {
        throw ConfigError("hhl: clock qubits must be in [1, 16]");
    }
    if (n_b < 0) {
        throw ConfigError("hhl: problem qubit count must be non-negative");
    }
    if (trotter_steps < 1) {
        throw ConfigError("hhl: trotter steps must be ≥ 1");
    }
    if (!(evolution_scale > 0.0) || !std::isfinite(evolution_scale)) {
        throw ConfigError("hhl: evolution scale must be positive");
    }
    if (scaling == TimeScaling::explicit_time && !(evolution_time > 0.0)) {
        throw ConfigError("hhl: explicit evolution time must be positive");
    }
    if (reciprocal_constant < 0.0 || reciprocal_constant * std::ldexp(1.0, n_c) > 1.0 + 1e-12) {
        throw ConfigError("hhl: reciprocal constant C must satisfy 0 < C ≤ 2^-n_c");
    }
}

PreparedState prepare_b(std::span<const double> b, int n_b) {
    if (n_b < 1 || n_b > StateVector::max_qubits) {
        throw ConfigError("prepare_b: problem qubit count out of range");
    }
    if (b.size() > (std::size_t{1} << n_b)) {
        throw ContractViolation("prepare_b: vector longer than 2^n_b");
    }
    double n2 = 0.0;
    for (double v : b) {
        if (!std::isfinite(v)) {
            throw DegenerateInputError("prepare_b: non-finite entry");
        }
        n2 += v * v;
    }
    if (!(n2 > 0.0)) {
        throw DegenerateInputError("prepare_b: right-hand side is identically zero");
    }
    const double norm = std::sqrt(n2);
    std::vector<cplx> amps(std::size_t{1} << n_b, cplx{0.0, 0.0});
    for (std::size_t i = 0; i < b.size(); ++i) {
        amps[i] = b[i] / norm;
    }
    return {StateVector::from_amplitudes(std::move(amps)), norm};
}

namespace {

void check_layout(const StateVector &state, QubitRange problem, QubitRange clock) {
    if (clock.count < 1 || problem.count < 1 || clock.first < 0 || problem.first < 0 ||
        clock.first + clock.count > state.num_qubits() || problem.first + problem.count > state.num_qubits()) {
        throw ContractViolation("qpe: register out of range");
    }
    if (clock.mask() & problem.mask()) {
        throw ContractViolation("qpe: clock and problem registers overlap");
    }
}

void qpe_core(StateVector &state, const ControlledEvolution &u, QubitRange problem, QubitRange clock) {
    for (int k = 0; k < clock.count; ++k) {
        apply_single_qubit(state, gates::H(), clock.first + k);
    }
    for (int k = 0; k < clock.count; ++k) {
        u.apply_in_basis(state, problem, clock.first + k, std::uint64_t{1} << k, false);
    }
}

void inverse_qpe_core(StateVector &state, const ControlledEvolution &u, QubitRange problem, QubitRange clock) {
    for (int k = clock.count - 1; k >= 0; --k) {
        u.apply_in_basis(state, problem, clock.first + k, std::uint64_t{1} << k, true);
    }
    for (int k = 0; k < clock.count; ++k) {
        apply_single_qubit(state, gates::H(), clock.first + k);
    }
}

} // namespace

void qpe(StateVector &state, const ControlledEvolution &u, QubitRange problem, QubitRange clock) {
    check_layout(state, problem, clock);
    u.enter_basis(state, problem);
    qpe_core(state, u, problem, clock);
    u.leave_basis(state, problem);
    qft(state, clock, true);
}

void inverse_qpe(StateVector &state, const ControlledEvolution &u, QubitRange problem, QubitRange clock) {
    check_layout(state, problem, clock);
    qft(state, clock, false);
    u.enter_basis(state, problem);
    inverse_qpe_core(state, u, problem, clock);
    u.leave_basis(state, problem);
}

std::vector<double> reciprocal_angles(int n_c, double c) {
    const double top = std::ldexp(1.0, n_c);
    if (!(c > 0.0) || c * top > 1.0 + 1e-12) {
        throw ConfigError("reciprocal rotation: C·2^n_c must lie in (0, 1]");
    }
    std::vector<double> angles(static_cast<std::size_t>(top), 0.0);
    for (std::size_t l = 1; l < angles.size(); ++l) {
        angles[l] = 2.0 * std::asin(std::min(1.0, c * top / static_cast<double>(l)));
    }
    return angles;
}

void reciprocal_rotation(StateVector &state, QubitRange clock, int ancilla, double c) {
    const auto angles = reciprocal_angles(clock.count, c);
    apply_register_controlled_ry(state, clock, angles, ancilla);
}

double choose_evolution_time(double lambda_min, double lambda_max, const HHLConfig &cfg) {
    const double two_pi = 2.0 * std::numbers::pi;
    const double bins = std::ldexp(1.0, cfg.n_c);
    double t = 0.0;
    switch (cfg.scaling) {
    case TimeScaling::explicit_time:
        t = cfg.evolution_time;
        break;
    case TimeScaling::max_top:
        t = two_pi * (1.0 - 1.0 / bins) / lambda_max;
        break;
    case TimeScaling::min_exact: {
        const double bin = std::floor((bins - 1.0) * lambda_min / lambda_max);
        t = bin >= 1.0 ? two_pi * bin / (bins * lambda_min) : two_pi * (1.0 - 1.0 / bins) / lambda_max;
        break;
    }
    }
    return t * cfg.evolution_scale;
}

HHLSolver::HHLSolver(const SparseSymMatrix &a, const HHLConfig &cfg) : cfg_(cfg) {
    init(a.to_dense(), a.has_constant_nullspace());
}

HHLSolver::HHLSolver(const Eigen::MatrixXd &a, bool constant_nullspace, const HHLConfig &cfg) : cfg_(cfg) {
    init(a, constant_nullspace);
}

void HHLSolver::init(Eigen::MatrixXd a, bool constant_nullspace) {
    cfg_.validate();
    if (a.rows() != a.cols() || a.rows() < 1) {
        throw ContractViolation("hhl: matrix must be square and non-empty");
    }
    dim_ = static_cast<std::size_t>(a.rows());
    const int needed = std::max(1, static_cast<int>(std::bit_width(dim_ - 1)));
    n_b_ = cfg_.n_b > 0 ? cfg_.n_b : needed;
    if (n_b_ < needed) {
        throw ConfigError("hhl: matrix dimension exceeds 2^n_b");
    }
    if (n_b_ + cfg_.n_c + 1 > StateVector::max_qubits) {
        throw ConfigError("hhl: circuit exceeds the simulator qubit limit");
    }

    const auto eig = sym_eigendecomposition(a);
    const double scale = eig.values.cwiseAbs().maxCoeff();
    if (!(scale > 0.0)) {
        throw DegenerateInputError("hhl: zero matrix");
    }
    const double null_tol = 1e-10 * scale;
    std::vector<Eigen::Index> nulls;
    int positive = 0;
    int negative = 0;
    for (Eigen::Index j = 0; j < eig.values.size(); ++j) {
        const double l = eig.values[j];
        if (std::abs(l) < null_tol) {
            nulls.push_back(j);
        } else if (l > 0) {
            ++positive;
        } else {
            ++negative;
        }
    }
    if (positive > 0 && negative > 0) {
        throw ConfigError("hhl: indefinite matrix (mixed-sign spectrum) is not supported");
    }
    if (constant_nullspace && nulls.empty()) {
        throw ConsistencyError("hhl: matrix flagged singular but its spectrum has no zero eigenvalue");
    }
    negated_ = negative > 0;
    singular_ = !nulls.empty();
    null_basis_.resize(a.rows(), static_cast<Eigen::Index>(nulls.size()));
    for (std::size_t c = 0; c < nulls.size(); ++c) {
        null_basis_.col(static_cast<Eigen::Index>(c)) = eig.vectors.col(nulls[c]);
    }

    lambda_min_ = std::numeric_limits<double>::infinity();
    lambda_max_ = 0.0;
    for (Eigen::Index j = 0; j < eig.values.size(); ++j) {
        const double l = std::abs(eig.values[j]);
        if (l >= null_tol) {
            lambda_min_ = std::min(lambda_min_, l);
            lambda_max_ = std::max(lambda_max_, l);
        }
    }

    if (negated_) {
        a = -a;
    }
    const auto padded = static_cast<Eigen::Index>(std::size_t{1} << n_b_);
    if (padded > a.rows()) {
        // Identity block at mid-spectrum keeps λ_min and λ_max unchanged; b is zero there.
        Eigen::MatrixXd big = Eigen::MatrixXd::Zero(padded, padded);
        big.topLeftCorner(a.rows(), a.cols()) = a;
        const double mid = 0.5 * (lambda_min_ + lambda_max_);
        for (Eigen::Index i = a.rows(); i < padded; ++i) {
            big(i, i) = mid;
        }
        a = std::move(big);
    }

    const double t = choose_evolution_time(lambda_min_, lambda_max_, cfg_);
    c_ = cfg_.reciprocal_constant > 0.0 ? cfg_.reciprocal_constant : std::ldexp(1.0, -cfg_.n_c);
    (void)reciprocal_angles(cfg_.n_c, c_);
    evolution_ = make_evolution(a, t, cfg_.backend, cfg_.trotter_steps);
    // Grow any cached powers now so solve() stays free of lazy mutation.
    (void)evolution_->unitary(std::uint64_t{1} << (cfg_.n_c - 1));
}

std::vector<double> HHLSolver::condition_rhs(std::span<const double> b) const {
    if (b.size() != dim_) {
        throw ContractViolation("hhl: rhs length does not match matrix");
    }
    std::vector<double> r(b.begin(), b.end());
    if (negated_) {
        for (double &v : r) {
            v = -v;
        }
    }
    if (singular_) {
        Eigen::Map<Eigen::VectorXd> rv(r.data(), static_cast<Eigen::Index>(r.size()));
        rv -= null_basis_ * (null_basis_.transpose() * rv);
    }
    return r;
}

StateVector HHLSolver::pre_measurement_state(std::span<const double> b) const {
    const auto rhs = condition_rhs(b);
    const auto prepared = prepare_b(rhs, n_b_);
    StateVector state(n_b_ + cfg_.n_c + 1);
    auto amps = state.amplitudes();
    const auto src = prepared.state.amplitudes();
    std::copy(src.begin(), src.end(), amps.begin());

    const auto problem = problem_register();
    const auto clock = clock_register();
    evolution_->enter_basis(state, problem);
    qpe_core(state, *evolution_, problem, clock);
    qft(state, clock, true);
    reciprocal_rotation(state, clock, ancilla(), c_);
    qft(state, clock, false);
    inverse_qpe_core(state, *evolution_, problem, clock);
    evolution_->leave_basis(state, problem);
    return state;
}

HHLResult HHLSolver::solve(std::span<const double> b) const {
    HHLResult res;
    res.n_b = n_b_;
    res.n_c = cfg_.n_c;
    res.negated = negated_;
    res.singular = singular_;
    res.lambda_min = lambda_min_;
    res.lambda_max = lambda_max_;
    res.evolution_time = evolution_->time();
    {
        double n2 = 0.0;
        for (double v : condition_rhs(b)) {
            n2 += v * v;
        }
        res.b_norm = std::sqrt(n2);
    }

    auto state = pre_measurement_state(b);
    res.success_probability = project_and_renormalize(state, ancilla(), 1);

    const std::size_t anc_bit = std::size_t{1} << ancilla();
    const auto amps = state.amplitudes();
    std::vector<cplx> x(dim_);
    double zero_weight = 0.0;
    for (std::size_t j = 0; j < (std::size_t{1} << n_b_); ++j) {
        zero_weight += std::norm(amps[anc_bit | j]);
        if (j < dim_) {
            x[j] = amps[anc_bit | j];
        }
    }
    res.clock_zero_weight = zero_weight;

    // Remove the global phase using the largest component, then keep the real part.
    std::size_t pivot = 0;
    for (std::size_t j = 1; j < dim_; ++j) {
        if (std::abs(x[j]) > std::abs(x[pivot])) {
            pivot = j;
        }
    }
    if (!(std::abs(x[pivot]) > 0.0)) {
        throw PostSelectionError("hhl: no amplitude left in the clock |0⟩ readout");
    }
    const cplx unphase = std::conj(x[pivot]) / std::abs(x[pivot]);
    res.solution.resize(dim_);
    for (std::size_t j = 0; j < dim_; ++j) {
        res.solution[j] = (x[j] * unphase).real();
    }
    const double norm = l2_norm(res.solution);
    for (double &v : res.solution) {
        v /= norm;
    }
    return res;
}

HHLResult hhl_solve(const SparseSymMatrix &a, std::span<const double> b, const HHLConfig &cfg) {
    return HHLSolver(a, cfg).solve(b);
}

std::vector<SweepPoint> nc_sweep(const SparseSymMatrix &a, std::span<const double> b,
                                 std::span<const int> nc_values, const HHLConfig &base) {
    const auto reference = direct_solve(a, b);
    std::vector<SweepPoint> out;
    out.reserve(nc_values.size());
    for (int nc : nc_values) {
        HHLConfig cfg = base;
        cfg.n_c = nc;
        const auto res = hhl_solve(a, b, cfg);
        const auto scaled = match_sign_and_norm(res.solution, reference);
        out.push_back({nc, metric_are(scaled, reference).mean, res.success_probability});
    }
    return out;
}

} // namespace qns
