#pragma once

// Chebyshev-basis state tomography: project a real state onto a truncated
// (tensor-product) Chebyshev basis sampled at grid nodes, with overlaps taken
// from an emulated Hadamard test and a Gram-matrix correction.

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace qns {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// T_k(x) by the three-term recurrence. Throws DomainError for |x| > 1 + 1e-12.
[[nodiscard]] double cheby_eval(int k, double x);
/// T_k'(x) = k·U_{k−1}(x).
[[nodiscard]] double cheby_derivative(int k, double x);
/// cos((2k+1)π/(2n)), k = 0..n−1.
[[nodiscard]] std::vector<double> chebyshev_nodes(int n);

/// Physical interval mapped onto [−1, 1].
struct Interval {
    double lo;
    double hi;
};

struct ShotModel {
    std::optional<std::uint64_t> shots; ///< empty = exact overlaps
    std::uint64_t seed = 0;

    static ShotModel exact() { return {}; }
    static ShotModel sampled(std::uint64_t shots, std::uint64_t seed) { return {shots, seed}; }
    void validate() const;
};

/**
 * Normalized basis vectors φ_a over N sample points. In 2D the vectors are
 * T_{a_x}(x̃_i)·T_{a_y}(ỹ_j) at node k = i + j·N_x with a = a_x + a_y·m.
 * Coordinates are mapped affinely from [min, max] of the given nodes onto [−1, 1],
 * or from an explicit interval when one is given.
 */
class ChebyBasis {
  public:
    static ChebyBasis build_1d(std::span<const double> nodes, int m, std::optional<Interval> interval = {});
    static ChebyBasis build_2d(std::span<const double> x_nodes, std::span<const double> y_nodes, int m);

    [[nodiscard]] int m() const { return m_; }
    [[nodiscard]] int dims() const { return dims_; }
    [[nodiscard]] std::size_t size() const { return static_cast<std::size_t>(vectors_.rows()); }
    [[nodiscard]] std::size_t length() const { return static_cast<std::size_t>(vectors_.cols()); }
    /// Row a holds φ_a.
    [[nodiscard]] const RowMatrix &vectors() const { return vectors_; }
    [[nodiscard]] std::span<const double> vector(std::size_t a) const;
    [[nodiscard]] const Eigen::MatrixXd &gram() const { return gram_; }
    [[nodiscard]] double gram_condition() const { return gram_condition_; }
    [[nodiscard]] bool regularized() const { return regularized_; }
    [[nodiscard]] std::span<const double> x_scaled() const { return x_scaled_; }
    [[nodiscard]] std::span<const double> y_scaled() const { return y_scaled_; }

    /// G⁻¹v through the stored Cholesky factor.
    [[nodiscard]] Eigen::VectorXd gram_solve(const Eigen::VectorXd &v) const;

    /// Σ c_a φ_a at every sample point.
    [[nodiscard]] std::vector<double> synthesize(std::span<const double> coeffs) const;

    /// Physical-coordinate derivative of Σ c_a φ_a at sample point ix (1D).
    [[nodiscard]] double derivative_at(std::span<const double> coeffs, std::size_t ix) const;
    /// Physical-coordinate gradient of Σ c_a φ_a at node (ix, iy) (2D).
    [[nodiscard]] std::pair<double, double> gradient_at(std::span<const double> coeffs, std::size_t ix,
                                                        std::size_t iy) const;

  private:
    void finish();

    int m_ = 0;
    int dims_ = 1;
    std::vector<double> x_scaled_, y_scaled_;
    double x_jacobian_ = 1.0, y_jacobian_ = 1.0; ///< dx̃/dx, dỹ/dy
    std::vector<double> scale_;                  ///< normalization factor of each raw product vector
    RowMatrix vectors_;
    Eigen::MatrixXd gram_;
    Eigen::LLT<Eigen::MatrixXd> llt_;
    double gram_condition_ = 1.0;
    bool regularized_ = false;
};

/// Real overlap ⟨φ|ψ⟩ with binomial shot noise: k ~ B(N, (1+r)/2), estimate 2k/N − 1.
/// The random stream is derived from (seed, stream, index) so results are reproducible.
[[nodiscard]] double overlap_estimate(std::span<const double> state, std::span<const double> phi,
                                      const ShotModel &model, std::uint64_t stream = 0, std::uint64_t index = 0);

struct HadamardTestResult {
    double agree_probability; ///< Born weight of ancilla |0⟩ after the closing Hadamard, (1 + Re⟨φ|ψ⟩)/2
    double estimate;          ///< 2k/N − 1 from sampled shots (exact when shots is empty)
};

/**
 * Circuit-level Hadamard test on ≤ 6 data qubits: Householder state preparation
 * of ψ on the ancilla-|0⟩ branch and φ on the ancilla-|1⟩ branch between two
 * ancilla Hadamards. Longer vectors raise ScopeError.
 */
[[nodiscard]] HadamardTestResult gate_level_hadamard_test(std::span<const double> state, std::span<const double> phi,
                                                          const ShotModel &model, std::uint64_t stream = 0);

struct ChebyExpansion {
    std::vector<double> overlaps;     ///< v_a
    std::vector<double> coefficients; ///< G⁻¹v (or v when the Gram correction is skipped)
    std::vector<double> values;       ///< Σ c_a φ_a on the sample points
};

[[nodiscard]] ChebyExpansion reconstruct(std::span<const double> state, const ChebyBasis &basis,
                                         const ShotModel &model, std::uint64_t stream = 0,
                                         bool gram_correction = true);

} // namespace qns
