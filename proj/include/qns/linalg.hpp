#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qns/grid.hpp"

namespace qns {

enum class BoundaryKind { dirichlet, neumann, periodic };

/// Diagonal of the stretched-grid Laplacian.
enum class DiagonalForm {
    conservative, ///< −(sum of incident couplings): exact row sums, default
    pointwise     ///< −2(h_ξ²/Δξ² + h_η²/Δη²) as in the uniform-grid formula; comparison only
};

struct Triplet {
    std::size_t row;
    std::size_t col;
    double value;
};

/**
 * Real symmetric matrix in CSR layout. Construction rejects any pair of stored
 * entries with A_ij != A_ji (bitwise), so every instance is exactly symmetric.
 */
class SparseSymMatrix {
  public:
    SparseSymMatrix() = default;

    /// Duplicate (row, col) entries are summed. Throws ContractViolation if not symmetric.
    static SparseSymMatrix from_triplets(std::size_t dim, std::vector<Triplet> triplets,
                                         bool constant_nullspace = false);
    static SparseSymMatrix from_dense(const Eigen::MatrixXd &dense, double drop_tol = 0.0);
    static SparseSymMatrix identity(std::size_t dim);
    static SparseSymMatrix diagonal(std::span<const double> diag);

    [[nodiscard]] std::size_t dim() const { return dim_; }
    [[nodiscard]] std::size_t nnz() const { return values_.size(); }
    [[nodiscard]] std::span<const std::size_t> row_ptr() const { return row_ptr_; }
    [[nodiscard]] std::span<const std::size_t> col_index() const { return cols_; }
    [[nodiscard]] std::span<const double> values() const { return values_; }

    /// The constant vector spans the nullspace (all-Neumann or periodic assembly).
    [[nodiscard]] bool has_constant_nullspace() const { return constant_nullspace_; }

    [[nodiscard]] double at(std::size_t row, std::size_t col) const;
    [[nodiscard]] double row_sum(std::size_t row) const;
    [[nodiscard]] double max_abs() const;
    [[nodiscard]] std::size_t max_row_nnz() const;
    [[nodiscard]] bool is_symmetric() const;

    void multiply(std::span<const double> x, std::span<double> y) const;
    [[nodiscard]] std::vector<double> multiply(std::span<const double> x) const;
    [[nodiscard]] Eigen::MatrixXd to_dense() const;
    [[nodiscard]] SparseSymMatrix negated() const;

  private:
    std::size_t dim_ = 0;
    std::vector<std::size_t> row_ptr_{0};
    std::vector<std::size_t> cols_;
    std::vector<double> values_;
    bool constant_nullspace_ = false;
};

/// 5-point Laplacian with symmetric metric couplings h_i·h_{i+1}/Δ² (k = (i−1) + (j−1)·N_ξ).
[[nodiscard]] SparseSymMatrix assemble_laplacian(const Grid2D &grid, BoundaryKind bc,
                                                 DiagonalForm form = DiagonalForm::conservative);

/// 3-point analogue on a single axis.
[[nodiscard]] SparseSymMatrix assemble_laplacian_1d(const Axis &axis, BoundaryKind bc);

using BoundaryFn = std::function<double(double x, double y)>;
using SourceFn = std::function<double(double x, double y)>;

/**
 * Right-hand side of the Dirichlet system: rhs_k = f(x_k, y_k) minus the
 * coupling times every adjacent boundary value, so A·u = rhs reproduces the
 * boundary-value problem on the interior unknowns.
 */
[[nodiscard]] std::vector<double> dirichlet_rhs_fold(const Grid2D &grid, const BoundaryFn &boundary,
                                                     const SourceFn &source);
[[nodiscard]] std::vector<double> dirichlet_rhs_fold_1d(const Axis &axis, double left, double right,
                                                        const std::function<double(double)> &source);

/**
 * Sparse LDLᵀ factorization held for repeated solves. Matrices with a constant
 * nullspace are solved with one unknown pinned, then shifted to zero mean, which
 * gives the minimum-norm solution.
 */
class DirectSolver {
  public:
    explicit DirectSolver(const SparseSymMatrix &a);
    ~DirectSolver();
    DirectSolver(DirectSolver &&) noexcept;
    DirectSolver &operator=(DirectSolver &&) noexcept;
    DirectSolver(const DirectSolver &) = delete;
    DirectSolver &operator=(const DirectSolver &) = delete;

    [[nodiscard]] std::vector<double> solve(std::span<const double> b) const;
    [[nodiscard]] std::size_t dim() const { return dim_; }

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
    std::size_t dim_ = 0;
    bool singular_ = false;
};

[[nodiscard]] std::vector<double> direct_solve(const SparseSymMatrix &a, std::span<const double> b);

struct EigenDecomposition {
    Eigen::VectorXd values;  ///< ascending
    Eigen::MatrixXd vectors; ///< columns are orthonormal eigenvectors
};

[[nodiscard]] EigenDecomposition sym_eigendecomposition(const SparseSymMatrix &a);
[[nodiscard]] EigenDecomposition sym_eigendecomposition(const Eigen::MatrixXd &a);

/// Pauli word over {I,X,Y,Z}; word[0] acts on the most significant qubit, word.back() on qubit 0.
struct PauliTerm {
    double coeff = 0.0;
    std::string word;
};

struct PauliTermList {
    int num_qubits = 0;
    std::vector<PauliTerm> terms;

    [[nodiscard]] Eigen::MatrixXcd reconstruct() const;
};

/// c_k = tr(P_k·A)/2ⁿ over all 4ⁿ strings, dropping |c_k| < prune.
[[nodiscard]] PauliTermList pauli_decompose(const Eigen::MatrixXcd &a, double prune = 1e-12);
[[nodiscard]] PauliTermList pauli_decompose(const Eigen::MatrixXd &a, double prune = 1e-12);

/// Dense matrix of a single Pauli word.
[[nodiscard]] Eigen::MatrixXcd pauli_matrix(const std::string &word);

} // namespace qns
