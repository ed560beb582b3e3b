#include <cmath>
#include <numeric>

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include "qns/error.hpp"
#include "qns/linalg.hpp"

namespace qns {

struct DirectSolver::Impl {
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>, Eigen::Lower> ldlt;
};

namespace {

Eigen::SparseMatrix<double> to_eigen(const SparseSymMatrix &a, std::size_t keep) {
    std::vector<Eigen::Triplet<double>> t;
    t.reserve(a.nnz());
    const auto rp = a.row_ptr();
    const auto ci = a.col_index();
    const auto v = a.values();
    for (std::size_t r = 0; r < keep; ++r) {
        for (auto k = rp[r]; k < rp[r + 1]; ++k) {
            if (ci[k] < keep) {
                t.emplace_back(static_cast<int>(r), static_cast<int>(ci[k]), v[k]);
            }
        }
    }
    Eigen::SparseMatrix<double> m(static_cast<Eigen::Index>(keep), static_cast<Eigen::Index>(keep));
    m.setFromTriplets(t.begin(), t.end());
    return m;
}

} // namespace

DirectSolver::DirectSolver(const SparseSymMatrix &a)
    : impl_(std::make_unique<Impl>()), dim_(a.dim()), singular_(a.has_constant_nullspace()) {
    if (dim_ == 0) {
        throw ConfigError("direct solve: empty matrix");
    }
    // Pinning the last unknown removes the constant nullspace.
    const std::size_t keep = singular_ ? dim_ - 1 : dim_;
    if (keep == 0) {
        return;
    }
    impl_->ldlt.compute(to_eigen(a, keep));
    if (impl_->ldlt.info() != Eigen::Success) {
        throw ConsistencyError("direct solve: factorization failed (matrix singular)");
    }
    const auto d = impl_->ldlt.vectorD();
    for (Eigen::Index i = 0; i < d.size(); ++i) {
        if (!(std::abs(d[i]) > 0.0) || !std::isfinite(d[i])) {
            throw ConsistencyError("direct solve: matrix is singular");
        }
    }
}

DirectSolver::~DirectSolver() = default;
DirectSolver::DirectSolver(DirectSolver &&) noexcept = default;
DirectSolver &DirectSolver::operator=(DirectSolver &&) noexcept = default;

std::vector<double> DirectSolver::solve(std::span<const double> b) const {
    if (b.size() != dim_) {
        throw ContractViolation("direct solve: rhs length does not match matrix");
    }
    std::vector<double> x(dim_, 0.0);
    if (singular_) {
        double sum = 0.0;
        double abs_sum = 0.0;
        for (double v : b) {
            sum += v;
            abs_sum += std::abs(v);
        }
        if (std::abs(sum) > 1e-9 * abs_sum) {
            throw ConsistencyError("direct solve: rhs not orthogonal to the constant nullspace");
        }
        if (dim_ == 1) {
            return x;
        }
    }
    const auto keep = static_cast<Eigen::Index>(singular_ ? dim_ - 1 : dim_);
    Eigen::Map<const Eigen::VectorXd> rhs(b.data(), keep);
    Eigen::VectorXd sol = impl_->ldlt.solve(rhs);
    for (Eigen::Index i = 0; i < keep; ++i) {
        x[static_cast<std::size_t>(i)] = sol[i];
    }
    if (singular_) {
        const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(dim_);
        for (double &v : x) {
            v -= mean;
        }
    }
    return x;
}

std::vector<double> direct_solve(const SparseSymMatrix &a, std::span<const double> b) {
    return DirectSolver(a).solve(b);
}

EigenDecomposition sym_eigendecomposition(const Eigen::MatrixXd &a) {
    if (a.rows() != a.cols()) {
        throw ContractViolation("eigendecomposition: matrix must be square");
    }
    const double scale = a.cwiseAbs().maxCoeff();
    if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-12 * (scale > 0.0 ? scale : 1.0)) {
        throw ContractViolation("eigendecomposition: matrix is not symmetric");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
    if (es.info() != Eigen::Success) {
        throw ConsistencyError("eigendecomposition: solver did not converge");
    }
    return {es.eigenvalues(), es.eigenvectors()};
}

EigenDecomposition sym_eigendecomposition(const SparseSymMatrix &a) {
    return sym_eigendecomposition(a.to_dense());
}

} // namespace qns
