#include <algorithm>
#include <cmath>
#include <string>

#include "qns/error.hpp"
#include "qns/linalg.hpp"

namespace qns {

SparseSymMatrix SparseSymMatrix::from_triplets(std::size_t dim, std::vector<Triplet> triplets,
                                               bool constant_nullspace) {
    for (const auto &t : triplets) {
        if (t.row >= dim || t.col >= dim) {
            throw ContractViolation("sparse: triplet index out of range");
        }
    }
    std::sort(triplets.begin(), triplets.end(), [](const Triplet &a, const Triplet &b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });

    SparseSymMatrix m;
    m.dim_ = dim;
    m.constant_nullspace_ = constant_nullspace;
    m.row_ptr_.assign(dim + 1, 0);
    for (std::size_t k = 0; k < triplets.size();) {
        const auto row = triplets[k].row;
        const auto col = triplets[k].col;
        double sum = 0.0;
        while (k < triplets.size() && triplets[k].row == row && triplets[k].col == col) {
            sum += triplets[k].value;
            ++k;
        }
        m.cols_.push_back(col);
        m.values_.push_back(sum);
        ++m.row_ptr_[row + 1];
    }
    for (std::size_t r = 0; r < dim; ++r) {
        m.row_ptr_[r + 1] += m.row_ptr_[r];
    }
    if (!m.is_symmetric()) {
        throw ContractViolation("sparse: matrix is not exactly symmetric");
    }
    return m;
}

SparseSymMatrix SparseSymMatrix::from_dense(const Eigen::MatrixXd &dense, double drop_tol) {
    if (dense.rows() != dense.cols()) {
        throw ContractViolation("sparse: dense input must be square");
    }
    std::vector<Triplet> t;
    for (Eigen::Index r = 0; r < dense.rows(); ++r) {
        for (Eigen::Index c = 0; c < dense.cols(); ++c) {
            if (std::abs(dense(r, c)) > drop_tol) {
                t.push_back({static_cast<std::size_t>(r), static_cast<std::size_t>(c), dense(r, c)});
            }
        }
    }
    return from_triplets(static_cast<std::size_t>(dense.rows()), std::move(t));
}

SparseSymMatrix SparseSymMatrix::identity(std::size_t dim) {
    std::vector<double> ones(dim, 1.0);
    return diagonal(ones);
}

SparseSymMatrix SparseSymMatrix::diagonal(std::span<const double> diag) {
    std::vector<Triplet> t;
    t.reserve(diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) {
        t.push_back({i, i, diag[i]});
    }
    return from_triplets(diag.size(), std::move(t));
}

double SparseSymMatrix::at(std::size_t row, std::size_t col) const {
    const auto first = cols_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[row]);
    const auto last = cols_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[row + 1]);
    const auto it = std::lower_bound(first, last, col);
    if (it == last || *it != col) {
        return 0.0;
    }
    return values_[static_cast<std::size_t>(it - cols_.begin())];
}

double SparseSymMatrix::row_sum(std::size_t row) const {
    double s = 0.0;
    for (auto k = row_ptr_[row]; k < row_ptr_[row + 1]; ++k) {
        s += values_[k];
    }
    return s;
}

double SparseSymMatrix::max_abs() const {
    double m = 0.0;
    for (double v : values_) {
        m = std::max(m, std::abs(v));
    }
    return m;
}

std::size_t SparseSymMatrix::max_row_nnz() const {
    std::size_t m = 0;
    for (std::size_t r = 0; r < dim_; ++r) {
        m = std::max(m, row_ptr_[r + 1] - row_ptr_[r]);
    }
    return m;
}

bool SparseSymMatrix::is_symmetric() const {
    for (std::size_t r = 0; r < dim_; ++r) {
        for (auto k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
            // bitwise equality, not a tolerance
            if (at(cols_[k], r) != values_[k]) {
                return false;
            }
        }
    }
    return true;
}

void SparseSymMatrix::multiply(std::span<const double> x, std::span<double> y) const {
    if (x.size() != dim_ || y.size() != dim_) {
        throw ContractViolation("sparse: matvec dimension mismatch");
    }
    for (std::size_t r = 0; r < dim_; ++r) {
        double s = 0.0;
        for (auto k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
            s += values_[k] * x[cols_[k]];
        }
        y[r] = s;
    }
}

std::vector<double> SparseSymMatrix::multiply(std::span<const double> x) const {
    std::vector<double> y(dim_);
    multiply(x, y);
    return y;
}

Eigen::MatrixXd SparseSymMatrix::to_dense() const {
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim_), static_cast<Eigen::Index>(dim_));
    for (std::size_t r = 0; r < dim_; ++r) {
        for (auto k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
            d(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(cols_[k])) = values_[k];
        }
    }
    return d;
}

SparseSymMatrix SparseSymMatrix::negated() const {
    SparseSymMatrix m = *this;
    for (double &v : m.values_) {
        v = -v;
    }
    return m;
}

} // namespace qns
