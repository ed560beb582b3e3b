#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "qns/error.hpp"
#include "qns/qst.hpp"

namespace qns {

double cheby_eval(int k, double x) {
    if (k < 0) {
        throw ConfigError("cheby_eval: degree must be non-negative");
    }
    if (!(std::abs(x) <= 1.0 + 1e-12)) {
        throw DomainError("cheby_eval: x outside [-1, 1]");
    }
    if (k == 0) {
        return 1.0;
    }
    double prev = 1.0;
    double cur = x;
    for (int i = 1; i < k; ++i) {
        const double next = 2.0 * x * cur - prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

double cheby_derivative(int k, double x) {
    if (k < 0) {
        throw ConfigError("cheby_derivative: degree must be non-negative");
    }
    if (!(std::abs(x) <= 1.0 + 1e-12)) {
        throw DomainError("cheby_derivative: x outside [-1, 1]");
    }
    if (k == 0) {
        return 0.0;
    }
    // U_{k−1}(x)
    double prev = 1.0;
    double cur = 2.0 * x;
    if (k == 1) {
        return 1.0;
    }
    for (int i = 1; i < k - 1; ++i) {
        const double next = 2.0 * x * cur - prev;
        prev = cur;
        cur = next;
    }
    return static_cast<double>(k) * cur;
}

std::vector<double> chebyshev_nodes(int n) {
    if (n < 1) {
        throw ConfigError("chebyshev_nodes: count must be positive");
    }
    std::vector<double> x(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        x[static_cast<std::size_t>(k)] = std::cos((2.0 * k + 1.0) * std::numbers::pi / (2.0 * n));
    }
    return x;
}

namespace {

struct Rescaled {
    std::vector<double> t;
    double jacobian;
};

Rescaled rescale(std::span<const double> nodes, std::optional<Interval> interval = {}) {
    if (!interval) {
        const auto [lo, hi] = std::minmax_element(nodes.begin(), nodes.end());
        interval = Interval{*lo, *hi};
    }
    const double lo = interval->lo;
    const double span = interval->hi - lo;
    if (!(span > 0.0)) {
        throw ConfigError("chebyshev basis: sample nodes must span a non-empty interval");
    }
    Rescaled r{std::vector<double>(nodes.size()), 2.0 / span};
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const double t = 2.0 * (nodes[i] - lo) / span - 1.0;
        if (std::abs(t) > 1.0 + 1e-12) {
            throw DomainError("chebyshev basis: sample node outside the interval");
        }
        r.t[i] = std::clamp(t, -1.0, 1.0);
    }
    return r;
}

Eigen::MatrixXd table(int m, std::span<const double> t, bool derivative) {
    Eigen::MatrixXd out(m, static_cast<Eigen::Index>(t.size()));
    for (int a = 0; a < m; ++a) {
        for (std::size_t i = 0; i < t.size(); ++i) {
            out(a, static_cast<Eigen::Index>(i)) = derivative ? cheby_derivative(a, t[i]) : cheby_eval(a, t[i]);
        }
    }
    return out;
}

} // namespace

ChebyBasis ChebyBasis::build_1d(std::span<const double> nodes, int m, std::optional<Interval> interval) {
    if (m < 1) {
        throw ConfigError("chebyshev basis: m must be ≥ 1");
    }
    if (nodes.size() < static_cast<std::size_t>(m)) {
        throw ConfigError("chebyshev basis: need at least m sample points");
    }
    ChebyBasis b;
    b.m_ = m;
    b.dims_ = 1;
    if (m == 1 && nodes.size() == 1 && !interval) {
        b.x_scaled_ = {0.0};
    } else {
        auto r = rescale(nodes, interval);
        b.x_scaled_ = std::move(r.t);
        b.x_jacobian_ = r.jacobian;
    }
    const Eigen::MatrixXd tx = table(m, b.x_scaled_, false);
    b.vectors_ = tx;
    b.finish();
    return b;
}

ChebyBasis ChebyBasis::build_2d(std::span<const double> x_nodes, std::span<const double> y_nodes, int m) {
    if (m < 1) {
        throw ConfigError("chebyshev basis: m must be ≥ 1");
    }
    const std::size_t nx = x_nodes.size();
    const std::size_t ny = y_nodes.size();
    if (nx * ny < static_cast<std::size_t>(m) * static_cast<std::size_t>(m)) {
        throw ConfigError("chebyshev basis: need at least m² sample points");
    }
    ChebyBasis b;
    b.m_ = m;
    b.dims_ = 2;
    auto rx = rescale(x_nodes);
    auto ry = rescale(y_nodes);
    b.x_scaled_ = std::move(rx.t);
    b.y_scaled_ = std::move(ry.t);
    b.x_jacobian_ = rx.jacobian;
    b.y_jacobian_ = ry.jacobian;
    const Eigen::MatrixXd tx = table(m, b.x_scaled_, false);
    const Eigen::MatrixXd ty = table(m, b.y_scaled_, false);
    b.vectors_.resize(static_cast<Eigen::Index>(m) * m, static_cast<Eigen::Index>(nx * ny));
    for (int ay = 0; ay < m; ++ay) {
        for (int ax = 0; ax < m; ++ax) {
            const Eigen::Index a = ax + static_cast<Eigen::Index>(ay) * m;
            for (std::size_t j = 0; j < ny; ++j) {
                for (std::size_t i = 0; i < nx; ++i) {
                    b.vectors_(a, static_cast<Eigen::Index>(i + j * nx)) =
                        tx(ax, static_cast<Eigen::Index>(i)) * ty(ay, static_cast<Eigen::Index>(j));
                }
            }
        }
    }
    b.finish();
    return b;
}

void ChebyBasis::finish() {
    scale_.resize(static_cast<std::size_t>(vectors_.rows()));
    for (Eigen::Index a = 0; a < vectors_.rows(); ++a) {
        const double n = vectors_.row(a).norm();
        if (!(n > 0.0)) {
            throw IllConditionedError("chebyshev basis: a basis vector vanishes on the sample points");
        }
        scale_[static_cast<std::size_t>(a)] = 1.0 / n;
        vectors_.row(a) /= n;
    }
    gram_ = vectors_ * vectors_.transpose();
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram_, Eigen::EigenvaluesOnly);
    const double lo = es.eigenvalues().minCoeff();
    const double hi = es.eigenvalues().maxCoeff();
    gram_condition_ = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
    if (!(gram_condition_ <= 1e12)) {
        throw IllConditionedError("chebyshev basis: Gram matrix condition number exceeds 1e12");
    }
    llt_.compute(gram_);
    if (llt_.info() != Eigen::Success) {
        const double eps = 1e-12 * gram_.trace() / static_cast<double>(gram_.rows());
        llt_.compute(gram_ + eps * Eigen::MatrixXd::Identity(gram_.rows(), gram_.cols()));
        regularized_ = true;
        if (llt_.info() != Eigen::Success) {
            throw IllConditionedError("chebyshev basis: Gram factorization failed after regularization");
        }
    }
}

std::span<const double> ChebyBasis::vector(std::size_t a) const {
    if (a >= size()) {
        throw ContractViolation("chebyshev basis: vector index out of range");
    }
    return {vectors_.row(static_cast<Eigen::Index>(a)).data(), length()};
}

Eigen::VectorXd ChebyBasis::gram_solve(const Eigen::VectorXd &v) const { return llt_.solve(v); }

std::vector<double> ChebyBasis::synthesize(std::span<const double> coeffs) const {
    if (coeffs.size() != size()) {
        throw ContractViolation("chebyshev basis: coefficient count does not match basis");
    }
    const Eigen::Map<const Eigen::VectorXd> c(coeffs.data(), static_cast<Eigen::Index>(coeffs.size()));
    const Eigen::VectorXd out = vectors_.transpose() * c;
    return {out.data(), out.data() + out.size()};
}

double ChebyBasis::derivative_at(std::span<const double> coeffs, std::size_t ix) const {
    if (dims_ != 1 || coeffs.size() != size() || ix >= x_scaled_.size()) {
        throw ContractViolation("chebyshev basis: derivative_at needs a 1D basis and matching coefficients");
    }
    double s = 0.0;
    for (int a = 0; a < m_; ++a) {
        s += coeffs[static_cast<std::size_t>(a)] * scale_[static_cast<std::size_t>(a)] *
             cheby_derivative(a, x_scaled_[ix]);
    }
    return s * x_jacobian_;
}

std::pair<double, double> ChebyBasis::gradient_at(std::span<const double> coeffs, std::size_t ix,
                                                  std::size_t iy) const {
    if (dims_ != 2 || coeffs.size() != size() || ix >= x_scaled_.size() || iy >= y_scaled_.size()) {
        throw ContractViolation("chebyshev basis: gradient_at needs a 2D basis and matching coefficients");
    }
    double gx = 0.0;
    double gy = 0.0;
    for (int ay = 0; ay < m_; ++ay) {
        const double ty = cheby_eval(ay, y_scaled_[iy]);
        const double dty = cheby_derivative(ay, y_scaled_[iy]);
        for (int ax = 0; ax < m_; ++ax) {
            const auto a = static_cast<std::size_t>(ax + ay * m_);
            const double w = coeffs[a] * scale_[a];
            gx += w * cheby_derivative(ax, x_scaled_[ix]) * ty;
            gy += w * cheby_eval(ax, x_scaled_[ix]) * dty;
        }
    }
    return {gx * x_jacobian_, gy * y_jacobian_};
}

} // namespace qns
