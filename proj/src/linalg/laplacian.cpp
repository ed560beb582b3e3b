#include <string>

#include "qns/error.hpp"
#include "qns/linalg.hpp"

namespace qns {

namespace {

bool is_periodic_layout(const Axis &a) { return a.layout == AxisLayout::periodic; }

void check_bc(const Axis &axis, BoundaryKind bc) {
    if (bc == BoundaryKind::periodic && !is_periodic_layout(axis)) {
        throw ConfigError("laplacian: periodic boundary requires a periodic grid layout");
    }
    if (bc != BoundaryKind::periodic && is_periodic_layout(axis)) {
        throw ConfigError("laplacian: periodic grid layout requires the periodic boundary kind");
    }
    if (axis.n < 2) {
        throw ConfigError("laplacian: stencil needs at least 2 nodes per direction");
    }
}

/// Neighbour index along one axis, or 0 when the neighbour is a boundary node.
int neighbour(const Axis &axis, int i, int step, BoundaryKind bc) {
    const int k = i + step;
    if (k >= 1 && k <= axis.n) {
        return k;
    }
    if (bc == BoundaryKind::periodic) {
        return k < 1 ? axis.n : 1;
    }
    return 0;
}

} // namespace

SparseSymMatrix assemble_laplacian(const Grid2D &grid, BoundaryKind bc, DiagonalForm form) {
    check_bc(grid.xi, bc);
    check_bc(grid.eta, bc);
    const Axis &ax = grid.xi;
    const Axis &ay = grid.eta;

    std::vector<Triplet> t;
    t.reserve(grid.num_unknowns() * 5);
    for (int j = 1; j <= ay.n; ++j) {
        for (int i = 1; i <= ax.n; ++i) {
            const auto k = grid.unknown(i, j);
            const double cw = ax.coupling(i - 1);
            const double ce = ax.coupling(i);
            const double cs = ay.coupling(j - 1);
            const double cn = ay.coupling(j);

            struct Link {
                int i, j;
                double c;
            };
            const Link links[4] = {{neighbour(ax, i, -1, bc), j, cw},
                                   {neighbour(ax, i, +1, bc), j, ce},
                                   {i, neighbour(ay, j, -1, bc), cs},
                                   {i, neighbour(ay, j, +1, bc), cn}};
            double interior_sum[2] = {0.0, 0.0};
            for (int n = 0; n < 4; ++n) {
                const auto &l = links[n];
                if (l.i == 0 || l.j == 0) {
                    continue;
                }
                t.push_back({k, grid.unknown(l.i, l.j), l.c});
                interior_sum[n / 2] += l.c;
            }

            double diag = 0.0;
            if (form == DiagonalForm::pointwise) {
                const double hx = ax.metric[i] / ax.d;
                const double hy = ay.metric[j] / ay.d;
                diag = -2.0 * (hx * hx + hy * hy);
            } else if (bc == BoundaryKind::dirichlet) {
                diag = -((cw + ce) + (cs + cn));
            } else {
                diag = -(interior_sum[0] + interior_sum[1]);
            }
            t.push_back({k, k, diag});
        }
    }
    return SparseSymMatrix::from_triplets(grid.num_unknowns(), std::move(t), bc != BoundaryKind::dirichlet);
}

SparseSymMatrix assemble_laplacian_1d(const Axis &axis, BoundaryKind bc) {
    check_bc(axis, bc);
    const auto n = static_cast<std::size_t>(axis.n);
    std::vector<Triplet> t;
    t.reserve(3 * n);
    for (int i = 1; i <= axis.n; ++i) {
        const auto k = static_cast<std::size_t>(i - 1);
        const double cw = axis.coupling(i - 1);
        const double ce = axis.coupling(i);
        const int w = neighbour(axis, i, -1, bc);
        const int e = neighbour(axis, i, +1, bc);
        double interior = 0.0;
        if (w != 0) {
            t.push_back({k, static_cast<std::size_t>(w - 1), cw});
            interior += cw;
        }
        if (e != 0) {
            t.push_back({k, static_cast<std::size_t>(e - 1), ce});
            interior += ce;
        }
        t.push_back({k, k, bc == BoundaryKind::dirichlet ? -(cw + ce) : -interior});
    }
    return SparseSymMatrix::from_triplets(n, std::move(t), bc != BoundaryKind::dirichlet);
}

std::vector<double> dirichlet_rhs_fold(const Grid2D &grid, const BoundaryFn &boundary, const SourceFn &source) {
    check_bc(grid.xi, BoundaryKind::dirichlet);
    check_bc(grid.eta, BoundaryKind::dirichlet);
    const Axis &ax = grid.xi;
    const Axis &ay = grid.eta;
    std::vector<double> rhs(grid.num_unknowns());
    for (int j = 1; j <= ay.n; ++j) {
        for (int i = 1; i <= ax.n; ++i) {
            double r = source(ax.coord[i], ay.coord[j]);
            if (i == 1) {
                r -= ax.coupling(0) * boundary(ax.coord[0], ay.coord[j]);
            }
            if (i == ax.n) {
                r -= ax.coupling(ax.n) * boundary(ax.coord[ax.n + 1], ay.coord[j]);
            }
            if (j == 1) {
                r -= ay.coupling(0) * boundary(ax.coord[i], ay.coord[0]);
            }
            if (j == ay.n) {
                r -= ay.coupling(ay.n) * boundary(ax.coord[i], ay.coord[ay.n + 1]);
            }
            rhs[grid.unknown(i, j)] = r;
        }
    }
    return rhs;
}

std::vector<double> dirichlet_rhs_fold_1d(const Axis &axis, double left, double right,
                                          const std::function<double(double)> &source) {
    check_bc(axis, BoundaryKind::dirichlet);
    std::vector<double> rhs(static_cast<std::size_t>(axis.n));
    for (int i = 1; i <= axis.n; ++i) {
        double r = source(axis.coord[i]);
        if (i == 1) {
            r -= axis.coupling(0) * left;
        }
        if (i == axis.n) {
            r -= axis.coupling(axis.n) * right;
        }
        rhs[static_cast<std::size_t>(i - 1)] = r;
    }
    return rhs;
}

} // namespace qns
