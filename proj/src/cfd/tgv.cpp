#include <cmath>

#include "qns/cfd.hpp"

namespace qns {

TgvState tgv_exact(double x, double y, double t, double nu) {
    const double decay = std::exp(-2.0 * nu * t);
    return {std::sin(x) * std::cos(y) * decay, -std::cos(x) * std::sin(y) * decay,
            0.25 * (std::cos(2.0 * x) + std::cos(2.0 * y)) * decay * decay};
}

FlowField tgv_field(std::shared_ptr<const Grid2D> grid, double t, double nu) {
    FlowField f;
    const auto n = grid->num_nodes();
    f.u.resize(n);
    f.v.resize(n);
    f.p.resize(n);
    for (int j = 0; j <= grid->n_eta() + 1; ++j) {
        for (int i = 0; i <= grid->n_xi() + 1; ++i) {
            const auto s = tgv_exact(grid->xi.coord[i], grid->eta.coord[j], t, nu);
            const auto k = grid->node(i, j);
            f.u[k] = s.u;
            f.v[k] = s.v;
            f.p[k] = s.p;
        }
    }
    f.grid = std::move(grid);
    f.time = t;
    return f;
}

} // namespace qns
