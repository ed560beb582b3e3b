#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "qns/bench.hpp"
#include "qns/error.hpp"

namespace qns {

std::filesystem::path default_ghia_path() {
    if (const char *env = std::getenv("QNS_DATA_DIR")) {
        return std::filesystem::path(env) / "ghia_re100.csv";
    }
    return std::filesystem::path(QNS_DATA_DIR) / "ghia_re100.csv";
}

GhiaReference load_ghia(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("ghia table: cannot open " + path.string());
    }
    GhiaReference ref;
    std::string line;
    bool header = false;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') {
            continue;
        }
        if (!header) {
            if (line.rfind("y,u,x,v", 0) != 0) {
                throw ParseError("ghia table: expected header y,u,x,v");
            }
            header = true;
            continue;
        }
        std::istringstream ss(line);
        double vals[4];
        for (int c = 0; c < 4; ++c) {
            std::string cell;
            if (!std::getline(ss, cell, ',')) {
                throw ParseError("ghia table: short row at line " + std::to_string(lineno));
            }
            try {
                std::size_t used = 0;
                vals[c] = std::stod(cell, &used);
            } catch (const std::exception &) {
                throw ParseError("ghia table: bad number at line " + std::to_string(lineno));
            }
        }
        ref.y.push_back(vals[0]);
        ref.u.push_back(vals[1]);
        ref.x.push_back(vals[2]);
        ref.v.push_back(vals[3]);
    }
    if (ref.y.size() != 17) {
        throw ParseError("ghia table: expected 17 rows");
    }
    const auto descending = [](const std::vector<double> &c) {
        return std::is_sorted(c.rbegin(), c.rend()) && std::adjacent_find(c.begin(), c.end()) == c.end();
    };
    const auto bounded = [](const std::vector<double> &c) {
        return std::all_of(c.begin(), c.end(), [](double x) { return std::abs(x) <= 1.0; });
    };
    if (!descending(ref.y) || !descending(ref.x) || !bounded(ref.u) || !bounded(ref.v)) {
        throw ParseError("ghia table: coordinates must be strictly monotone and values in [-1, 1]");
    }
    return ref;
}

double Profile::at(double s) const {
    if (coord.empty()) {
        throw ContractViolation("profile: empty");
    }
    if (s <= coord.front()) {
        return value.front();
    }
    if (s >= coord.back()) {
        return value.back();
    }
    const auto it = std::upper_bound(coord.begin(), coord.end(), s);
    const auto k = static_cast<std::size_t>(it - coord.begin());
    const double w = (s - coord[k - 1]) / (coord[k] - coord[k - 1]);
    return (1.0 - w) * value[k - 1] + w * value[k];
}

namespace {

/// Index k and weight w with c[k] ≤ s ≤ c[k+1].
std::pair<std::size_t, double> bracket(const std::vector<double> &c, double s) {
    const auto it = std::upper_bound(c.begin(), c.end(), s);
    std::size_t k = it == c.begin() ? 0 : static_cast<std::size_t>(it - c.begin()) - 1;
    k = std::min(k, c.size() - 2);
    return {k, (s - c[k]) / (c[k + 1] - c[k])};
}

} // namespace

Profile centerline_extract(const FlowField &field, CenterlineAxis axis) {
    const Grid2D &g = *field.grid;
    Profile p;
    if (axis == CenterlineAxis::vertical) {
        const auto [k, w] = bracket(g.xi.coord, 0.5 * g.xi.length());
        for (std::size_t j = 0; j < g.ny_total(); ++j) {
            const int jj = static_cast<int>(j);
            const int kk = static_cast<int>(k);
            p.coord.push_back(g.eta.coord[j]);
            p.value.push_back((1.0 - w) * field.u[g.node(kk, jj)] + w * field.u[g.node(kk + 1, jj)]);
        }
    } else {
        const auto [k, w] = bracket(g.eta.coord, 0.5 * g.eta.length());
        for (std::size_t i = 0; i < g.nx_total(); ++i) {
            const int ii = static_cast<int>(i);
            const int kk = static_cast<int>(k);
            p.coord.push_back(g.xi.coord[i]);
            p.value.push_back((1.0 - w) * field.v[g.node(ii, kk)] + w * field.v[g.node(ii, kk + 1)]);
        }
    }
    return p;
}

double ghia_u_rms(const FlowField &field, const GhiaReference &ref) {
    const auto prof = centerline_extract(field, CenterlineAxis::vertical);
    double s = 0.0;
    for (std::size_t k = 0; k < ref.y.size(); ++k) {
        const double d = prof.at(ref.y[k]) - ref.u[k];
        s += d * d;
    }
    return std::sqrt(s / static_cast<double>(ref.y.size()));
}

} // namespace qns
