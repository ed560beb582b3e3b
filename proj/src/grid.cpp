#include "qns/grid.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "qns/error.hpp"

namespace qns {

void StretchConfig::validate() const {
    if (!(length > 0.0) || !std::isfinite(length)) {
        throw ConfigError("stretch: domain length must be positive, got " + std::to_string(length));
    }
    if (mode == StretchMode::hyperbolic) {
        // atan(tan(1/β)) = 1/β only while 1/β < π/2; below that the map folds over.
        if (!(beta > 2.0 / std::numbers::pi) || !std::isfinite(beta)) {
            throw ConfigError("stretch: hyperbolic beta must exceed 2/pi, got " + std::to_string(beta));
        }
    }
}

namespace {

void check_xi(double xi) {
    if (!(xi >= 0.0 && xi <= 1.0)) {
        throw DomainError("stretch: computational coordinate outside [0,1]: " + std::to_string(xi));
    }
}

} // namespace

double stretch_map(double xi, const StretchConfig &cfg) {
    cfg.validate();
    check_xi(xi);
    if (cfg.mode == StretchMode::uniform) {
        return xi * cfg.length;
    }
    const double s = (2.0 * xi - 1.0) * std::tan(1.0 / cfg.beta);
    return 0.5 * cfg.length * (1.0 + cfg.beta * std::atan(s));
}

double metric_coeff(double xi, const StretchConfig &cfg) {
    cfg.validate();
    check_xi(xi);
    if (cfg.mode == StretchMode::uniform) {
        return 1.0 / cfg.length;
    }
    const double tb = std::tan(1.0 / cfg.beta);
    const double s = (2.0 * xi - 1.0) * tb;
    return (1.0 + s * s) / (cfg.length * cfg.beta * tb);
}

Axis build_axis(int n, const StretchConfig &cfg) {
    cfg.validate();
    if (n < 2) {
        throw ConfigError("grid: need at least 2 interior nodes per direction, got " + std::to_string(n));
    }
    Axis axis;
    axis.n = n;
    axis.d = 1.0 / (n + 1);
    axis.layout = AxisLayout::walled;
    axis.stretch = cfg;
    axis.coord.resize(axis.total());
    axis.metric.resize(axis.total());
    for (int i = 0; i <= n + 1; ++i) {
        // pin the end points so round-off never pushes ξ outside [0,1]
        const double xi = (i == n + 1) ? 1.0 : i * axis.d;
        axis.coord[i] = stretch_map(xi, cfg);
        axis.metric[i] = metric_coeff(xi, cfg);
    }
    return axis;
}

Axis build_periodic_axis(int n, double length) {
    const auto cfg = StretchConfig::uniform(length);
    cfg.validate();
    if (n < 2) {
        throw ConfigError("grid: need at least 2 nodes per period, got " + std::to_string(n));
    }
    Axis axis;
    axis.n = n;
    axis.d = 1.0 / n;
    axis.layout = AxisLayout::periodic;
    axis.stretch = cfg;
    axis.coord.resize(axis.total());
    axis.metric.assign(axis.total(), 1.0 / length);
    for (int i = 0; i <= n + 1; ++i) {
        axis.coord[i] = (i - 1) * length / n;
    }
    return axis;
}

Grid2D build_grid(int n_xi, int n_eta, const StretchConfig &cfg) {
    return Grid2D{build_axis(n_xi, cfg), build_axis(n_eta, cfg)};
}

Grid2D build_periodic_grid(int n_xi, int n_eta, double length) {
    return Grid2D{build_periodic_axis(n_xi, length), build_periodic_axis(n_eta, length)};
}

} // namespace qns
