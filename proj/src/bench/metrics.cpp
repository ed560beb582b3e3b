#include <algorithm>
#include <cmath>

#include "qns/error.hpp"
#include "qns/kernels.hpp"
#include "qns/metrics.hpp"

namespace qns {

namespace {

void check_lengths(std::size_t a, std::size_t b, const char *what) {
    if (a != b) {
        throw ContractViolation(std::string(what) + ": length mismatch (" + std::to_string(a) + " vs " +
                                std::to_string(b) + ")");
    }
}

void summarize(FieldError &e) {
    if (e.pointwise.empty()) {
        return;
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < e.pointwise.size(); ++i) {
        sum += e.pointwise[i];
        if (e.pointwise[i] > e.max) {
            e.max = e.pointwise[i];
            e.argmax = i;
        }
    }
    e.mean = sum / static_cast<double>(e.pointwise.size());
}

} // namespace

FieldError metric_are(std::span<const double> candidate, std::span<const double> reference, double eps) {
    check_lengths(candidate.size(), reference.size(), "metric_are");
    FieldError e;
    e.pointwise.resize(candidate.size());
    for (std::size_t i = 0; i < candidate.size(); ++i) {
        const double r = std::abs(reference[i]);
        e.pointwise[i] = std::abs(std::abs(candidate[i]) - r) / (r + eps);
    }
    summarize(e);
    return e;
}

FieldError metric_normalized_are(std::span<const double> candidate, std::span<const double> reference) {
    check_lengths(candidate.size(), reference.size(), "metric_normalized_are");
    double peak = 0.0;
    for (double r : reference) {
        peak = std::max(peak, std::abs(r));
    }
    if (!(peak > 0.0)) {
        throw DegenerateInputError("metric_normalized_are: reference field is identically zero");
    }
    FieldError e;
    e.pointwise.resize(candidate.size());
    for (std::size_t i = 0; i < candidate.size(); ++i) {
        e.pointwise[i] = std::abs(reference[i] - candidate[i]) / peak;
    }
    summarize(e);
    return e;
}

double mse(std::span<const double> a, std::span<const double> b) {
    check_lengths(a.size(), b.size(), "mse");
    if (a.empty()) {
        return 0.0;
    }
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s / static_cast<double>(a.size());
}

double rms_difference(std::span<const double> a, std::span<const double> b) { return std::sqrt(mse(a, b)); }

double l2_norm(std::span<const double> a) { return std::sqrt(kernels::dot(a, a)); }

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
    check_lengths(a.size(), b.size(), "cosine_similarity");
    const double na = l2_norm(a);
    const double nb = l2_norm(b);
    if (!(na > 0.0) || !(nb > 0.0)) {
        throw DegenerateInputError("cosine_similarity: zero vector");
    }
    return kernels::dot(a, b) / (na * nb);
}

std::vector<double> match_sign_and_norm(std::span<const double> x, std::span<const double> ref) {
    check_lengths(x.size(), ref.size(), "match_sign_and_norm");
    const double nx = l2_norm(x);
    std::vector<double> out(x.size(), 0.0);
    if (!(nx > 0.0)) {
        return out;
    }
    const double sign = kernels::dot(x, ref) < 0.0 ? -1.0 : 1.0;
    const double s = sign * l2_norm(ref) / nx;
    for (std::size_t i = 0; i < x.size(); ++i) {
        out[i] = s * x[i];
    }
    return out;
}

} // namespace qns
