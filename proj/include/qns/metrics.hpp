#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace qns {

struct FieldError {
    std::vector<double> pointwise;
    double mean = 0.0;
    double max = 0.0;
    std::size_t argmax = 0;
};

constexpr double default_are_eps = 1e-8;

/// ||a| − |r|| / (|r| + ε) per point. Throws ContractViolation on length mismatch.
[[nodiscard]] FieldError metric_are(std::span<const double> candidate, std::span<const double> reference,
                                    double eps = default_are_eps);

/// |r − a| / max|r|. Throws DegenerateInputError when the reference is identically zero.
[[nodiscard]] FieldError metric_normalized_are(std::span<const double> candidate,
                                               std::span<const double> reference);

[[nodiscard]] double mse(std::span<const double> a, std::span<const double> b);
[[nodiscard]] double rms_difference(std::span<const double> a, std::span<const double> b);
[[nodiscard]] double cosine_similarity(std::span<const double> a, std::span<const double> b);
[[nodiscard]] double l2_norm(std::span<const double> a);

/// Flips x to correlate positively with ref and rescales it to ‖ref‖₂.
[[nodiscard]] std::vector<double> match_sign_and_norm(std::span<const double> x, std::span<const double> ref);

} // namespace qns
