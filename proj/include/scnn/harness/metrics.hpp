#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

#include "scnn/tensor.hpp"

namespace scnn {

struct StructureMetrics {
    double ppv = 0.0;
    double sensitivity = 0.0;
    double accuracy = 0.0;
    std::uint64_t tp = 0;
    std::uint64_t fp = 0;
    std::uint64_t fn = 0;
    std::uint64_t tn = 0;

    /// Recomputes the ratios from the counts; 0/0 is taken as 0.
    void finalize();
    StructureMetrics& operator+=(const StructureMetrics& other);
    std::uint64_t evaluated() const { return tp + fp + fn + tn; }
};

inline constexpr double kDecisionThreshold = 0.5;

/// At-most-one-partner decoding: repeatedly keep the most probable
/// remaining cell above the threshold and drop its rows and columns.
/// Returns a symmetric 0/1 L x L map.
Tensor greedy_decode(const Tensor& pred, std::size_t min_sep, std::optional<std::size_t> valid_len = std::nullopt);

/// Counts over cells i < j with j - i >= max(1, min_sep), both below
/// valid_len. A cell is predicted when pred > 0.5 (or when kept by
/// greedy_decode). Ratios are finalized.
StructureMetrics evaluate_pairs(const Tensor& pred, const Tensor& label, std::size_t min_sep,
                                std::optional<std::size_t> valid_len = std::nullopt, bool greedy = false);

} // namespace scnn
