#pragma once

#include <cstddef>
#include <optional>

#include "scnn/tensor.hpp"

namespace scnn {

struct LossResult {
    double loss = 0.0;
    Tensor d_pred;
    std::size_t entries = 0;
};

/// Weighted binary cross-entropy over the upper triangle j - i >= max(1, min_sep):
///
///   loss = -(1/M) sum [ w * y * log p + (1 - y) * log(1 - p) ]
///
/// pred and label are L x L (or L x L x 1). When valid_len is set, only
/// indices below it are included (batch padding). d_pred is zero outside the
/// included entries. Throws DomainError if any pred entry is not in (0, 1).
LossResult weighted_bce_upper(const Tensor& pred, const Tensor& label, double pos_weight,
                              std::size_t min_sep = 1, std::optional<std::size_t> valid_len = std::nullopt);

} // namespace scnn
