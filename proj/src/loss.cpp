#include "scnn/loss.hpp"

#include <algorithm>
#include <cmath>

namespace scnn {

namespace {

bool is_pair_map(const Tensor& t)
{
    if (t.rank() == 2)
        return t.extent(0) == t.extent(1);
    return t.rank() == 3 && t.extent(0) == t.extent(1) && t.extent(2) == 1;
}

} // namespace

LossResult weighted_bce_upper(const Tensor& pred, const Tensor& label, double pos_weight,
                              std::size_t min_sep, std::optional<std::size_t> valid_len)
{
    if (!is_pair_map(pred))
        throw ShapeError("weighted_bce_upper: pred must be L x L, got " + shape_string(pred.shape()));
    if (pred.size() != label.size() || label.extent(0) != pred.extent(0))
        throw ShapeError("weighted_bce_upper: label shape " + shape_string(label.shape()) +
                         " does not match pred " + shape_string(pred.shape()));
    if (!(pos_weight > 0.0))
        throw ConfigError("weighted_bce_upper: pos_weight must be positive");
    for (double p : pred.data())
        if (!(p > 0.0 && p < 1.0))
            throw DomainError("weighted_bce_upper: prediction outside (0,1); apply sigmoid first");

    const std::size_t L = pred.extent(0);
    const std::size_t n = std::min(L, valid_len.value_or(L));
    const std::size_t sep = std::max<std::size_t>(1, min_sep);

    LossResult r{0.0, zeros(pred.shape()), 0};
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + sep; j < n; ++j)
            ++r.entries;
    if (r.entries == 0)
        return r;

    const double inv_m = 1.0 / static_cast<double>(r.entries);
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + sep; j < n; ++j) {
            const std::size_t at = i * L + j;
            const double p = pred[at];
            const double y = label[at];
            sum += pos_weight * y * std::log(p) + (1.0 - y) * std::log(1.0 - p);
            r.d_pred[at] = -inv_m * (pos_weight * y / p - (1.0 - y) / (1.0 - p));
        }
    }
    r.loss = -sum * inv_m;
    return r;
}

} // namespace scnn
