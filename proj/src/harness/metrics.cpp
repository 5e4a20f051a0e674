#include "scnn/harness/metrics.hpp"

#include <algorithm>
#include <tuple>
#include <vector>

namespace scnn {

void StructureMetrics::finalize()
{
    ppv = tp + fp ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
    sensitivity = tp + fn ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
    accuracy = (ppv + sensitivity) / 2.0;
}

StructureMetrics& StructureMetrics::operator+=(const StructureMetrics& o)
{
    tp += o.tp;
    fp += o.fp;
    fn += o.fn;
    tn += o.tn;
    finalize();
    return *this;
}

namespace {

std::size_t side(const Tensor& t)
{
    if (!((t.rank() == 2 && t.extent(0) == t.extent(1)) ||
          (t.rank() == 3 && t.extent(0) == t.extent(1) && t.extent(2) == 1)))
        throw ShapeError("expected an L x L map, got " + shape_string(t.shape()));
    return t.extent(0);
}

} // namespace

Tensor greedy_decode(const Tensor& pred, std::size_t min_sep, std::optional<std::size_t> valid_len)
{
    const std::size_t L = side(pred);
    const std::size_t n = std::min(L, valid_len.value_or(L));
    const std::size_t sep = std::max<std::size_t>(1, min_sep);

    std::vector<std::tuple<double, std::size_t, std::size_t>> cand;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + sep; j < n; ++j)
            if (pred[i * L + j] > kDecisionThreshold)
                cand.emplace_back(pred[i * L + j], i, j);
    // Highest probability first; ties broken by position for determinism.
    std::sort(cand.begin(), cand.end(), [](const auto& a, const auto& b) {
        if (std::get<0>(a) != std::get<0>(b))
            return std::get<0>(a) > std::get<0>(b);
        return std::tie(std::get<1>(a), std::get<2>(a)) < std::tie(std::get<1>(b), std::get<2>(b));
    });

    Tensor out({L, L});
    std::vector<bool> used(L, false);
    for (const auto& [p, i, j] : cand) {
        if (used[i] || used[j])
            continue;
        used[i] = used[j] = true;
        out(i, j) = out(j, i) = 1.0;
    }
    return out;
}

StructureMetrics evaluate_pairs(const Tensor& pred, const Tensor& label, std::size_t min_sep,
                                std::optional<std::size_t> valid_len, bool greedy)
{
    const std::size_t L = side(pred);
    if (side(label) != L)
        throw ShapeError("evaluate_pairs: label and prediction sizes differ");
    const std::size_t n = std::min(L, valid_len.value_or(L));
    const std::size_t sep = std::max<std::size_t>(1, min_sep);
    const Tensor decoded = greedy ? greedy_decode(pred, min_sep, valid_len) : Tensor{};

    StructureMetrics m;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + sep; j < n; ++j) {
            const bool predicted = greedy ? decoded[i * L + j] > 0.5 : pred[i * L + j] > kDecisionThreshold;
            const bool actual = label[i * L + j] > 0.5;
            if (predicted && actual)
                ++m.tp;
            else if (predicted)
                ++m.fp;
            else if (actual)
                ++m.fn;
            else
                ++m.tn;
        }
    m.finalize();
    return m;
}

} // namespace scnn
