#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "scnn/tensor.hpp"

namespace scnn {

/// p <- p - lr * (g + weight_decay * p) for every parameter tensor.
void sgd_step(std::span<Tensor* const> params, std::span<const Tensor> grads, double lr, double weight_decay = 0.0);

struct AdamState {
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    std::int64_t t = 0;
    std::vector<Tensor> m;
    std::vector<Tensor> v;
};

/// Bias-corrected Adam. Weight decay is added to the gradient (L2 penalty)
/// before the moment updates. Moments are allocated on the first call.
void adam_step(AdamState& state, std::span<Tensor* const> params, std::span<const Tensor> grads, double lr,
               double weight_decay = 0.0);

} // namespace scnn
