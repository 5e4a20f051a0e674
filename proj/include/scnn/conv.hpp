#pragma once

#include <cstdint>

#include "scnn/tensor.hpp"

namespace scnn {

/// Full convolution kernel: weights C x C x c_in x F, bias F.
struct Conv2dKernel {
    Tensor weights;
    Tensor bias;

    std::size_t size() const { return weights.extent(0); }
    std::size_t in_channels() const { return weights.extent(2); }
    std::size_t out_channels() const { return weights.extent(3); }

    /// Throws ConfigError for even C, ShapeError for malformed extents.
    void validate() const;
};

Conv2dKernel make_conv_kernel(std::size_t C, std::size_t c_in, std::size_t F);

struct ConvGrads {
    Tensor d_weights;
    Tensor d_bias;
    Tensor d_input;
};

/// Multiply-accumulate tally. Only in-range taps are counted, so the
/// number reflects work actually done rather than padded work.
struct MacCounter {
    std::uint64_t macs = 0;
};

/// Stride-1 "same" cross-correlation with zero padding:
///
///   out[s,t,f] = bias[f] + sum_{i,j,k} W[i,j,k,f] * in[s+i-h, t+j-h, k],  h = C/2
///
/// (0-based). The kernel is not flipped. Each output cell is summed in a
/// fixed (i, j, k) order, so the result does not depend on the thread count.
Tensor conv2d_forward(const Tensor& input, const Conv2dKernel& kernel, MacCounter* counter = nullptr);

/// Gradients of a scalar loss given upstream = dLoss/dOut. With
/// want_input = false, d_input is left empty (first layer of a network).
ConvGrads conv2d_backward(const Tensor& input, const Conv2dKernel& kernel, const Tensor& upstream,
                          bool want_input = true);

Tensor relu_forward(const Tensor& x);
/// Upstream gradient gated by x > 0 (x is the pre-activation).
Tensor relu_backward(const Tensor& x, const Tensor& upstream);

Tensor sigmoid_forward(const Tensor& x);
/// Upstream gradient times y(1-y), y being the sigmoid output.
Tensor sigmoid_backward(const Tensor& y, const Tensor& upstream);

} // namespace scnn
