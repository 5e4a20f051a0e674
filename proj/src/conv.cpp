#include "scnn/conv.hpp"

#include <cmath>
#include <cstddef>

namespace scnn {

void Conv2dKernel::validate() const
{
    if (weights.rank() != 4 || weights.extent(0) != weights.extent(1))
        throw ShapeError("conv kernel must be C x C x c_in x F, got " + shape_string(weights.shape()));
    if (weights.extent(0) % 2 == 0)
        throw ConfigError("conv kernel size must be odd, got " + std::to_string(weights.extent(0)));
    if (bias.rank() != 1 || bias.extent(0) != weights.extent(3))
        throw ShapeError("conv bias must have one entry per output channel");
}

Conv2dKernel make_conv_kernel(std::size_t C, std::size_t c_in, std::size_t F)
{
    Conv2dKernel k{zeros({C, C, c_in, F}), zeros({F})};
    k.validate();
    return k;
}

namespace {

struct Geometry {
    std::ptrdiff_t L, cin, F, C, half;
};

Geometry check_forward(const Tensor& input, const Conv2dKernel& kernel)
{
    kernel.validate();
    if (input.rank() != 3 || input.extent(0) != input.extent(1))
        throw ShapeError("conv input must be L x L x c, got " + shape_string(input.shape()));
    if (input.extent(2) != kernel.in_channels())
        throw ShapeError("conv input has " + std::to_string(input.extent(2)) +
                         " channels, kernel expects " + std::to_string(kernel.in_channels()));
    const auto C = static_cast<std::ptrdiff_t>(kernel.size());
    return {static_cast<std::ptrdiff_t>(input.extent(0)), static_cast<std::ptrdiff_t>(input.extent(2)),
            static_cast<std::ptrdiff_t>(kernel.out_channels()), C, C / 2};
}

} // namespace

Tensor conv2d_forward(const Tensor& input, const Conv2dKernel& kernel, MacCounter* counter)
{
    const auto g = check_forward(input, kernel);
    Tensor out({input.extent(0), input.extent(1), kernel.out_channels()});
    const double* in = input.raw();
    const double* w = kernel.weights.raw();
    const double* b = kernel.bias.raw();
    double* o = out.raw();
    std::uint64_t macs = 0;

#pragma omp parallel for schedule(static) reduction(+ : macs)
    for (std::ptrdiff_t s = 0; s < g.L; ++s) {
        for (std::ptrdiff_t t = 0; t < g.L; ++t) {
            double* acc = o + (s * g.L + t) * g.F;
            for (std::ptrdiff_t f = 0; f < g.F; ++f)
                acc[f] = b[f];
            for (std::ptrdiff_t i = 0; i < g.C; ++i) {
                const std::ptrdiff_t a = s + i - g.half;
                if (a < 0 || a >= g.L)
                    continue;
                for (std::ptrdiff_t j = 0; j < g.C; ++j) {
                    const std::ptrdiff_t c = t + j - g.half;
                    if (c < 0 || c >= g.L)
                        continue;
                    const double* x = in + (a * g.L + c) * g.cin;
                    const double* wij = w + (i * g.C + j) * g.cin * g.F;
                    for (std::ptrdiff_t k = 0; k < g.cin; ++k) {
                        const double xv = x[k];
                        const double* wk = wij + k * g.F;
                        for (std::ptrdiff_t f = 0; f < g.F; ++f)
                            acc[f] += wk[f] * xv;
                    }
                    macs += static_cast<std::uint64_t>(g.cin * g.F);
                }
            }
        }
    }
    if (counter)
        counter->macs += macs;
    return out;
}

ConvGrads conv2d_backward(const Tensor& input, const Conv2dKernel& kernel, const Tensor& upstream,
                          bool want_input)
{
    const auto g = check_forward(input, kernel);
    if (upstream.shape() != Shape{input.extent(0), input.extent(1), kernel.out_channels()})
        throw ShapeError("conv upstream must be L x L x F, got " + shape_string(upstream.shape()));

    ConvGrads grads{zeros(kernel.weights.shape()), zeros(kernel.bias.shape()), {}};
    const double* in = input.raw();
    const double* w = kernel.weights.raw();
    const double* up = upstream.raw();

    // d_bias[f] = sum_{s,t} up[s,t,f]
    double* db = grads.d_bias.raw();
    for (std::ptrdiff_t p = 0; p < g.L * g.L; ++p)
        for (std::ptrdiff_t f = 0; f < g.F; ++f)
            db[f] += up[p * g.F + f];

    // d_weights[i,j,k,f] = sum_{s,t} up[s,t,f] * in[s+i-h, t+j-h, k]; one tap (i,j) per task.
    double* dw = grads.d_weights.raw();
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t tap = 0; tap < g.C * g.C; ++tap) {
        const std::ptrdiff_t i = tap / g.C;
        const std::ptrdiff_t j = tap % g.C;
        double* dwij = dw + tap * g.cin * g.F;
        for (std::ptrdiff_t s = 0; s < g.L; ++s) {
            const std::ptrdiff_t a = s + i - g.half;
            if (a < 0 || a >= g.L)
                continue;
            for (std::ptrdiff_t t = 0; t < g.L; ++t) {
                const std::ptrdiff_t c = t + j - g.half;
                if (c < 0 || c >= g.L)
                    continue;
                const double* x = in + (a * g.L + c) * g.cin;
                const double* u = up + (s * g.L + t) * g.F;
                for (std::ptrdiff_t k = 0; k < g.cin; ++k) {
                    const double xv = x[k];
                    double* dwk = dwij + k * g.F;
                    for (std::ptrdiff_t f = 0; f < g.F; ++f)
                        dwk[f] += u[f] * xv;
                }
            }
        }
    }

    if (!want_input)
        return grads;

    // d_input[a,c,k] = sum_{i,j,f} W[i,j,k,f] * up[a-i+h, c-j+h, f]
    grads.d_input = zeros(input.shape());
    double* di = grads.d_input.raw();
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t a = 0; a < g.L; ++a) {
        for (std::ptrdiff_t c = 0; c < g.L; ++c) {
            double* dx = di + (a * g.L + c) * g.cin;
            for (std::ptrdiff_t i = 0; i < g.C; ++i) {
                const std::ptrdiff_t s = a - i + g.half;
                if (s < 0 || s >= g.L)
                    continue;
                for (std::ptrdiff_t j = 0; j < g.C; ++j) {
                    const std::ptrdiff_t t = c - j + g.half;
                    if (t < 0 || t >= g.L)
                        continue;
                    const double* u = up + (s * g.L + t) * g.F;
                    const double* wij = w + (i * g.C + j) * g.cin * g.F;
                    for (std::ptrdiff_t k = 0; k < g.cin; ++k) {
                        const double* wk = wij + k * g.F;
                        double acc = 0.0;
                        for (std::ptrdiff_t f = 0; f < g.F; ++f)
                            acc += wk[f] * u[f];
                        dx[k] += acc;
                    }
                }
            }
        }
    }
    return grads;
}

Tensor relu_forward(const Tensor& x)
{
    Tensor y = x;
    for (auto& v : y.data())
        v = v > 0.0 ? v : 0.0;
    return y;
}

Tensor relu_backward(const Tensor& x, const Tensor& upstream)
{
    require_same_shape(x, upstream, "relu_backward");
    Tensor d = upstream;
    for (std::size_t i = 0; i < d.size(); ++i)
        if (!(x[i] > 0.0))
            d[i] = 0.0;
    return d;
}

Tensor sigmoid_forward(const Tensor& x)
{
    Tensor y = x;
    for (auto& v : y.data())
        v = v >= 0.0 ? 1.0 / (1.0 + std::exp(-v)) : std::exp(v) / (1.0 + std::exp(v));
    return y;
}

Tensor sigmoid_backward(const Tensor& y, const Tensor& upstream)
{
    require_same_shape(y, upstream, "sigmoid_backward");
    Tensor d = upstream;
    for (std::size_t i = 0; i < d.size(); ++i)
        d[i] *= y[i] * (1.0 - y[i]);
    return d;
}

} // namespace scnn
