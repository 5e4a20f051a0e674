#include "scnn/oracle.hpp"

namespace scnn::oracle {

namespace {

struct Dims {
    long L, cin, F, C, half;
};

Dims check(const Tensor& input, const Tensor& weights)
{
    if (input.rank() != 3 || input.extent(0) != input.extent(1))
        throw ShapeError("naive_conv2d: input must be L x L x c");
    if (weights.rank() != 4 || weights.extent(0) != weights.extent(1) || weights.extent(0) % 2 == 0)
        throw ShapeError("naive_conv2d: kernel must be C x C x c_in x F with odd C");
    if (weights.extent(2) != input.extent(2))
        throw ShapeError("naive_conv2d: channel mismatch");
    const long C = static_cast<long>(weights.extent(0));
    return {static_cast<long>(input.extent(0)), static_cast<long>(input.extent(2)),
            static_cast<long>(weights.extent(3)), C, C / 2};
}

} // namespace

Tensor naive_conv2d(const Tensor& input, const Tensor& weights, const Tensor& bias)
{
    const Dims d = check(input, weights);
    if (bias.size() != static_cast<std::size_t>(d.F))
        throw ShapeError("naive_conv2d: bias size mismatch");
    Tensor out({input.extent(0), input.extent(1), weights.extent(3)});
    for (long s = 0; s < d.L; ++s)
        for (long t = 0; t < d.L; ++t)
            for (long f = 0; f < d.F; ++f) {
                double acc = bias(f);
                for (long i = 0; i < d.C; ++i)
                    for (long j = 0; j < d.C; ++j)
                        for (long k = 0; k < d.cin; ++k) {
                            const long a = s + i - d.half;
                            const long c = t + j - d.half;
                            const double x = (a >= 0 && a < d.L && c >= 0 && c < d.L) ? input(a, c, k) : 0.0;
                            acc += weights(i, j, k, f) * x;
                        }
                out(s, t, f) = acc;
            }
    return out;
}

NaiveConvGrads naive_conv2d_backward(const Tensor& input, const Tensor& weights, const Tensor& upstream)
{
    const Dims d = check(input, weights);
    if (upstream.shape() != Shape{input.extent(0), input.extent(1), weights.extent(3)})
        throw ShapeError("naive_conv2d_backward: upstream shape mismatch");
    NaiveConvGrads g{Tensor(weights.shape()), Tensor({weights.extent(3)}), Tensor(input.shape())};
    for (long s = 0; s < d.L; ++s)
        for (long t = 0; t < d.L; ++t)
            for (long f = 0; f < d.F; ++f) {
                const double u = upstream(s, t, f);
                g.d_bias(f) += u;
                for (long i = 0; i < d.C; ++i)
                    for (long j = 0; j < d.C; ++j) {
                        const long a = s + i - d.half;
                        const long c = t + j - d.half;
                        if (a < 0 || a >= d.L || c < 0 || c >= d.L)
                            continue;
                        for (long k = 0; k < d.cin; ++k) {
                            g.d_weights(i, j, k, f) += u * input(a, c, k);
                            g.d_input(a, c, k) += u * weights(i, j, k, f);
                        }
                    }
            }
    return g;
}

} // namespace scnn::oracle
