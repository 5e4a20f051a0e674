#include "scnn/symkernel.hpp"

#include <cassert>
#include <cmath>

#include "scnn/cartesian.hpp"
#include "scnn/tensor_io.hpp"

namespace scnn {

namespace {

void check_dims(std::size_t C, std::size_t ch, std::size_t F)
{
    if (C == 0 || ch == 0 || F == 0)
        throw ConfigError("symmetric kernel dimensions must be positive");
}

void check_packed(const Tensor& packed, const Tensor& bias, std::size_t C, std::size_t ch, std::size_t F)
{
    if (packed.shape() != Shape{tri_count(C), ch, F})
        throw ShapeError("packed kernel must be [" + std::to_string(tri_count(C)) + "," + std::to_string(ch) +
                         "," + std::to_string(F) + "], got " + shape_string(packed.shape()));
    if (bias.shape() != Shape{F})
        throw ShapeError("kernel bias must have F entries");
}

} // namespace

SymGenKernel::SymGenKernel(std::size_t C_, std::size_t n_, std::size_t F_) : C(C_), n(n_), F(F_)
{
    check_dims(C, n, F);
    S = zeros({tri_count(C), n, F});
    bias = zeros({F});
    assert(stored_count() * 2 == C * (C + 1) * n * F);
}

SymGenKernel::SymGenKernel(std::size_t C_, std::size_t n_, std::size_t F_, Tensor S_, Tensor bias_)
    : C(C_), n(n_), F(F_), S(std::move(S_)), bias(std::move(bias_))
{
    check_dims(C, n, F);
    check_packed(S, bias, C, n, F);
}

SymPresKernel::SymPresKernel(std::size_t C_, std::size_t m_, std::size_t F_) : C(C_), m(m_), F(F_)
{
    check_dims(C, m, F);
    R = zeros({tri_count(C), m, F});
    bias = zeros({F});
    assert(stored_count() * 2 == C * (C + 1) * m * F);
}

SymPresKernel::SymPresKernel(std::size_t C_, std::size_t m_, std::size_t F_, Tensor R_, Tensor bias_)
    : C(C_), m(m_), F(F_), R(std::move(R_)), bias(std::move(bias_))
{
    check_dims(C, m, F);
    check_packed(R, bias, C, m, F);
}

Conv2dKernel expand_gen(const SymGenKernel& k)
{
    Conv2dKernel out{Tensor({k.C, k.C, 2 * k.n, k.F}), k.bias};
    for (std::size_t i = 0; i < k.C; ++i)
        for (std::size_t j = 0; j < k.C; ++j)
            for (std::size_t c = 0; c < 2 * k.n; ++c)
                for (std::size_t f = 0; f < k.F; ++f)
                    out.weights(i, j, c, f) = k.at(i, j, c % k.n, f);
    return out;
}

Tensor fold_gen_grad(const Tensor& dW)
{
    if (dW.rank() != 4 || dW.extent(0) != dW.extent(1) || dW.extent(2) % 2 != 0)
        throw ShapeError("fold_gen_grad: expected C x C x 2n x F, got " + shape_string(dW.shape()));
    const std::size_t C = dW.extent(0);
    const std::size_t n = dW.extent(2) / 2;
    const std::size_t F = dW.extent(3);
    Tensor dS({tri_count(C), n, F});
    for (std::size_t i = 0; i < C; ++i)
        for (std::size_t j = 0; j <= i; ++j)
            for (std::size_t k = 0; k < n; ++k)
                for (std::size_t f = 0; f < F; ++f) {
                    double g = dW(i, j, k, f) + dW(i, j, k + n, f);
                    if (i != j)
                        g += dW(j, i, k, f) + dW(j, i, k + n, f);
                    dS(tri_index(i, j), k, f) = g;
                }
    return dS;
}

Conv2dKernel expand_pres(const SymPresKernel& k)
{
    Conv2dKernel out{Tensor({k.C, k.C, k.m, k.F}), k.bias};
    for (std::size_t i = 0; i < k.C; ++i)
        for (std::size_t j = 0; j < k.C; ++j)
            for (std::size_t c = 0; c < k.m; ++c)
                for (std::size_t f = 0; f < k.F; ++f)
                    out.weights(i, j, c, f) = k.at(i, j, c, f);
    return out;
}

Tensor fold_pres_grad(const Tensor& dQ)
{
    if (dQ.rank() != 4 || dQ.extent(0) != dQ.extent(1))
        throw ShapeError("fold_pres_grad: expected C x C x m x F, got " + shape_string(dQ.shape()));
    const std::size_t C = dQ.extent(0);
    const std::size_t m = dQ.extent(2);
    const std::size_t F = dQ.extent(3);
    Tensor dR({tri_count(C), m, F});
    for (std::size_t i = 0; i < C; ++i)
        for (std::size_t j = 0; j <= i; ++j)
            for (std::size_t k = 0; k < m; ++k)
                for (std::size_t f = 0; f < F; ++f)
                    dR(tri_index(i, j), k, f) = i == j ? dQ(i, i, k, f) : dQ(i, j, k, f) + dQ(j, i, k, f);
    return dR;
}

bool is_spatially_symmetric(const Tensor& w)
{
    if (w.rank() != 4 || w.extent(0) != w.extent(1))
        throw ShapeError("is_spatially_symmetric: expected rank-4 kernel");
    const std::size_t C = w.extent(0);
    for (std::size_t i = 0; i < C; ++i)
        for (std::size_t j = 0; j < i; ++j)
            for (std::size_t k = 0; k < w.extent(2); ++k)
                for (std::size_t f = 0; f < w.extent(3); ++f)
                    if (w(i, j, k, f) != w(j, i, k, f))
                        return false;
    return true;
}

bool has_tied_channel_halves(const Tensor& w)
{
    if (w.rank() != 4 || w.extent(2) % 2 != 0)
        throw ShapeError("has_tied_channel_halves: expected C x C x 2n x F kernel");
    const std::size_t n = w.extent(2) / 2;
    for (std::size_t i = 0; i < w.extent(0); ++i)
        for (std::size_t j = 0; j < w.extent(1); ++j)
            for (std::size_t k = 0; k < n; ++k)
                for (std::size_t f = 0; f < w.extent(3); ++f)
                    if (w(i, j, k, f) != w(i, j, k + n, f))
                        return false;
    return true;
}

Tensor init_glorot(Rng& rng, std::size_t fan_in, std::size_t fan_out, Shape shape)
{
    if (fan_in == 0 || fan_out == 0)
        throw ConfigError("Glorot fans must be positive");
    const double bound = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    return rng.uniform_tensor(std::move(shape), bound);
}

Tensor init_half_glorot(Rng& rng, std::size_t fan_in, std::size_t fan_out, Shape packed_shape)
{
    if (fan_in == 0 || fan_out == 0)
        throw ConfigError("Glorot fans must be positive");
    const double bound = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    return rng.uniform_tensor(std::move(packed_shape), 0.5 * bound);
}

SymGenKernel make_sym_gen(Rng& rng, std::size_t C, std::size_t n, std::size_t F)
{
    SymGenKernel k(C, n, F);
    k.S = init_half_glorot(rng, C * C * 2 * n, C * C * F, k.S.shape());
    return k;
}

SymPresKernel make_sym_pres(Rng& rng, std::size_t C, std::size_t m, std::size_t F)
{
    SymPresKernel k(C, m, F);
    k.R = init_half_glorot(rng, C * C * m, C * C * F, k.R.shape());
    return k;
}

Conv2dKernel make_standard(Rng& rng, std::size_t C, std::size_t c_in, std::size_t F)
{
    Conv2dKernel k = make_conv_kernel(C, c_in, F);
    k.weights = init_glorot(rng, C * C * c_in, C * C * F, k.weights.shape());
    return k;
}

Tensor sym_gen_layer_forward(const Tensor& x_pair, const SymGenKernel& k, SymmetryCheck check,
                             SymLayerCache* cache)
{
    if (x_pair.rank() != 3 || x_pair.extent(2) != 2 * k.n)
        throw ShapeError("sym_gen_layer_forward: input must have 2n = " + std::to_string(2 * k.n) +
                         " channels, got " + shape_string(x_pair.shape()));
    if (check == SymmetryCheck::checked && pair_swap_check(x_pair) > kSymmetryTolerance)
        throw PreconditionError("sym_gen_layer_forward: input is not a self-Cartesian product");
    Conv2dKernel w = expand_gen(k);
    Tensor out = conv2d_forward(x_pair, w);
    if (cache)
        *cache = SymLayerCache{SymKind::generating, x_pair, std::move(w)};
    return out;
}

Tensor sym_pres_layer_forward(const Tensor& z, const SymPresKernel& k, SymmetryCheck check, SymLayerCache* cache)
{
    if (z.rank() != 3 || z.extent(2) != k.m)
        throw ShapeError("sym_pres_layer_forward: input must have m = " + std::to_string(k.m) +
                         " channels, got " + shape_string(z.shape()));
    if (check == SymmetryCheck::checked && spatial_asymmetry(z) > kSymmetryTolerance)
        throw PreconditionError("sym_pres_layer_forward: input is not spatially symmetric");
    Conv2dKernel q = expand_pres(k);
    Tensor out = conv2d_forward(z, q);
    if (cache)
        *cache = SymLayerCache{SymKind::preserving, z, std::move(q)};
    return out;
}

SymLayerGrads sym_layer_backward(const SymLayerCache& cache, const Tensor& upstream)
{
    ConvGrads g = conv2d_backward(cache.input, cache.expanded, upstream);
    Tensor packed = cache.kind == SymKind::generating ? fold_gen_grad(g.d_weights) : fold_pres_grad(g.d_weights);
    return {std::move(packed), std::move(g.d_bias), std::move(g.d_input)};
}

namespace {

void save_packed(const std::filesystem::path& stem, const char* kind, const char* ch_key, std::size_t C,
                 std::size_t ch, std::size_t F, const Tensor& packed, const Tensor& bias)
{
    save_sct1(stem.string() + ".sct1", packed);
    save_sct1(stem.string() + ".bias.sct1", bias);
    save_sidecar(stem.string() + ".hdr",
                 {{"kind", kind}, {"C", std::to_string(C)}, {ch_key, std::to_string(ch)}, {"F", std::to_string(F)}});
}

std::size_t header_size(const Sidecar& hdr, const std::string& key)
{
    auto it = hdr.find(key);
    if (it == hdr.end())
        throw FormatError("kernel header missing key '" + key + "'");
    try {
        return std::stoul(it->second);
    } catch (const std::exception&) {
        throw FormatError("kernel header key '" + key + "' is not a count");
    }
}

} // namespace

void save_kernel(const std::filesystem::path& stem, const SymGenKernel& k)
{
    save_packed(stem, "sym_generating", "n", k.C, k.n, k.F, k.S, k.bias);
}

void save_kernel(const std::filesystem::path& stem, const SymPresKernel& k)
{
    save_packed(stem, "sym_preserving", "m", k.C, k.m, k.F, k.R, k.bias);
}

std::variant<SymGenKernel, SymPresKernel> load_sym_kernel(const std::filesystem::path& stem)
{
    const Sidecar hdr = load_sidecar(stem.string() + ".hdr");
    Tensor packed = load_sct1(stem.string() + ".sct1");
    Tensor bias = load_sct1(stem.string() + ".bias.sct1");
    const auto kind = hdr.count("kind") ? hdr.at("kind") : std::string{};
    const std::size_t C = header_size(hdr, "C");
    const std::size_t F = header_size(hdr, "F");
    if (kind == "sym_generating")
        return SymGenKernel(C, header_size(hdr, "n"), F, std::move(packed), std::move(bias));
    if (kind == "sym_preserving")
        return SymPresKernel(C, header_size(hdr, "m"), F, std::move(packed), std::move(bias));
    throw FormatError("unknown kernel kind '" + kind + "'");
}

} // namespace scnn
