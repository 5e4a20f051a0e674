#include "scnn/harness/network.hpp"

#include <algorithm>
#include <sstream>

#include "scnn/cartesian.hpp"

namespace scnn {

std::string to_string(LayerKind kind)
{
    switch (kind) {
    case LayerKind::standard: return "standard";
    case LayerKind::sym_generating: return "sym_generating";
    case LayerKind::sym_preserving: return "sym_preserving";
    }
    return "?";
}

std::string to_string(Activation act)
{
    switch (act) {
    case Activation::relu: return "relu";
    case Activation::sigmoid: return "sigmoid";
    case Activation::none: return "none";
    }
    return "?";
}

LayerKind parse_layer_kind(const std::string& s)
{
    if (s == "standard" || s == "std")
        return LayerKind::standard;
    if (s == "sym_generating" || s == "gen")
        return LayerKind::sym_generating;
    if (s == "sym_preserving" || s == "pres")
        return LayerKind::sym_preserving;
    throw ConfigError("unknown layer kind '" + s + "'");
}

Activation parse_activation(const std::string& s)
{
    if (s == "relu")
        return Activation::relu;
    if (s == "sigmoid")
        return Activation::sigmoid;
    if (s == "none")
        return Activation::none;
    throw ConfigError("unknown activation '" + s + "'");
}

std::vector<LayerSpec> parse_layers(const std::string& s)
{
    std::vector<LayerSpec> layers;
    std::istringstream all(s);
    std::string item;
    while (std::getline(all, item, ',')) {
        std::vector<std::string> parts;
        std::istringstream one(item);
        std::string p;
        while (std::getline(one, p, ':'))
            parts.push_back(p);
        if (parts.size() != 4)
            throw ConfigError("layer '" + item + "' must be kind:C:F:act");
        LayerSpec spec;
        spec.kind = parse_layer_kind(parts[0]);
        try {
            spec.C = std::stoul(parts[1]);
            spec.F = std::stoul(parts[2]);
        } catch (const std::exception&) {
            throw ConfigError("layer '" + item + "': C and F must be counts");
        }
        spec.act = parse_activation(parts[3]);
        layers.push_back(spec);
    }
    if (layers.empty())
        throw ConfigError("layer list is empty");
    return layers;
}

std::string format_layers(const std::vector<LayerSpec>& layers)
{
    std::string out;
    for (const auto& l : layers) {
        if (!out.empty())
            out += ',';
        out += to_string(l.kind) + ':' + std::to_string(l.C) + ':' + std::to_string(l.F) + ':' + to_string(l.act);
    }
    return out;
}

bool is_symmetric_stack(const std::vector<LayerSpec>& layers)
{
    return std::any_of(layers.begin(), layers.end(), [](const LayerSpec& l) { return l.kind != LayerKind::standard; });
}

void validate_layers(const std::vector<LayerSpec>& layers)
{
    if (layers.empty())
        throw ConfigError("network needs at least one layer");
    for (std::size_t i = 0; i < layers.size(); ++i) {
        const auto& l = layers[i];
        const bool last = i + 1 == layers.size();
        if (l.C == 0 || l.C % 2 == 0)
            throw ConfigError("layer " + std::to_string(i) + ": kernel size must be odd");
        if (l.F == 0)
            throw ConfigError("layer " + std::to_string(i) + ": needs at least one output channel");
        if (last != (l.act == Activation::sigmoid))
            throw ConfigError("exactly the final layer must use sigmoid");
    }
    if (layers.back().F != 1)
        throw ConfigError("final layer must have a single output channel");
    if (is_symmetric_stack(layers)) {
        if (layers.front().kind != LayerKind::sym_generating)
            throw ConfigError("symmetric network must start with a sym_generating layer");
        for (std::size_t i = 1; i < layers.size(); ++i)
            if (layers[i].kind != LayerKind::sym_preserving)
                throw ConfigError("layer " + std::to_string(i) + ": only sym_preserving may follow the generating layer");
    }
}

std::vector<Tensor*> NetworkParams::tensors()
{
    std::vector<Tensor*> out;
    for (auto& layer : layers)
        std::visit(
            [&](auto& k) {
                using K = std::decay_t<decltype(k)>;
                if constexpr (std::is_same_v<K, Conv2dKernel>)
                    out.push_back(&k.weights);
                else if constexpr (std::is_same_v<K, SymGenKernel>)
                    out.push_back(&k.S);
                else
                    out.push_back(&k.R);
                out.push_back(&k.bias);
            },
            layer);
    return out;
}

std::vector<const Tensor*> NetworkParams::tensors() const
{
    auto mut = const_cast<NetworkParams*>(this)->tensors();
    return {mut.begin(), mut.end()};
}

std::size_t NetworkParams::trainable_count() const
{
    std::size_t n = 0;
    for (const Tensor* t : tensors())
        n += t->size();
    return n;
}

std::size_t NetworkParams::kernel_count() const
{
    std::size_t n = 0;
    const auto ts = tensors();
    for (std::size_t i = 0; i < ts.size(); i += 2)
        n += ts[i]->size();
    return n;
}

NetworkParams init_network(const std::vector<LayerSpec>& layers, std::size_t n, Rng& rng)
{
    validate_layers(layers);
    if (n == 0)
        throw ConfigError("feature width n must be positive");
    NetworkParams params;
    std::size_t channels = 2 * n;
    for (const auto& l : layers) {
        switch (l.kind) {
        case LayerKind::standard:
            params.layers.emplace_back(make_standard(rng, l.C, channels, l.F));
            break;
        case LayerKind::sym_generating:
            params.layers.emplace_back(make_sym_gen(rng, l.C, channels / 2, l.F));
            break;
        case LayerKind::sym_preserving:
            params.layers.emplace_back(make_sym_pres(rng, l.C, channels, l.F));
            break;
        }
        channels = l.F;
    }
    return params;
}

namespace {

constexpr double kProbClamp = 1e-15;

// Zero every pair cell with a padded row or column.
void mask_padding(Tensor& t, std::size_t valid)
{
    const std::size_t L = t.extent(0);
    if (valid >= L)
        return;
    const std::size_t c = t.extent(2);
    for (std::size_t i = 0; i < L; ++i)
        for (std::size_t j = 0; j < L; ++j)
            if (i >= valid || j >= valid)
                std::fill_n(t.raw() + (i * L + j) * c, c, 0.0);
}

Conv2dKernel expanded_kernel(const LayerParams& layer)
{
    return std::visit(
        [](const auto& k) -> Conv2dKernel {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, Conv2dKernel>)
                return k;
            else if constexpr (std::is_same_v<K, SymGenKernel>)
                return expand_gen(k);
            else
                return expand_pres(k);
        },
        layer);
}

LayerKind kind_of(const LayerParams& layer)
{
    if (std::holds_alternative<SymGenKernel>(layer))
        return LayerKind::sym_generating;
    if (std::holds_alternative<SymPresKernel>(layer))
        return LayerKind::sym_preserving;
    return LayerKind::standard;
}

} // namespace

Tensor forward_network(const std::vector<LayerSpec>& layers, const NetworkParams& params, const Tensor& x,
                       std::optional<std::size_t> valid_len, ForwardState* state, SymmetryCheck check)
{
    if (layers.size() != params.layers.size())
        throw ConfigError("network has " + std::to_string(params.layers.size()) + " parameter layers but " +
                          std::to_string(layers.size()) + " specs");
    if (x.rank() != 2)
        throw ShapeError("forward_network: expected L x n features");
    const std::size_t L = x.extent(0);
    const std::size_t valid = std::min(L, valid_len.value_or(L));

    Tensor h = self_cartesian(x);
    mask_padding(h, valid);
    if (state) {
        *state = ForwardState{};
        state->valid_len = valid;
    }

    for (std::size_t li = 0; li < layers.size(); ++li) {
        const auto& spec = layers[li];
        if (kind_of(params.layers[li]) != spec.kind)
            throw ConfigError("layer " + std::to_string(li) + ": parameters do not match spec kind");
        Conv2dKernel k = expanded_kernel(params.layers[li]);
        if (k.size() != spec.C || k.out_channels() != spec.F)
            throw ConfigError("layer " + std::to_string(li) + ": parameters do not match spec size");
        if (k.in_channels() != h.extent(2))
            throw ConfigError("layer " + std::to_string(li) + ": expects " + std::to_string(k.in_channels()) +
                              " input channels, chain provides " + std::to_string(h.extent(2)));
        if (check == SymmetryCheck::checked) {
            if (spec.kind == LayerKind::sym_generating && pair_swap_check(h) > kSymmetryTolerance)
                throw PreconditionError("generating layer input is not a self-Cartesian product");
            if (spec.kind == LayerKind::sym_preserving && spatial_asymmetry(h) > kSymmetryTolerance)
                throw PreconditionError("preserving layer input is not symmetric");
        }

        Tensor z = conv2d_forward(h, k);
        mask_padding(z, valid);
        Tensor a;
        switch (spec.act) {
        case Activation::relu: a = relu_forward(z); break;
        case Activation::sigmoid:
            a = sigmoid_forward(z);
            for (auto& v : a.data())
                v = std::clamp(v, kProbClamp, 1.0 - kProbClamp);
            break;
        case Activation::none: a = z; break;
        }
        if (state) {
            state->inputs.push_back(std::move(h));
            state->kernels.push_back(std::move(k));
            state->pre.push_back(std::move(z));
        }
        h = std::move(a);
    }
    if (state)
        state->output = h;
    return h;
}

std::vector<Tensor> backward_network(const std::vector<LayerSpec>& layers, const ForwardState& state,
                                     const Tensor& d_output)
{
    if (state.inputs.size() != layers.size())
        throw ConfigError("backward_network: forward state does not match layer list");
    std::vector<Tensor> grads(2 * layers.size());
    Tensor up = d_output;
    if (up.rank() == 2)
        up = up.reshaped({up.extent(0), up.extent(1), 1});

    for (std::size_t li = layers.size(); li-- > 0;) {
        const auto& spec = layers[li];
        Tensor dz;
        switch (spec.act) {
        case Activation::relu: dz = relu_backward(state.pre[li], up); break;
        case Activation::sigmoid: dz = sigmoid_backward(state.output, up); break;
        case Activation::none: dz = up; break;
        }
        mask_padding(dz, state.valid_len);
        ConvGrads g = conv2d_backward(state.inputs[li], state.kernels[li], dz, li > 0);
        switch (spec.kind) {
        case LayerKind::standard: grads[2 * li] = std::move(g.d_weights); break;
        case LayerKind::sym_generating: grads[2 * li] = fold_gen_grad(g.d_weights); break;
        case LayerKind::sym_preserving: grads[2 * li] = fold_pres_grad(g.d_weights); break;
        }
        grads[2 * li + 1] = std::move(g.d_bias);
        up = std::move(g.d_input);
    }
    return grads;
}

} // namespace scnn
