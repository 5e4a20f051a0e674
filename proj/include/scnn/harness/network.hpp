#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "scnn/conv.hpp"
#include "scnn/rng.hpp"
#include "scnn/symkernel.hpp"

namespace scnn {

enum class LayerKind { standard, sym_generating, sym_preserving };
enum class Activation { relu, sigmoid, none };

struct LayerSpec {
    LayerKind kind = LayerKind::standard;
    std::size_t C = 1;
    std::size_t F = 1;
    Activation act = Activation::none;

    friend bool operator==(const LayerSpec&, const LayerSpec&) = default;
};

std::string to_string(LayerKind kind);
std::string to_string(Activation act);
LayerKind parse_layer_kind(const std::string& s);
Activation parse_activation(const std::string& s);

/// "kind:C:F:act" entries separated by commas.
std::vector<LayerSpec> parse_layers(const std::string& s);
std::string format_layers(const std::vector<LayerSpec>& layers);

/// True when the stack uses symmetric layers.
bool is_symmetric_stack(const std::vector<LayerSpec>& layers);

/// Throws ConfigError unless: C odd, F >= 1, exactly the last layer uses
/// sigmoid and has one output channel, and either every layer is standard
/// or the first is sym_generating and the rest are sym_preserving.
void validate_layers(const std::vector<LayerSpec>& layers);

using LayerParams = std::variant<Conv2dKernel, SymGenKernel, SymPresKernel>;

struct NetworkParams {
    std::vector<LayerParams> layers;

    /// Trainable tensors in a fixed order: per layer, weights (or packed S/R) then bias.
    std::vector<Tensor*> tensors();
    std::vector<const Tensor*> tensors() const;

    /// All trainable scalars including biases.
    std::size_t trainable_count() const;
    /// Kernel scalars only (full W, or packed S/R), no biases.
    std::size_t kernel_count() const;
};

/// Glorot for standard layers, half-Glorot for symmetric layers, zero biases.
NetworkParams init_network(const std::vector<LayerSpec>& layers, std::size_t n, Rng& rng);

/// Everything the backward pass needs from a forward pass.
struct ForwardState {
    std::size_t valid_len = 0;
    std::vector<Tensor> inputs;      // input of each layer
    std::vector<Conv2dKernel> kernels; // expanded kernel of each layer
    std::vector<Tensor> pre;         // masked pre-activation of each layer
    Tensor output;                   // L x L x 1 probabilities
};

/// Cartesian lift, the layer chain, and the final sigmoid. x is L x n; when
/// valid_len < L the trailing rows are padding: padded pair cells are zeroed
/// after the lift and after every layer so they never reach real cells.
/// The returned map is clamped to [1e-15, 1 - 1e-15].
Tensor forward_network(const std::vector<LayerSpec>& layers, const NetworkParams& params, const Tensor& x,
                       std::optional<std::size_t> valid_len = std::nullopt, ForwardState* state = nullptr,
                       SymmetryCheck check = SymmetryCheck::unchecked);

/// Gradients for NetworkParams::tensors() given dLoss/dOutput.
std::vector<Tensor> backward_network(const std::vector<LayerSpec>& layers, const ForwardState& state,
                                     const Tensor& d_output);

} // namespace scnn
