#pragma once

#include <cstddef>
#include <filesystem>
#include <variant>

#include "scnn/conv.hpp"
#include "scnn/rng.hpp"
#include "scnn/tensor.hpp"

namespace scnn {

/// Number of lower-triangle positions (i >= j) of a C x C grid.
constexpr std::size_t tri_count(std::size_t C) { return C * (C + 1) / 2; }

/// Frozen triangle linearization for 0-based i >= j: i(i+1)/2 + j.
/// (Equivalently i(i-1)/2 + j with 1-based indices.)
constexpr std::size_t tri_index(std::size_t i, std::size_t j)
{
    return i >= j ? i * (i + 1) / 2 + j : j * (j + 1) / 2 + i;
}

/// Symmetry-generating kernel in packed form.
///
/// S has shape [C(C+1)/2, n, F]: one entry per lower-triangle tap, per
/// channel of a single half of the 2n-channel Cartesian input, per output
/// channel. The expanded C x C x 2n x F kernel repeats every entry at (i,j)
/// and (j,i) and in both channel halves.
struct SymGenKernel {
    std::size_t C = 1;
    std::size_t n = 1;
    std::size_t F = 1;
    Tensor S;
    Tensor bias;

    SymGenKernel(std::size_t C, std::size_t n, std::size_t F);
    SymGenKernel(std::size_t C, std::size_t n, std::size_t F, Tensor S, Tensor bias);

    /// Always C(C+1)nF/2.
    std::size_t stored_count() const { return S.size(); }
    double& at(std::size_t i, std::size_t j, std::size_t k, std::size_t f) { return S(tri_index(i, j), k, f); }
    double at(std::size_t i, std::size_t j, std::size_t k, std::size_t f) const { return S(tri_index(i, j), k, f); }
};

/// Symmetry-preserving kernel in packed form: R has shape [C(C+1)/2, m, F].
struct SymPresKernel {
    std::size_t C = 1;
    std::size_t m = 1;
    std::size_t F = 1;
    Tensor R;
    Tensor bias;

    SymPresKernel(std::size_t C, std::size_t m, std::size_t F);
    SymPresKernel(std::size_t C, std::size_t m, std::size_t F, Tensor R, Tensor bias);

    /// Always C(C+1)mF/2.
    std::size_t stored_count() const { return R.size(); }
    double& at(std::size_t i, std::size_t j, std::size_t k, std::size_t f) { return R(tri_index(i, j), k, f); }
    double at(std::size_t i, std::size_t j, std::size_t k, std::size_t f) const { return R(tri_index(i, j), k, f); }
};

/// W[i,j,k,f] = S[max(i,j), min(i,j), k mod n, f]; shape C x C x 2n x F.
Conv2dKernel expand_gen(const SymGenKernel& k);
/// dS for i>j: dW[i,j,k]+dW[j,i,k]+dW[i,j,k+n]+dW[j,i,k+n]; for i=j: dW[i,i,k]+dW[i,i,k+n].
Tensor fold_gen_grad(const Tensor& dW);

/// Q[i,j,k,f] = R[max(i,j), min(i,j), k, f]; shape C x C x m x F.
Conv2dKernel expand_pres(const SymPresKernel& k);
/// dR for i>j: dQ[i,j]+dQ[j,i]; for i=j: dQ[i,i].
Tensor fold_pres_grad(const Tensor& dQ);

/// W[i,j,:,:] == W[j,i,:,:] exactly.
bool is_spatially_symmetric(const Tensor& kernel);
/// W[i,j,k,:] == W[i,j,k+n,:] exactly, n = c_in / 2.
bool has_tied_channel_halves(const Tensor& kernel);

/// Uniform on (-b/2, b/2), b = sqrt(6 / (fan_in + fan_out)). Each packed
/// entry feeds two kernel positions, hence half the Glorot bound.
Tensor init_half_glorot(Rng& rng, std::size_t fan_in, std::size_t fan_out, Shape packed_shape);
/// Standard Glorot uniform bound b = sqrt(6 / (fan_in + fan_out)).
Tensor init_glorot(Rng& rng, std::size_t fan_in, std::size_t fan_out, Shape shape);

/// Half-Glorot packed weights with fans of the expanded kernel, zero bias.
SymGenKernel make_sym_gen(Rng& rng, std::size_t C, std::size_t n, std::size_t F);
SymPresKernel make_sym_pres(Rng& rng, std::size_t C, std::size_t m, std::size_t F);
/// Glorot-initialized unconstrained kernel, zero bias.
Conv2dKernel make_standard(Rng& rng, std::size_t C, std::size_t c_in, std::size_t F);

enum class SymmetryCheck { checked, unchecked };

/// Tolerance of the checked-mode structural scans.
inline constexpr double kSymmetryTolerance = 1e-9;

enum class SymKind { generating, preserving };

/// State kept by a forward pass for the matching backward pass.
struct SymLayerCache {
    SymKind kind = SymKind::preserving;
    Tensor input;
    Conv2dKernel expanded;
};

/// Convolution of a self-Cartesian pair tensor with the expanded
/// generating kernel. Checked mode rejects inputs that are not channel-half
/// swaps of their transpose.
Tensor sym_gen_layer_forward(const Tensor& x_pair, const SymGenKernel& k,
                             SymmetryCheck check = SymmetryCheck::checked, SymLayerCache* cache = nullptr);

/// Convolution of a symmetric pair tensor with the expanded preserving
/// kernel. Checked mode rejects inputs with asymmetry above 1e-9.
Tensor sym_pres_layer_forward(const Tensor& z, const SymPresKernel& k,
                              SymmetryCheck check = SymmetryCheck::checked, SymLayerCache* cache = nullptr);

struct SymLayerGrads {
    Tensor d_packed;
    Tensor d_bias;
    Tensor d_input;
};

/// conv2d_backward on the cached expanded kernel followed by the fold for its kind.
SymLayerGrads sym_layer_backward(const SymLayerCache& cache, const Tensor& upstream);

/// Packed kernel files: <stem>.sct1 (S or R), <stem>.bias.sct1, and a
/// <stem>.hdr sidecar with kind, C, n (or m), F.
void save_kernel(const std::filesystem::path& stem, const SymGenKernel& k);
void save_kernel(const std::filesystem::path& stem, const SymPresKernel& k);
std::variant<SymGenKernel, SymPresKernel> load_sym_kernel(const std::filesystem::path& stem);

} // namespace scnn
