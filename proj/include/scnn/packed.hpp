#pragma once

#include <cstddef>
#include <filesystem>
#include <utility>

#include "scnn/conv.hpp"
#include "scnn/symkernel.hpp"
#include "scnn/tensor.hpp"

namespace scnn {

/// Upper triangle (i <= j, diagonal included) of a symmetric L x L x c
/// feature map, stored row by row. data has shape [L(L+1)/2, c].
class PackedSymFeature {
public:
    PackedSymFeature(std::size_t L, std::size_t c);
    PackedSymFeature(std::size_t L, Tensor data);

    std::size_t length() const { return L_; }
    std::size_t channels() const { return c_; }
    const Tensor& data() const { return data_; }
    Tensor& data() { return data_; }

    /// Row of the packed storage holding cell (i, j); either order works.
    std::size_t cell(std::size_t i, std::size_t j) const
    {
        if (i > j)
            std::swap(i, j);
        return i * (2 * L_ - i + 1) / 2 + (j - i);
    }
    const double* fiber(std::size_t i, std::size_t j) const { return data_.raw() + cell(i, j) * c_; }
    double* fiber(std::size_t i, std::size_t j) { return data_.raw() + cell(i, j) * c_; }

private:
    std::size_t L_;
    std::size_t c_;
    Tensor data_;
};

constexpr std::size_t packed_cells(std::size_t L) { return L * (L + 1) / 2; }

/// Throws PreconditionError when z deviates from symmetry by more than 1e-9.
PackedSymFeature pack(const Tensor& z);
Tensor unpack(const PackedSymFeature& p);

/// Triangle-only symmetry-preserving convolution. Equals
/// pack(sym_pres_layer_forward(unpack(p), k)) but only computes cells i <= j,
/// reading the mirrored cell when a tap falls below the diagonal.
PackedSymFeature packed_sym_conv(const PackedSymFeature& p, const SymPresKernel& k, MacCounter* counter = nullptr);

/// Feature-map entries held at peak by a layer evaluation.
struct StorageStats {
    std::size_t peak_feature_entries = 0;
};

/// Triangle-only symmetry-generating layer straight from the L x n
/// sequence; the Cartesian pair tensor is never materialized.
PackedSymFeature packed_sym_gen_conv(const Tensor& x, const SymGenKernel& k, MacCounter* counter = nullptr,
                                     StorageStats* storage = nullptr);

/// Feature entries the full path holds: x, its L x L x 2n lift, and the L x L x F output.
std::size_t full_gen_feature_entries(std::size_t L, std::size_t n, std::size_t F);

/// Packed features on disk: <stem>.sct1 of shape [L(L+1)/2, c] and a <stem>.hdr sidecar with L.
void save_packed(const std::filesystem::path& stem, const PackedSymFeature& p);
PackedSymFeature load_packed(const std::filesystem::path& stem);

} // namespace scnn
