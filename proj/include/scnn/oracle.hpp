#pragma once

#include <cstddef>
#include <functional>

#include "scnn/symkernel.hpp"
#include "scnn/tensor.hpp"

// Deliberately naive reference code. Nothing here calls into the optimized
// conv kernels; these loops are written straight from the definitions and
// are the serial baseline the OpenMP kernels are checked and benchmarked against.
namespace scnn::oracle {

/// Direct summation of the zero-padded "same" cross-correlation.
Tensor naive_conv2d(const Tensor& input, const Tensor& weights, const Tensor& bias);

struct NaiveConvGrads {
    Tensor d_weights;
    Tensor d_bias;
    Tensor d_input;
};

/// Scatter-form backward pass: every forward product w * x sends
/// upstream * x to dW and upstream * w to dx.
NaiveConvGrads naive_conv2d_backward(const Tensor& input, const Tensor& weights, const Tensor& upstream);

struct FdSpec {
    double step = 1e-6;
    double rel_tol = 1e-5;
    double abs_floor = 1e-8;
};

using ScalarFn = std::function<double(const Tensor&)>;

/// Central differences (f(p + h e) - f(p - h e)) / 2h, one coordinate at a time.
/// Throws OracleError on a non-finite loss value.
Tensor fd_gradient(const ScalarFn& loss, const Tensor& params, const FdSpec& spec = {});

/// max over entries of |a - f| / max(|a|, |f|, abs_floor / rel_tol).
/// At most rel_tol iff every entry is within rel_tol relatively or abs_floor absolutely.
double gradient_error(const Tensor& analytic, const Tensor& numeric, const FdSpec& spec = {});

struct ExpandCount {
    std::size_t stored = 0;
    std::size_t full = 0;
};

/// Builds a packed kernel whose entries are all distinct, expands it, and
/// counts the distinct values that appear in the expanded kernel (stored)
/// and the expanded kernel's size (full).
ExpandCount brute_force_expand_count(SymKind kind, std::size_t C, std::size_t channels, std::size_t F);

} // namespace scnn::oracle
