#pragma once

#include "scnn/tensor.hpp"

namespace scnn {

/// y[i,j,:] = concat(x[i,:], x[j,:]) for an L x n sequence; result is L x L x 2n.
/// Row subject first, column subject second.
Tensor self_cartesian(const Tensor& x);

/// max over i,j,k<n of |y[i,j,k] - y[j,i,k+n]| and |y[i,j,k+n] - y[j,i,k]|.
/// Zero for any output of self_cartesian.
double pair_swap_check(const Tensor& y);

} // namespace scnn
