#pragma once

#include <cstddef>

#include "scnn/rng.hpp"
#include "scnn/tensor.hpp"

namespace scnn::testing {

inline Tensor random_tensor(Rng& rng, Shape shape, double bound = 1.0)
{
    return rng.uniform_tensor(std::move(shape), bound);
}

/// Random L x L x c tensor with z[i,j,:] == z[j,i,:] exactly.
inline Tensor random_symmetric(Rng& rng, std::size_t L, std::size_t c, double bound = 1.0)
{
    Tensor z({L, L, c});
    for (std::size_t i = 0; i < L; ++i)
        for (std::size_t j = i; j < L; ++j)
            for (std::size_t k = 0; k < c; ++k)
                z(i, j, k) = z(j, i, k) = bound * rng.uniform_pm1();
    return z;
}

} // namespace scnn::testing
