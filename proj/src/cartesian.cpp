#include "scnn/cartesian.hpp"

#include <algorithm>
#include <cmath>

namespace scnn {

Tensor self_cartesian(const Tensor& x)
{
    if (x.rank() != 2)
        throw ShapeError("self_cartesian: expected L x n features, got " + shape_string(x.shape()));
    const std::size_t L = x.extent(0);
    const std::size_t n = x.extent(1);
    Tensor y({L, L, 2 * n});
    for (std::size_t i = 0; i < L; ++i) {
        for (std::size_t j = 0; j < L; ++j) {
            double* fiber = y.raw() + (i * L + j) * 2 * n;
            std::copy_n(x.raw() + i * n, n, fiber);
            std::copy_n(x.raw() + j * n, n, fiber + n);
        }
    }
    return y;
}

double pair_swap_check(const Tensor& y)
{
    if (y.rank() != 3 || y.extent(0) != y.extent(1))
        throw ShapeError("pair_swap_check: expected L x L x 2n, got " + shape_string(y.shape()));
    if (y.extent(2) % 2 != 0)
        throw ShapeError("pair_swap_check: channel count must be even");
    const std::size_t L = y.extent(0);
    const std::size_t n = y.extent(2) / 2;
    double worst = 0.0;
    for (std::size_t i = 0; i < L; ++i)
        for (std::size_t j = 0; j < L; ++j)
            for (std::size_t k = 0; k < n; ++k) {
                worst = std::max(worst, std::abs(y(i, j, k) - y(j, i, k + n)));
                worst = std::max(worst, std::abs(y(i, j, k + n) - y(j, i, k)));
            }
    return worst;
}

} // namespace scnn
