#include <algorithm>
#include <cmath>

#include "scnn/oracle.hpp"

namespace scnn::oracle {

Tensor fd_gradient(const ScalarFn& loss, const Tensor& params, const FdSpec& spec)
{
    if (!(spec.step > 0.0))
        throw OracleError("fd_gradient: step must be positive");
    Tensor grad(params.shape());
    Tensor probe = params;
    for (std::size_t i = 0; i < params.size(); ++i) {
        const double orig = probe[i];
        probe[i] = orig + spec.step;
        const double up = loss(probe);
        probe[i] = orig - spec.step;
        const double down = loss(probe);
        probe[i] = orig;
        if (!std::isfinite(up) || !std::isfinite(down))
            throw OracleError("fd_gradient: non-finite loss at coordinate " + std::to_string(i));
        grad[i] = (up - down) / (2.0 * spec.step);
    }
    return grad;
}

double gradient_error(const Tensor& analytic, const Tensor& numeric, const FdSpec& spec)
{
    require_same_shape(analytic, numeric, "gradient_error");
    const double floor = spec.abs_floor / spec.rel_tol;
    double worst = 0.0;
    for (std::size_t i = 0; i < analytic.size(); ++i) {
        const double a = analytic[i];
        const double f = numeric[i];
        const double denom = std::max({std::abs(a), std::abs(f), floor});
        worst = std::max(worst, std::abs(a - f) / denom);
    }
    return worst;
}

} // namespace scnn::oracle
