#include "scnn/harness/optim.hpp"

#include <cmath>

namespace scnn {

namespace {

void check(std::span<Tensor* const> params, std::span<const Tensor> grads, double lr)
{
    if (!(lr > 0.0))
        throw ConfigError("learning rate must be positive");
    if (params.size() != grads.size())
        throw ShapeError("optimizer: parameter and gradient lists differ in length");
    for (std::size_t i = 0; i < params.size(); ++i)
        require_same_shape(*params[i], grads[i], "optimizer step");
}

} // namespace

void sgd_step(std::span<Tensor* const> params, std::span<const Tensor> grads, double lr, double weight_decay)
{
    check(params, grads, lr);
    for (std::size_t i = 0; i < params.size(); ++i) {
        Tensor& p = *params[i];
        const Tensor& g = grads[i];
        for (std::size_t e = 0; e < p.size(); ++e)
            p[e] -= lr * (g[e] + weight_decay * p[e]);
    }
}

void adam_step(AdamState& s, std::span<Tensor* const> params, std::span<const Tensor> grads, double lr,
               double weight_decay)
{
    check(params, grads, lr);
    if (s.m.empty()) {
        for (const Tensor* p : params) {
            s.m.emplace_back(p->shape());
            s.v.emplace_back(p->shape());
        }
    }
    if (s.m.size() != params.size())
        throw ShapeError("adam_step: state was built for a different parameter list");

    ++s.t;
    const double c1 = 1.0 - std::pow(s.beta1, static_cast<double>(s.t));
    const double c2 = 1.0 - std::pow(s.beta2, static_cast<double>(s.t));
    for (std::size_t i = 0; i < params.size(); ++i) {
        Tensor& p = *params[i];
        Tensor& m = s.m[i];
        Tensor& v = s.v[i];
        for (std::size_t e = 0; e < p.size(); ++e) {
            const double g = grads[i][e] + weight_decay * p[e];
            m[e] = s.beta1 * m[e] + (1.0 - s.beta1) * g;
            v[e] = s.beta2 * v[e] + (1.0 - s.beta2) * g * g;
            p[e] -= lr * (m[e] / c1) / (std::sqrt(v[e] / c2) + s.eps);
        }
    }
}

} // namespace scnn
