#include <doctest.h>

#include <cmath>

#include "scnn/conv.hpp"
#include "scnn/loss.hpp"
#include "scnn/oracle.hpp"
#include "test_util.hpp"

using namespace scnn;
using scnn::testing::random_tensor;

namespace {

Conv2dKernel random_kernel(Rng& rng, std::size_t C, std::size_t cin, std::size_t F)
{
    return {random_tensor(rng, {C, C, cin, F}), random_tensor(rng, {F})};
}

const oracle::FdSpec kFd6{1e-6, 1e-6, 1e-8};

} // namespace

TEST_CASE("conv2d_forward: identity kernel")
{
    Rng rng(1);
    Tensor x = random_tensor(rng, {4, 4, 1});
    Conv2dKernel k{Tensor({1, 1, 1, 1}, 1.0), zeros({1})};
    CHECK(conv2d_forward(x, k) == x);
}

TEST_CASE("conv2d_forward: all-ones 3x3 counts the in-range taps")
{
    Tensor x({3, 3, 1}, 1.0);
    Conv2dKernel k{Tensor({3, 3, 1, 1}, 1.0), zeros({1})};
    Tensor y = conv2d_forward(x, k);
    CHECK(y(1, 1, 0) == 9.0);
    CHECK(y(0, 0, 0) == 4.0);
    CHECK(y(2, 2, 0) == 4.0);
    CHECK(y(0, 2, 0) == 4.0);
    CHECK(y(0, 1, 0) == 6.0);
}

TEST_CASE("conv2d_forward matches the naive loop oracle")
{
    Rng rng(2);
    for (std::size_t C : {1, 3, 5}) {
        Tensor x = random_tensor(rng, {6, 6, 3});
        Conv2dKernel k = random_kernel(rng, C, 3, 2);
        CHECK(max_abs_diff(conv2d_forward(x, k), oracle::naive_conv2d(x, k.weights, k.bias)) <= 1e-12);
    }
}

TEST_CASE("conv2d_forward errors")
{
    Rng rng(3);
    Tensor x = random_tensor(rng, {4, 4, 2});
    Conv2dKernel even{zeros({2, 2, 2, 1}), zeros({1})};
    CHECK_THROWS_AS(conv2d_forward(x, even), ConfigError);
    Conv2dKernel wrong_channels{zeros({3, 3, 3, 1}), zeros({1})};
    CHECK_THROWS_AS(conv2d_forward(x, wrong_channels), ShapeError);
    CHECK_THROWS_AS(conv2d_forward(zeros({4, 5, 2}), random_kernel(rng, 3, 2, 1)), ShapeError);
}

TEST_CASE("conv2d_forward is linear in the input")
{
    Rng rng(4);
    Tensor x = random_tensor(rng, {5, 5, 3});
    Tensor y = random_tensor(rng, {5, 5, 3});
    Conv2dKernel k{random_tensor(rng, {3, 3, 3, 2}), zeros({2})};
    const double a = 0.7, b = -1.3;
    Tensor lhs = conv2d_forward(axpy(a, x, axpy(b, y, zeros(x.shape()))), k);
    Tensor rhs = axpy(a, conv2d_forward(x, k), axpy(b, conv2d_forward(y, k), zeros(lhs.shape())));
    CHECK(max_abs_diff(lhs, rhs) <= 1e-12);
}

TEST_CASE("conv2d_backward: adjointness <conv(x), g> = <x, d_input(g)>")
{
    Rng rng(5);
    for (std::size_t C : {1, 3, 5}) {
        Tensor x = random_tensor(rng, {6, 6, 4});
        Tensor g = random_tensor(rng, {6, 6, 3});
        Conv2dKernel k{random_tensor(rng, {C, C, 4, 3}), zeros({3})};
        ConvGrads grads = conv2d_backward(x, k, g);
        CHECK(std::abs(dot(conv2d_forward(x, k), g) - dot(x, grads.d_input)) <= 1e-10);
    }
}

TEST_CASE("conv2d_backward: trivial cases")
{
    Rng rng(6);
    Tensor x = random_tensor(rng, {4, 4, 2});
    Conv2dKernel k = random_kernel(rng, 3, 2, 3);
    ConvGrads z = conv2d_backward(x, k, zeros({4, 4, 3}));
    CHECK(max_abs_diff(z.d_weights, zeros(k.weights.shape())) == 0.0);
    CHECK(max_abs_diff(z.d_bias, zeros({3})) == 0.0);
    CHECK(max_abs_diff(z.d_input, zeros(x.shape())) == 0.0);

    Tensor x1 = random_tensor(rng, {4, 4, 1});
    Tensor g = random_tensor(rng, {4, 4, 1});
    Conv2dKernel id{Tensor({1, 1, 1, 1}, 1.0), zeros({1})};
    CHECK(conv2d_backward(x1, id, g).d_input == g);

    CHECK_THROWS_AS(conv2d_backward(x, k, zeros({4, 4, 2})), ShapeError);
    CHECK(conv2d_backward(x, k, zeros({4, 4, 3}), false).d_input.empty());
}

TEST_CASE("conv2d_backward matches finite differences and the scatter oracle")
{
    Rng rng(7);
    for (std::size_t L : {1, 4, 6})
        for (std::size_t C : {1, 3})
            for (std::size_t cin : {1, 4}) {
                const std::size_t F = 1 + rng.below(4);
                Tensor x = random_tensor(rng, {L, L, cin});
                Conv2dKernel k = random_kernel(rng, C, cin, F);
                Tensor g = random_tensor(rng, {L, L, F});
                ConvGrads grads = conv2d_backward(x, k, g);

                auto via_w = [&](const Tensor& w) { return dot(conv2d_forward(x, {w, k.bias}), g); };
                auto via_b = [&](const Tensor& b) { return dot(conv2d_forward(x, {k.weights, b}), g); };
                auto via_x = [&](const Tensor& in) { return dot(conv2d_forward(in, k), g); };
                CHECK(oracle::gradient_error(grads.d_weights, oracle::fd_gradient(via_w, k.weights, kFd6), kFd6) <= 1e-6);
                CHECK(oracle::gradient_error(grads.d_bias, oracle::fd_gradient(via_b, k.bias, kFd6), kFd6) <= 1e-6);
                CHECK(oracle::gradient_error(grads.d_input, oracle::fd_gradient(via_x, x, kFd6), kFd6) <= 1e-6);

                auto naive = oracle::naive_conv2d_backward(x, k.weights, g);
                CHECK(max_abs_diff(grads.d_weights, naive.d_weights) <= 1e-12);
                CHECK(max_abs_diff(grads.d_input, naive.d_input) <= 1e-12);
                CHECK(max_abs_diff(grads.d_bias, naive.d_bias) <= 1e-12);
            }
}

TEST_CASE("relu and sigmoid")
{
    Tensor x({2}, {-1.0, 2.0});
    Tensor r = relu_forward(x);
    CHECK(r[0] == 0.0);
    CHECK(r[1] == 2.0);
    Tensor dr = relu_backward(x, Tensor({2}, {5.0, 7.0}));
    CHECK(dr[0] == 0.0);
    CHECK(dr[1] == 7.0);

    CHECK(sigmoid_forward(Tensor({1}, 0.0))[0] == 0.5);
    Tensor big = sigmoid_forward(Tensor({2}, {-800.0, 800.0}));
    CHECK(all_finite(big));

    Rng rng(8);
    Tensor z = random_tensor(rng, {20}, 4.0);
    Tensor g = random_tensor(rng, {20});
    Tensor analytic = sigmoid_backward(sigmoid_forward(z), g);
    auto f = [&](const Tensor& p) { return dot(sigmoid_forward(p), g); };
    CHECK(oracle::gradient_error(analytic, oracle::fd_gradient(f, z, kFd6), kFd6) <= 1e-6);
}

TEST_CASE("weighted_bce_upper")
{
    SUBCASE("near-perfect prediction")
    {
        Rng rng(9);
        const std::size_t L = 6;
        Tensor label({L, L}), pred({L, L});
        for (std::size_t i = 0; i < L * L; ++i) {
            label[i] = rng.below(2) ? 1.0 : 0.0;
            pred[i] = label[i] > 0.5 ? 1.0 - 1e-9 : 1e-9;
        }
        CHECK(weighted_bce_upper(pred, label, 5.0, 1).loss <= 1e-7);
    }
    SUBCASE("single entry: 3 ln 2")
    {
        Tensor pred({2, 2}, 0.5);
        Tensor label({2, 2});
        label(0, 1) = 1.0;
        auto r = weighted_bce_upper(pred, label, 3.0, 1);
        CHECK(r.entries == 1);
        CHECK(r.loss == doctest::Approx(3.0 * std::log(2.0)).epsilon(1e-15));
    }
    SUBCASE("gradient matches finite differences and vanishes off the triangle")
    {
        Rng rng(10);
        const std::size_t L = 8;
        Tensor label({L, L}), pred({L, L});
        for (std::size_t i = 0; i < L * L; ++i) {
            label[i] = rng.below(3) == 0 ? 1.0 : 0.0;
            pred[i] = 0.05 + 0.9 * rng.uniform01();
        }
        for (std::size_t sep : {1, 3}) {
            auto r = weighted_bce_upper(pred, label, 5.0, sep);
            auto f = [&](const Tensor& p) { return weighted_bce_upper(p, label, 5.0, sep).loss; };
            CHECK(oracle::gradient_error(r.d_pred, oracle::fd_gradient(f, pred, kFd6), kFd6) <= 1e-6);
            for (std::size_t i = 0; i < L; ++i)
                for (std::size_t j = 0; j < L; ++j)
                    if (j < i + sep)
                        CHECK(r.d_pred(i, j) == 0.0);
        }
    }
    SUBCASE("valid length restricts the entries")
    {
        Tensor pred({5, 5}, 0.3);
        Tensor label({5, 5});
        auto r = weighted_bce_upper(pred, label, 5.0, 1, 3);
        CHECK(r.entries == 3);
        CHECK(r.d_pred(0, 4) == 0.0);
        CHECK(r.d_pred(3, 4) == 0.0);
    }
    SUBCASE("domain and shape errors")
    {
        Tensor label({3, 3});
        Tensor pred({3, 3}, 0.5);
        pred(0, 2) = 1.0;
        CHECK_THROWS_AS(weighted_bce_upper(pred, label, 5.0), DomainError);
        CHECK_THROWS_AS(weighted_bce_upper(Tensor({3, 3}, 0.5), zeros({4, 4}), 5.0), ShapeError);
        CHECK_THROWS_AS(weighted_bce_upper(Tensor({3, 3}, 0.5), label, 0.0), ConfigError);
    }
}
