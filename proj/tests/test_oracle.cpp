#include <doctest.h>

#include <cmath>

#include "scnn/conv.hpp"
#include "scnn/oracle.hpp"
#include "test_util.hpp"

using namespace scnn;

TEST_CASE("fd_gradient on closed forms")
{
    Rng rng(1);
    Tensor c = testing::random_tensor(rng, {7});
    Tensor p = testing::random_tensor(rng, {7});
    Tensor g = oracle::fd_gradient([&](const Tensor& q) { return dot(c, q); }, p);
    CHECK(max_abs_diff(g, c) <= 1e-9);

    Tensor h = oracle::fd_gradient([](const Tensor& q) { return 0.5 * dot(q, q); }, p);
    CHECK(max_abs_diff(h, p) <= 1e-9);

    CHECK_THROWS_AS(oracle::fd_gradient([](const Tensor&) { return std::nan(""); }, p), OracleError);
}

TEST_CASE("gradient_error")
{
    const oracle::FdSpec spec{1e-6, 1e-5, 1e-8};
    Tensor a({3}), f({3});
    a[0] = 1.0;
    f[0] = 1.0 + 5e-6;
    CHECK(oracle::gradient_error(a, f, spec) <= 1e-5);
    f[0] = 1.0 + 2e-5;
    CHECK(oracle::gradient_error(a, f, spec) > 1e-5);
    f[0] = 1.0;
    a[1] = 5e-9; // below the absolute floor
    CHECK(oracle::gradient_error(a, f, spec) <= 1e-5);
    CHECK_THROWS_AS(oracle::gradient_error(a, Tensor({2}), spec), ShapeError);
}

TEST_CASE("naive_conv2d on a hand-computed corner")
{
    // 2 x 2 input, C=3 all-ones kernel: every output sums the whole input.
    Tensor x({2, 2, 1});
    x[0] = 1;
    x[1] = 2;
    x[2] = 3;
    x[3] = 4;
    Tensor out = oracle::naive_conv2d(x, Tensor({3, 3, 1, 1}, 1.0), Tensor({1}, 0.5));
    for (double v : out.data())
        CHECK(v == 10.5);

    // Only the bottom-right tap: out[s,t] = x[s+1,t+1].
    Tensor w({3, 3, 1, 1});
    w(2, 2, 0, 0) = 1.0;
    out = oracle::naive_conv2d(x, w, Tensor({1}));
    CHECK(out(0, 0, 0) == 4.0);
    CHECK(out(0, 1, 0) == 0.0);
    CHECK(out(1, 0, 0) == 0.0);
    CHECK(out(1, 1, 0) == 0.0);
}

TEST_CASE("expand counts")
{
    SUBCASE("worked examples")
    {
        auto g = oracle::brute_force_expand_count(SymKind::generating, 3, 5, 8);
        CHECK(g.stored == 240);
        CHECK(g.full == 720);
        auto p = oracle::brute_force_expand_count(SymKind::preserving, 3, 4, 4);
        CHECK(p.stored == 96);
        CHECK(p.full == 144);
        auto g1 = oracle::brute_force_expand_count(SymKind::generating, 1, 3, 2);
        CHECK(g1.stored == 6);
        CHECK(g1.full == 12);
        auto p1 = oracle::brute_force_expand_count(SymKind::preserving, 1, 3, 2);
        CHECK(p1.stored == p1.full);
    }
    SUBCASE("closed forms across a grid")
    {
        for (std::size_t C : {1, 2, 3, 4, 5, 7})
            for (std::size_t ch = 1; ch <= 4; ++ch)
                for (std::size_t F = 1; F <= 3; ++F) {
                    auto g = oracle::brute_force_expand_count(SymKind::generating, C, ch, F);
                    CHECK(2 * g.stored == C * (C + 1) * ch * F);
                    CHECK(g.full == 2 * C * C * ch * F);
                    auto p = oracle::brute_force_expand_count(SymKind::preserving, C, ch, F);
                    CHECK(2 * p.stored == C * (C + 1) * ch * F);
                    CHECK(p.full == C * C * ch * F);
                }
    }
}
