#include <doctest.h>

#include "scnn/cartesian.hpp"
#include "scnn/error.hpp"
#include "test_util.hpp"

using namespace scnn;

TEST_CASE("self_cartesian L=2, n=1")
{
    Tensor x({2, 1});
    x[0] = 1.0;
    x[1] = 2.0;
    Tensor y = self_cartesian(x);
    REQUIRE(y.shape() == Shape{2, 2, 2});
    const double expected[2][2][2] = {{{1, 1}, {1, 2}}, {{2, 1}, {2, 2}}};
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            for (std::size_t k = 0; k < 2; ++k)
                CHECK(y(i, j, k) == expected[i][j][k]);
}

TEST_CASE("self_cartesian layout")
{
    Rng rng(1);
    Tensor x = testing::random_tensor(rng, {5, 3});
    Tensor y = self_cartesian(x);
    CHECK(y.shape() == Shape{5, 5, 6});
    for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = 0; j < 5; ++j)
            for (std::size_t k = 0; k < 3; ++k) {
                CHECK(y(i, j, k) == x(i, k));
                CHECK(y(i, j, k + 3) == x(j, k));
            }
    CHECK(self_cartesian(testing::random_tensor(rng, {1, 2})).shape() == Shape{1, 1, 4});
    CHECK_THROWS_AS(self_cartesian(Tensor({2, 2, 2})), ShapeError);
}

TEST_CASE("pair_swap_check")
{
    Rng rng(2);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t L = 1 + rng.below(8), n = 1 + rng.below(4);
        CHECK(pair_swap_check(self_cartesian(testing::random_tensor(rng, {L, n}))) == 0.0);
    }
    Tensor y = self_cartesian(testing::random_tensor(rng, {4, 2}));
    y(1, 3, 0) += 0.25;
    CHECK(pair_swap_check(y) == doctest::Approx(0.25).epsilon(1e-12));
    CHECK_THROWS_AS(pair_swap_check(Tensor({3, 3, 3})), ShapeError);
    CHECK_THROWS_AS(pair_swap_check(Tensor({3, 2, 2})), ShapeError);
}

TEST_CASE("the lift itself is not spatially symmetric")
{
    Rng rng(3);
    Tensor y = self_cartesian(testing::random_tensor(rng, {6, 2}));
    CHECK(spatial_asymmetry(y) > 1e-3);
}
