#pragma once

#include <cstdint>

#include "scnn/tensor.hpp"

namespace scnn {

/// Counter-based generator: draw k is a pure function of (seed, k), so the
/// sequence is identical on every platform and can be split by counter.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) : seed_(seed) {}

    std::uint64_t seed() const { return seed_; }
    std::uint64_t counter() const { return counter_; }

    std::uint64_t next_u64();
    /// Uniform on the open interval (0, 1).
    double uniform01();
    /// Uniform on the open interval (-1, 1).
    double uniform_pm1();
    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n);

    /// Independent generator for a sub-task, derived from this seed.
    Rng fork(std::uint64_t stream) const;

    /// Tensor of draws uniform on (-bound, bound).
    Tensor uniform_tensor(Shape shape, double bound);

private:
    std::uint64_t seed_;
    std::uint64_t counter_ = 0;
};

std::uint64_t splitmix64(std::uint64_t x);

} // namespace scnn
