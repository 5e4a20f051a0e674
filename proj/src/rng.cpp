#include "scnn/rng.hpp"

namespace scnn {

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t Rng::next_u64()
{
    // Two rounds so that nearby seeds do not give correlated streams.
    return splitmix64(splitmix64(seed_) ^ (counter_++ * 0xd1b54a32d192ed03ULL));
}

double Rng::uniform01()
{
    // 53 random bits centred in their bucket: never exactly 0 or 1.
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double Rng::uniform_pm1()
{
    return 2.0 * uniform01() - 1.0;
}

std::uint64_t Rng::below(std::uint64_t n)
{
    if (n <= 1)
        return 0;
    // Rejection keeps the draw unbiased.
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t v;
    do {
        v = next_u64();
    } while (v >= limit);
    return v % n;
}

Rng Rng::fork(std::uint64_t stream) const
{
    return Rng(splitmix64(seed_ ^ splitmix64(stream + 0x5851f42d4c957f2dULL)));
}

Tensor Rng::uniform_tensor(Shape shape, double bound)
{
    Tensor t(std::move(shape));
    for (auto& v : t.data())
        v = bound * uniform_pm1();
    return t;
}

} // namespace scnn
