// OpenMP kernels against the serial reference loops, and the packed
// triangle path against the full convolution.
#include <benchmark/benchmark.h>

#include "scnn/oracle.hpp"
#include "scnn/packed.hpp"

using namespace scnn;

namespace {

constexpr std::size_t kChannels = 8;

Tensor symmetric_input(std::size_t L, std::size_t c)
{
    Rng rng(5);
    Tensor z({L, L, c});
    for (std::size_t i = 0; i < L; ++i)
        for (std::size_t j = i; j < L; ++j)
            for (std::size_t k = 0; k < c; ++k)
                z(i, j, k) = z(j, i, k) = rng.uniform_pm1();
    return z;
}

SymPresKernel kernel(std::size_t C)
{
    Rng rng(6);
    return SymPresKernel(C, kChannels, kChannels, rng.uniform_tensor({tri_count(C), kChannels, kChannels}, 0.3),
                         rng.uniform_tensor({kChannels}, 0.1));
}

void set_macs(benchmark::State& state, const MacCounter& m)
{
    state.counters["MACs"] = static_cast<double>(m.macs);
}

void BM_ConvForward(benchmark::State& state)
{
    const auto L = static_cast<std::size_t>(state.range(0));
    const Tensor z = symmetric_input(L, kChannels);
    const Conv2dKernel w = expand_pres(kernel(3));
    MacCounter m;
    conv2d_forward(z, w, &m);
    for (auto _ : state)
        benchmark::DoNotOptimize(conv2d_forward(z, w));
    set_macs(state, m);
}

void BM_NaiveConvForward(benchmark::State& state)
{
    const auto L = static_cast<std::size_t>(state.range(0));
    const Tensor z = symmetric_input(L, kChannels);
    const Conv2dKernel w = expand_pres(kernel(3));
    for (auto _ : state)
        benchmark::DoNotOptimize(oracle::naive_conv2d(z, w.weights, w.bias));
}

void BM_ConvBackward(benchmark::State& state)
{
    const auto L = static_cast<std::size_t>(state.range(0));
    const Tensor z = symmetric_input(L, kChannels);
    const Conv2dKernel w = expand_pres(kernel(3));
    const Tensor up = symmetric_input(L, kChannels);
    for (auto _ : state)
        benchmark::DoNotOptimize(conv2d_backward(z, w, up));
}

void BM_NaiveConvBackward(benchmark::State& state)
{
    const auto L = static_cast<std::size_t>(state.range(0));
    const Tensor z = symmetric_input(L, kChannels);
    const Conv2dKernel w = expand_pres(kernel(3));
    const Tensor up = symmetric_input(L, kChannels);
    for (auto _ : state)
        benchmark::DoNotOptimize(oracle::naive_conv2d_backward(z, w.weights, up));
}

void BM_FullPreserving(benchmark::State& state)
{
    const auto L = static_cast<std::size_t>(state.range(0));
    const Tensor z = symmetric_input(L, kChannels);
    const SymPresKernel k = kernel(static_cast<std::size_t>(state.range(1)));
    for (auto _ : state)
        benchmark::DoNotOptimize(sym_pres_layer_forward(z, k, SymmetryCheck::unchecked));
}

void BM_PackedPreserving(benchmark::State& state)
{
    const auto L = static_cast<std::size_t>(state.range(0));
    const PackedSymFeature p = pack(symmetric_input(L, kChannels));
    const SymPresKernel k = kernel(static_cast<std::size_t>(state.range(1)));
    MacCounter m;
    packed_sym_conv(p, k, &m);
    for (auto _ : state)
        benchmark::DoNotOptimize(packed_sym_conv(p, k));
    set_macs(state, m);
}

} // namespace

BENCHMARK(BM_ConvForward)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_NaiveConvForward)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ConvBackward)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_NaiveConvBackward)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FullPreserving)->ArgsProduct({{32, 64, 128}, {3, 5}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PackedPreserving)->ArgsProduct({{32, 64, 128}, {3, 5}})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
