#include "scnn/packed.hpp"

#include "scnn/tensor_io.hpp"

namespace scnn {

PackedSymFeature::PackedSymFeature(std::size_t L, std::size_t c) : L_(L), c_(c), data_({packed_cells(L), c}) {}

PackedSymFeature::PackedSymFeature(std::size_t L, Tensor data) : L_(L), c_(0), data_(std::move(data))
{
    if (L == 0 || data_.rank() != 2 || data_.extent(0) != packed_cells(L))
        throw ShapeError("packed feature of length " + std::to_string(L) + " needs shape [" +
                         std::to_string(packed_cells(L)) + ",c], got " + shape_string(data_.shape()));
    c_ = data_.extent(1);
}

PackedSymFeature pack(const Tensor& z)
{
    if (z.rank() != 3 || z.extent(0) != z.extent(1))
        throw ShapeError("pack: expected L x L x c, got " + shape_string(z.shape()));
    if (spatial_asymmetry(z) > kSymmetryTolerance)
        throw PreconditionError("pack: feature map is not spatially symmetric");
    const std::size_t L = z.extent(0);
    const std::size_t c = z.extent(2);
    PackedSymFeature p(L, c);
    double* dst = p.data().raw();
    for (std::size_t i = 0; i < L; ++i)
        for (std::size_t j = i; j < L; ++j)
            for (std::size_t k = 0; k < c; ++k)
                *dst++ = z(i, j, k);
    return p;
}

Tensor unpack(const PackedSymFeature& p)
{
    const std::size_t L = p.length();
    const std::size_t c = p.channels();
    Tensor z({L, L, c});
    for (std::size_t i = 0; i < L; ++i)
        for (std::size_t j = 0; j < L; ++j) {
            const double* src = p.fiber(i, j);
            for (std::size_t k = 0; k < c; ++k)
                z(i, j, k) = src[k];
        }
    return z;
}

PackedSymFeature packed_sym_conv(const PackedSymFeature& p, const SymPresKernel& k, MacCounter* counter)
{
    if (p.channels() != k.m)
        throw ShapeError("packed_sym_conv: input has " + std::to_string(p.channels()) + " channels, kernel expects " +
                         std::to_string(k.m));
    if (k.C % 2 == 0)
        throw ConfigError("packed_sym_conv: kernel size must be odd");

    const Conv2dKernel q = expand_pres(k);
    const auto L = static_cast<std::ptrdiff_t>(p.length());
    const auto C = static_cast<std::ptrdiff_t>(k.C);
    const auto m = static_cast<std::ptrdiff_t>(k.m);
    const auto F = static_cast<std::ptrdiff_t>(k.F);
    const std::ptrdiff_t half = C / 2;
    const double* w = q.weights.raw();
    const double* b = q.bias.raw();

    PackedSymFeature out(p.length(), k.F);
    std::uint64_t macs = 0;

#pragma omp parallel for schedule(dynamic, 1) reduction(+ : macs)
    for (std::ptrdiff_t s = 0; s < L; ++s) {
        for (std::ptrdiff_t t = s; t < L; ++t) {
            double* acc = out.fiber(s, t);
            for (std::ptrdiff_t f = 0; f < F; ++f)
                acc[f] = b[f];
            // Same tap order as conv2d_forward so both paths round identically.
            for (std::ptrdiff_t i = 0; i < C; ++i) {
                const std::ptrdiff_t a = s + i - half;
                if (a < 0 || a >= L)
                    continue;
                for (std::ptrdiff_t j = 0; j < C; ++j) {
                    const std::ptrdiff_t c = t + j - half;
                    if (c < 0 || c >= L)
                        continue;
                    const double* x = p.fiber(a, c);
                    const double* wij = w + (i * C + j) * m * F;
                    for (std::ptrdiff_t ch = 0; ch < m; ++ch) {
                        const double xv = x[ch];
                        const double* wk = wij + ch * F;
                        for (std::ptrdiff_t f = 0; f < F; ++f)
                            acc[f] += wk[f] * xv;
                    }
                    macs += static_cast<std::uint64_t>(m * F);
                }
            }
        }
    }
    if (counter)
        counter->macs += macs;
    return out;
}

PackedSymFeature packed_sym_gen_conv(const Tensor& x, const SymGenKernel& k, MacCounter* counter,
                                     StorageStats* storage)
{
    if (x.rank() != 2 || x.extent(1) != k.n)
        throw ShapeError("packed_sym_gen_conv: expected L x " + std::to_string(k.n) + " features, got " +
                         shape_string(x.shape()));
    if (k.C % 2 == 0)
        throw ConfigError("packed_sym_gen_conv: kernel size must be odd");

    const Conv2dKernel w_full = expand_gen(k);
    const auto L = static_cast<std::ptrdiff_t>(x.extent(0));
    const auto C = static_cast<std::ptrdiff_t>(k.C);
    const auto n = static_cast<std::ptrdiff_t>(k.n);
    const auto F = static_cast<std::ptrdiff_t>(k.F);
    const std::ptrdiff_t half = C / 2;
    const double* w = w_full.weights.raw();
    const double* b = w_full.bias.raw();
    const double* seq = x.raw();

    PackedSymFeature out(x.extent(0), k.F);
    std::uint64_t macs = 0;

#pragma omp parallel for schedule(dynamic, 1) reduction(+ : macs)
    for (std::ptrdiff_t s = 0; s < L; ++s) {
        for (std::ptrdiff_t t = s; t < L; ++t) {
            double* acc = out.fiber(s, t);
            for (std::ptrdiff_t f = 0; f < F; ++f)
                acc[f] = b[f];
            for (std::ptrdiff_t i = 0; i < C; ++i) {
                const std::ptrdiff_t a = s + i - half;
                if (a < 0 || a >= L)
                    continue;
                for (std::ptrdiff_t j = 0; j < C; ++j) {
                    const std::ptrdiff_t c = t + j - half;
                    if (c < 0 || c >= L)
                        continue;
                    // Lifted fiber at (a, c) is concat(x[a], x[c]).
                    const double* wij = w + (i * C + j) * 2 * n * F;
                    for (std::ptrdiff_t ch = 0; ch < 2 * n; ++ch) {
                        const double xv = ch < n ? seq[a * n + ch] : seq[c * n + ch - n];
                        const double* wk = wij + ch * F;
                        for (std::ptrdiff_t f = 0; f < F; ++f)
                            acc[f] += wk[f] * xv;
                    }
                    macs += static_cast<std::uint64_t>(2 * n * F);
                }
            }
        }
    }
    if (counter)
        counter->macs += macs;
    if (storage)
        storage->peak_feature_entries = x.size() + out.data().size();
    return out;
}

std::size_t full_gen_feature_entries(std::size_t L, std::size_t n, std::size_t F)
{
    return L * n + L * L * 2 * n + L * L * F;
}

void save_packed(const std::filesystem::path& stem, const PackedSymFeature& p)
{
    save_sct1(stem.string() + ".sct1", p.data());
    save_sidecar(stem.string() + ".hdr", {{"L", std::to_string(p.length())}});
}

PackedSymFeature load_packed(const std::filesystem::path& stem)
{
    const Sidecar hdr = load_sidecar(stem.string() + ".hdr");
    auto it = hdr.find("L");
    if (it == hdr.end())
        throw FormatError("packed feature header missing L");
    return PackedSymFeature(std::stoul(it->second), load_sct1(stem.string() + ".sct1"));
}

} // namespace scnn
