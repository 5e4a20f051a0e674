#include "scnn/cli.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <type_traits>
#include <variant>

#include "scnn/cartesian.hpp"
#include "scnn/harness/compare.hpp"
#include "scnn/harness/config.hpp"
#include "scnn/harness/report.hpp"
#include "scnn/loss.hpp"
#include "scnn/oracle.hpp"
#include "scnn/packed.hpp"
#include "scnn/tensor_io.hpp"

namespace scnn::cli {

namespace fs = std::filesystem;

namespace {

void prepare_out(const Options& opt)
{
    std::error_code ec;
    fs::create_directories(opt.out, ec);
    if (ec)
        throw UsageError("cannot create output directory " + opt.out.string() + ": " + ec.message());
}

void write_file(const fs::path& path, const std::string& text)
{
    std::ofstream os(path, std::ios::binary);
    if (!os || !(os << text))
        throw FormatError("cannot write " + path.string());
}

RunConfig resolve_config(const Options& opt)
{
    RunConfig cfg = opt.config ? load_run_config(*opt.config) : default_run_config();
    if (opt.seed_given)
        cfg.net.seed = opt.seed;
    cfg.net.validate();
    return cfg;
}

std::string tol_text(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

std::string grid_point(std::size_t L, std::size_t C, std::size_t n, std::size_t F)
{
    return "L=" + std::to_string(L) + " C=" + std::to_string(C) + " n=" + std::to_string(n) +
           " F=" + std::to_string(F);
}

template <class Fn>
void for_grid(const SizeGrid& g, Fn&& fn)
{
    for (std::size_t L : g.L)
        for (std::size_t C : g.C)
            for (std::size_t n : g.n)
                for (std::size_t F : g.F)
                    fn(L, C, n, F);
}

const oracle::FdSpec kGradSpec{1e-6, 1e-5, 1e-8};

// One conv -> ReLU -> 1x1 head -> sigmoid -> weighted BCE pipeline around a
// symmetric layer. The input is an L x n sequence for the generating kind
// and a symmetric L x L x n map for the preserving kind.
struct GradInstance {
    SymKind kind;
    std::size_t C, n, F;
    Tensor input;
    Tensor packed;
    Tensor bias;
    Conv2dKernel head;
    Tensor label;

    Conv2dKernel expanded(const Tensor& p, const Tensor& b) const
    {
        if (kind == SymKind::generating)
            return expand_gen(SymGenKernel(C, n, F, p, b));
        return expand_pres(SymPresKernel(C, n, F, p, b));
    }

    Tensor layer_input() const { return kind == SymKind::generating ? self_cartesian(input) : input; }

    double loss(const Tensor& p, const Tensor& b) const
    {
        Tensor z = conv2d_forward(layer_input(), expanded(p, b));
        Tensor y = sigmoid_forward(conv2d_forward(relu_forward(z), head));
        return weighted_bce_upper(y, label, 5.0).loss;
    }

    std::pair<Tensor, Tensor> analytic(const FoldHooks& hooks) const
    {
        const Tensor in = layer_input();
        const Conv2dKernel w = expanded(packed, bias);
        Tensor z = conv2d_forward(in, w);
        Tensor a = relu_forward(z);
        Tensor y = sigmoid_forward(conv2d_forward(a, head));
        LossResult l = weighted_bce_upper(y, label, 5.0);
        ConvGrads hg = conv2d_backward(a, head, sigmoid_backward(y, l.d_pred));
        ConvGrads g = conv2d_backward(in, w, relu_backward(z, hg.d_input), false);
        Tensor dp = kind == SymKind::generating ? hooks.gen(g.d_weights) : hooks.pres(g.d_weights);
        return {dp, g.d_bias};
    }
};

GradInstance make_grad_instance(Rng& rng, SymKind kind, std::size_t L, std::size_t C, std::size_t n,
                                std::size_t F)
{
    GradInstance g{kind, C, n, F, {}, {}, {}, {}, {}};
    if (kind == SymKind::generating) {
        g.input = rng.uniform_tensor({L, n}, 1.0);
    } else {
        g.input = Tensor({L, L, n});
        for (std::size_t i = 0; i < L; ++i)
            for (std::size_t j = i; j < L; ++j)
                for (std::size_t k = 0; k < n; ++k)
                    g.input(i, j, k) = g.input(j, i, k) = rng.uniform_pm1();
    }
    g.packed = rng.uniform_tensor({tri_count(C), n, F}, 0.5);
    g.bias = rng.uniform_tensor({F}, 0.1);
    g.head = Conv2dKernel{rng.uniform_tensor({1, 1, F, 1}, 1.0), rng.uniform_tensor({1}, 0.1)};
    g.label = Tensor({L, L});
    for (std::size_t i = 0; i < L; ++i)
        for (std::size_t j = i + 1; j < L; ++j)
            g.label(i, j) = g.label(j, i) = rng.below(4) == 0 ? 1.0 : 0.0;
    return g;
}

void dump_instance(const fs::path& dir, const GradInstance& g, const Tensor& analytic, const Tensor& numeric)
{
    fs::create_directories(dir);
    save_sct1(dir / "input.sct1", g.input);
    save_sct1(dir / "packed.sct1", g.packed);
    save_sct1(dir / "bias.sct1", g.bias);
    save_sct1(dir / "head.sct1", g.head.weights);
    save_sct1(dir / "head_bias.sct1", g.head.bias);
    save_sct1(dir / "label.sct1", g.label);
    save_sct1(dir / "grad_analytic.sct1", analytic);
    save_sct1(dir / "grad_numeric.sct1", numeric);
}

} // namespace

FoldHooks::FoldHooks() : gen(fold_gen_grad), pres(fold_pres_grad) {}

int cmd_gradcheck(const Options& opt, std::ostream& log, const FoldHooks& hooks)
{
    prepare_out(opt);
    const SizeGrid grid = opt.sizes.value_or(SizeGrid{});
    Rng root(opt.seed);
    std::ostringstream rep;
    double worst[2] = {0.0, 0.0};
    int failures = 0;
    std::uint64_t index = 0;
    for (SymKind kind : {SymKind::generating, SymKind::preserving}) {
        const char* name = kind == SymKind::generating ? "generating" : "preserving";
        for_grid(grid, [&](std::size_t L, std::size_t C, std::size_t n, std::size_t F) {
            Rng rng = root.fork(index++);
            GradInstance g = make_grad_instance(rng, kind, L, C, n, F);
            auto [dp, db] = g.analytic(hooks);
            Tensor np = oracle::fd_gradient([&](const Tensor& p) { return g.loss(p, g.bias); }, g.packed, kGradSpec);
            Tensor nb = oracle::fd_gradient([&](const Tensor& b) { return g.loss(g.packed, b); }, g.bias, kGradSpec);
            const double err = std::max(oracle::gradient_error(dp, np, kGradSpec),
                                        oracle::gradient_error(db, nb, kGradSpec));
            double& w = worst[kind == SymKind::generating ? 0 : 1];
            w = std::max(w, err);
            rep << name << ' ' << grid_point(L, C, n, F) << " rel_err=" << real_text(err);
            if (err > kGradSpec.rel_tol) {
                ++failures;
                const std::string tag = std::string(name) + "_L" + std::to_string(L) + "_C" + std::to_string(C) +
                                        "_n" + std::to_string(n) + "_F" + std::to_string(F);
                dump_instance(opt.out / "gradcheck_failures" / tag, g, dp, np);
                rep << " FAIL";
            }
            rep << '\n';
        });
    }
    rep << "worst generating rel_err=" << real_text(worst[0]) << '\n';
    rep << "worst preserving rel_err=" << real_text(worst[1]) << '\n';
    rep << (failures == 0 ? "gradcheck PASS" : "gradcheck FAIL") << " (tolerance " << tol_text(kGradSpec.rel_tol)
        << ", " << failures << " failing)\n";
    write_file(opt.out / "gradcheck.txt", rep.str());
    log << rep.str();
    return failures == 0 ? kExitOk : kExitFailure;
}

int cmd_symcheck(const Options& opt, std::ostream& log)
{
    prepare_out(opt);
    const SizeGrid grid = opt.sizes.value_or(SizeGrid{});
    constexpr double kGenTol = 1e-12, kStackTol = 1e-11;
    Rng root(opt.seed);
    std::ostringstream rep;
    double worst_gen = 0.0, worst_stack = 0.0;
    bool kernels_ok = true;
    std::uint64_t index = 0;
    for_grid(grid, [&](std::size_t L, std::size_t C, std::size_t n, std::size_t F) {
        Rng rng = root.fork(index++);
        SymGenKernel g(C, n, F, rng.uniform_tensor({tri_count(C), n, F}, 1.0), rng.uniform_tensor({F}, 1.0));
        const Conv2dKernel w = expand_gen(g);
        kernels_ok = kernels_ok && is_spatially_symmetric(w.weights) && has_tied_channel_halves(w.weights);
        Tensor z = sym_gen_layer_forward(self_cartesian(rng.uniform_tensor({L, n}, 1.0)), g);
        const double gen_asym = spatial_asymmetry(z);

        // Four preserving layers with ReLU on top of the generating layer.
        Tensor h = relu_forward(z);
        for (int layer = 0; layer < 4; ++layer) {
            SymPresKernel p(C, F, F, rng.uniform_tensor({tri_count(C), F, F}, 1.0), rng.uniform_tensor({F}, 1.0));
            kernels_ok = kernels_ok && is_spatially_symmetric(expand_pres(p).weights);
            h = relu_forward(sym_pres_layer_forward(h, p, SymmetryCheck::unchecked));
        }
        const double stack_asym = spatial_asymmetry(h);
        worst_gen = std::max(worst_gen, gen_asym);
        worst_stack = std::max(worst_stack, stack_asym);
        rep << grid_point(L, C, n, F) << " generating_asym=" << real_text(gen_asym)
            << " stack_asym=" << real_text(stack_asym) << '\n';
    });
    const bool ok = kernels_ok && worst_gen <= kGenTol && worst_stack <= kStackTol;
    rep << "expanded kernels satisfy tying predicates: " << (kernels_ok ? "yes" : "no") << '\n';
    rep << "worst generating_asym=" << real_text(worst_gen) << " (tolerance " << tol_text(kGenTol) << ")\n";
    rep << "worst stack_asym=" << real_text(worst_stack) << " (tolerance " << tol_text(kStackTol) << ")\n";
    rep << (ok ? "symcheck PASS" : "symcheck FAIL") << '\n';
    write_file(opt.out / "symcheck.txt", rep.str());
    log << rep.str();
    return ok ? kExitOk : kExitFailure;
}

int cmd_packbench(const Options& opt, std::ostream& log)
{
    prepare_out(opt);
    SizeGrid grid = opt.sizes.value_or(SizeGrid{});
    if (!opt.sizes)
        grid.L = {16, 32, 64};
    constexpr double kEquivTol = 1e-12;
    using clock = std::chrono::steady_clock;
    Rng root(opt.seed);
    std::ostringstream rep;
    bool ok = true;
    std::uint64_t index = 0;
    for_grid(grid, [&](std::size_t L, std::size_t C, std::size_t n, std::size_t F) {
        if (C % 2 == 0)
            throw UsageError("packbench: kernel sizes must be odd");
        Rng rng = root.fork(index++);
        Tensor z({L, L, n});
        for (std::size_t i = 0; i < L; ++i)
            for (std::size_t j = i; j < L; ++j)
                for (std::size_t k = 0; k < n; ++k)
                    z(i, j, k) = z(j, i, k) = rng.uniform_pm1();
        SymPresKernel k(C, n, F, rng.uniform_tensor({tri_count(C), n, F}, 1.0), rng.uniform_tensor({F}, 1.0));

        MacCounter full_macs, packed_macs;
        const auto t0 = clock::now();
        Tensor full = conv2d_forward(z, expand_pres(k), &full_macs);
        const auto t1 = clock::now();
        PackedSymFeature packed = packed_sym_conv(pack(z), k, &packed_macs);
        const auto t2 = clock::now();
        const double diff = max_abs_diff(unpack(packed), full);

        Tensor x = rng.uniform_tensor({L, n}, 1.0);
        SymGenKernel g(C, n, F, rng.uniform_tensor({tri_count(C), n, F}, 1.0), rng.uniform_tensor({F}, 1.0));
        StorageStats stats;
        const double gen_diff = max_abs_diff(unpack(packed_sym_gen_conv(x, g, nullptr, &stats)),
                                             sym_gen_layer_forward(self_cartesian(x), g));

        const double storage = static_cast<double>(packed_cells(L)) / static_cast<double>(L * L);
        const double mac_ratio = static_cast<double>(packed_macs.macs) / static_cast<double>(full_macs.macs);
        const double peak = static_cast<double>(stats.peak_feature_entries) /
                            static_cast<double>(full_gen_feature_entries(L, n, F));
        const double max_diff = std::max(diff, gen_diff);
        ok = ok && max_diff <= kEquivTol;

        std::ostringstream line;
        line << grid_point(L, C, n, F) << " storage_ratio=" << real_text(storage)
             << " mac_ratio=" << real_text(mac_ratio) << " generating_peak_ratio=" << real_text(peak)
             << " max_abs_diff=" << real_text(max_diff) << '\n';
        rep << line.str();
        // Timings go to the console only so the report file stays reproducible.
        const double full_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
        const double packed_ms = std::chrono::duration<double, std::milli>(t2 - t1).count();
        char timing[128];
        std::snprintf(timing, sizeof timing, "  wall-clock full=%.3f ms packed=%.3f ms speedup=%.2fx\n", full_ms,
                      packed_ms, packed_ms > 0 ? full_ms / packed_ms : 0.0);
        log << line.str() << timing;
    });
    rep << (ok ? "packbench PASS" : "packbench FAIL") << '\n';
    write_file(opt.out / "packbench.txt", rep.str());
    log << (ok ? "packbench PASS" : "packbench FAIL") << '\n';
    return ok ? kExitOk : kExitFailure;
}

namespace {

std::string metrics_line(const char* split, const StructureMetrics& m)
{
    return std::string(split) + " ppv=" + real_text(m.ppv) + " sen=" + real_text(m.sensitivity) +
           " acc=" + real_text(m.accuracy) + '\n';
}

void save_network(const fs::path& dir, const NetworkParams& params)
{
    fs::create_directories(dir);
    for (std::size_t i = 0; i < params.layers.size(); ++i) {
        const fs::path stem = dir / ("layer" + std::to_string(i));
        std::visit(
            [&](const auto& k) {
                using K = std::decay_t<decltype(k)>;
                if constexpr (std::is_same_v<K, Conv2dKernel>) {
                    save_sct1(fs::path(stem.string() + ".sct1"), k.weights);
                    save_sct1(fs::path(stem.string() + ".bias.sct1"), k.bias);
                } else {
                    save_kernel(stem, k);
                }
            },
            params.layers[i]);
    }
}

} // namespace

int cmd_train(const Options& opt, std::ostream& log)
{
    const RunConfig cfg = resolve_config(opt);
    prepare_out(opt);
    const Dataset data = make_pairing_dataset(cfg.task);
    const TrainResult r = train(cfg.net, data);
    write_file(opt.out / "config.txt", format_run_config(cfg));
    write_epoch_csv(opt.out / "train_metrics.csv", r.history);
    write_train_summary(opt.out / "train_summary.json", cfg.net, r);
    save_network(opt.out / "kernels", r.params);

    log << "layers " << format_layers(cfg.net.layers) << '\n'
        << "trainable parameters " << r.params.trainable_count() << '\n';
    if (!r.history.empty())
        log << "final epoch loss " << real_text(r.history.back().loss) << '\n';
    log << metrics_line("train", r.train) << metrics_line("test", r.test);
    return kExitOk;
}

int cmd_compare(const Options& opt, std::ostream& log)
{
    const RunConfig cfg = resolve_config(opt);
    prepare_out(opt);
    const Dataset data = make_pairing_dataset(cfg.task);
    const NetworkConfig cnn = cnn_twin(cfg.net);
    const ComparisonReport r = compare_cnn_scnn(cnn, cfg.net, data, cfg.trials);
    write_file(opt.out / "config.txt", format_run_config(cfg));
    write_comparison(opt.out / "compare.json", r);
    for (const ModelSummary* s : {&r.cnn, &r.scnn})
        log << s->name << ": trainable=" << s->trainable_params << " kernel=" << s->kernel_params
            << " test acc=" << real_text(s->accuracy.mean) << " +- " << real_text(s->accuracy.sd)
            << " ppv=" << real_text(s->ppv.mean) << " sen=" << real_text(s->sensitivity.mean) << '\n';
    log << "kernel parameter ratio " << real_text(r.kernel_ratio) << '\n';
    return kExitOk;
}

int cmd_cartesian(const Options& opt, std::ostream& log)
{
    Tensor x;
    if (opt.input) {
        try {
            x = load_sct1(*opt.input);
        } catch (const FormatError& e) {
            throw UsageError(std::string("--input: ") + e.what());
        }
        if (x.rank() != 2)
            throw UsageError("--input must hold an L x n tensor");
    } else {
        const SizeGrid grid = opt.sizes.value_or(SizeGrid{});
        Rng rng(opt.seed);
        x = rng.uniform_tensor({grid.L.front(), grid.n.front()}, 1.0);
    }
    prepare_out(opt);
    const Tensor y = self_cartesian(x);
    save_sct1(opt.out / "cartesian_input.sct1", x);
    save_sct1(opt.out / "cartesian.sct1", y);
    const double swap = pair_swap_check(y);
    std::ostringstream rep;
    rep << "input " << shape_string(x.shape()) << " lifted " << shape_string(y.shape()) << '\n'
        << "pair_swap_check=" << real_text(swap) << '\n'
        << (swap == 0.0 ? "cartesian PASS" : "cartesian FAIL") << '\n';
    write_file(opt.out / "cartesian.txt", rep.str());
    log << rep.str();
    return swap == 0.0 ? kExitOk : kExitFailure;
}

int cmd_heatmap(const Options& opt, std::ostream& log)
{
    const RunConfig cfg = resolve_config(opt);
    prepare_out(opt);
    const Dataset data = make_pairing_dataset(cfg.task);
    const TrainResult r = train(cfg.net, data);
    const PairSample& s = data.test.empty() ? data.train.front() : data.test.front();
    const Tensor map = forward_network(cfg.net.layers, r.params, s.x).reshaped({s.length(), s.length()});
    write_matrix_csv(opt.out / "heatmap.csv", map);
    write_matrix_csv(opt.out / "heatmap_label.csv", s.label);

    const double asym = spatial_asymmetry(map);
    const bool symmetric = is_symmetric_stack(cfg.net.layers);
    std::ostringstream rep;
    rep << "sequence length " << s.length() << '\n'
        << "layers " << format_layers(cfg.net.layers) << '\n'
        << "map asymmetry=" << real_text(asym) << '\n';
    const bool ok = !symmetric || asym <= 1e-11;
    rep << (ok ? "heatmap PASS" : "heatmap FAIL: symmetric network produced an asymmetric map") << '\n';
    write_file(opt.out / "heatmap.txt", rep.str());
    log << rep.str();
    return ok ? kExitOk : kExitFailure;
}

} // namespace scnn::cli
