// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "scnn/cartesian.hpp"
#include "scnn/cli.hpp"
#include "scnn/harness/compare.hpp"
#include "scnn/harness/config.hpp"
#include "scnn/harness/optim.hpp"
#include "scnn/harness/train.hpp"
#include "scnn/oracle.hpp"
#include "scnn/packed.hpp"

using namespace scnn;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
    bool pass;
    std::string detail;
};

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

Tensor random_symmetric(Rng& rng, std::size_t L, std::size_t c)
{
    Tensor z({L, L, c});
    for (std::size_t i = 0; i < L; ++i)
        for (std::size_t j = i; j < L; ++j)
            for (std::size_t k = 0; k < c; ++k)
                z(i, j, k) = z(j, i, k) = rng.uniform_pm1();
    return z;
}

std::size_t pick(Rng& rng, std::size_t lo, std::size_t hi)
{
    return lo + static_cast<std::size_t>(rng.below(hi - lo + 1));
}

// 1. Generating layers give symmetric outputs.
Outcome generating_symmetry()
{
    const auto t0 = Clock::now();
    Rng rng(101);
    const std::size_t sizes[] = {1, 3, 5};
    int count = 0;
    double worst = 0.0;
    for (int rep = 0; rep < 80; ++rep)
        for (std::size_t C : sizes) {
            const std::size_t L = pick(rng, 1, 10), n = pick(rng, 1, 4), F = pick(rng, 1, 4);
            SymGenKernel k(C, n, F, rng.uniform_tensor({tri_count(C), n, F}, 1.0), rng.uniform_tensor({F}, 1.0));
            Tensor out = sym_gen_layer_forward(self_cartesian(rng.uniform_tensor({L, n}, 1.0)), k);
            worst = std::max(worst, spatial_asymmetry(out));
            ++count;
        }
    const double secs = seconds_since(t0);
    return {count >= 200 && worst <= 1e-12 && secs < 10.0,
            std::to_string(count) + " instances, max asymmetry " + fmt("%.3g", worst) + " (<= 1e-12), " +
                fmt("%.2f", secs) + " s (< 10 s)"};
}

// 2. Stacks of preserving layers with ReLU keep symmetric inputs symmetric.
Outcome preservation()
{
    const auto t0 = Clock::now();
    Rng rng(202);
    int count = 0;
    double worst = 0.0;
    for (int inst = 0; inst < 120; ++inst) {
        const std::size_t L = pick(rng, 1, 12), depth = 1 + inst % 4;
        std::size_t c = pick(rng, 1, 4);
        Tensor h = random_symmetric(rng, L, c);
        for (std::size_t d = 0; d < depth; ++d) {
            const std::size_t C = 2 * pick(rng, 0, 2) + 1, F = pick(rng, 1, 4);
            SymPresKernel k(C, c, F, rng.uniform_tensor({tri_count(C), c, F}, 1.0), rng.uniform_tensor({F}, 1.0));
            h = relu_forward(sym_pres_layer_forward(h, k, SymmetryCheck::unchecked));
            c = F;
        }
        worst = std::max(worst, spatial_asymmetry(h));
        ++count;
    }
    const double secs = seconds_since(t0);
    return {count >= 100 && worst <= 1e-11 && secs < 10.0,
            std::to_string(count) + " instances up to 4 layers deep, max asymmetry " + fmt("%.3g", worst) +
                " (<= 1e-11), " + fmt("%.2f", secs) + " s (< 10 s)"};
}

// 3. Packed gradients of whole networks against central differences.
Outcome gradients()
{
    const auto t0 = Clock::now();
    const oracle::FdSpec spec{1e-6, 1e-5, 1e-8};
    Rng rng(303);
    int count = 0;
    double worst = 0.0;
    for (int inst = 0; inst < 60; ++inst) {
        const std::size_t L = pick(rng, 3, 8), n = pick(rng, 1, 4);
        std::vector<LayerSpec> layers;
        const std::size_t depth = 1 + inst % 3;
        for (std::size_t d = 0; d < depth; ++d) {
            const bool last = d + 1 == depth;
            layers.push_back({d == 0 ? LayerKind::sym_generating : LayerKind::sym_preserving,
                              2 * pick(rng, 0, 2) + 1, last ? 1 : pick(rng, 1, 4),
                              last ? Activation::sigmoid : Activation::relu});
        }
        NetworkConfig cfg;
        cfg.layers = layers;
        cfg.n = n;
        cfg.min_sep = pick(rng, 1, 2);
        Rng init = rng.fork(static_cast<std::uint64_t>(inst));
        NetworkParams params = init_network(layers, n, init);
        for (Tensor* t : params.tensors())
            *t = rng.uniform_tensor(t->shape(), 0.5);
        Tensor x = rng.uniform_tensor({L, n}, 1.0);
        Tensor label({L, L, 1});
        for (std::size_t i = 0; i < L; ++i)
            for (std::size_t j = i + 1; j < L; ++j)
                label(i, j, 0) = label(j, i, 0) = rng.below(3) == 0 ? 1.0 : 0.0;
        const std::size_t valid = inst % 4 == 3 ? L - 1 : L;

        SampleLoss analytic = sample_loss_and_grads(cfg, params, x, label, valid);
        std::vector<Tensor*> tensors = params.tensors();
        for (std::size_t t = 0; t < tensors.size(); ++t) {
            const Tensor saved = *tensors[t];
            auto loss = [&](const Tensor& p) {
                *tensors[t] = p;
                const double v = sample_loss_and_grads(cfg, params, x, label, valid).loss;
                *tensors[t] = saved;
                return v;
            };
            worst = std::max(worst, oracle::gradient_error(analytic.grads[t], oracle::fd_gradient(loss, saved, spec), spec));
        }
        ++count;
    }
    const double secs = seconds_since(t0);
    return {count >= 50 && worst <= 1e-5 && secs < 60.0,
            std::to_string(count) + " lift->conv->ReLU->sigmoid->weighted-BCE networks, max rel err " +
                fmt("%.3g", worst) + " (<= 1e-5), " + fmt("%.2f", secs) + " s (< 60 s)"};
}

bool network_tied(const NetworkParams& params)
{
    bool ok = true;
    for (const auto& layer : params.layers) {
        if (const auto* g = std::get_if<SymGenKernel>(&layer)) {
            const Tensor w = expand_gen(*g).weights;
            ok = ok && is_spatially_symmetric(w) && has_tied_channel_halves(w);
        } else if (const auto* p = std::get_if<SymPresKernel>(&layer)) {
            ok = ok && is_spatially_symmetric(expand_pres(*p).weights);
        }
    }
    return ok;
}

// 4. Optimizer steps on packed parameters keep the expanded kernels tied.
Outcome closure()
{
    const auto t0 = Clock::now();
    const RunConfig base = default_run_config();
    TaskConfig task = base.task;
    task.length = 16;
    task.n_train = 10;
    task.n_test = 0;
    const Dataset data = make_pairing_dataset(task);
    bool ok = true;
    double moved = 0.0;
    for (OptimizerKind opt : {OptimizerKind::sgd, OptimizerKind::adam}) {
        NetworkConfig cfg = base.net;
        Rng rng(404);
        NetworkParams params = init_network(cfg.layers, cfg.n, rng);
        const NetworkParams start = params;
        AdamState adam;
        for (int step = 0; step < 100; ++step) {
            const PairSample& s = data.train[step % data.train.size()];
            SampleLoss sl = sample_loss_and_grads(cfg, params, s.x, s.label, s.length());
            std::vector<Tensor*> p = params.tensors();
            if (opt == OptimizerKind::sgd)
                sgd_step(p, sl.grads, 0.05, 1e-5);
            else
                adam_step(adam, p, sl.grads, 1e-2, 1e-5);
        }
        ok = ok && network_tied(params);
        const auto before = start.tensors();
        const auto after = params.tensors();
        for (std::size_t t = 0; t < after.size(); ++t)
            moved = std::max(moved, max_abs_diff(*before[t], *after[t]));
    }
    const double secs = seconds_since(t0);
    return {ok && moved > 0.0 && secs < 30.0,
            "100 SGD and 100 Adam steps, expanded kernels exactly tied: " + std::string(ok ? "yes" : "no") +
                ", max parameter change " + fmt("%.3g", moved) + ", " + fmt("%.2f", secs) + " s (< 30 s)"};
}

// 5. Stored parameter counts, and SCNN vs CNN totals.
Outcome counts()
{
    int checked = 0;
    bool ok = true;
    for (std::size_t C : {1, 3, 5})
        for (std::size_t ch = 1; ch <= 4; ++ch)
            for (std::size_t F = 1; F <= 4; ++F) {
                const std::size_t formula = C * (C + 1) * ch * F / 2;
                const auto g = oracle::brute_force_expand_count(SymKind::generating, C, ch, F);
                const auto p = oracle::brute_force_expand_count(SymKind::preserving, C, ch, F);
                ok = ok && SymGenKernel(C, ch, F).stored_count() == formula && g.stored == formula;
                ok = ok && SymPresKernel(C, ch, F).stored_count() == formula && p.stored == formula;
                checked += 2;
            }
    const NetworkConfig scnn = default_run_config().net;
    Rng r1(1), r2(1);
    const std::size_t s = init_network(scnn.layers, scnn.n, r1).trainable_count();
    const std::size_t c = init_network(cnn_twin(scnn).layers, scnn.n, r2).trainable_count();
    ok = ok && s < c;
    return {ok, std::to_string(checked) + " kernel shapes match C(C+1)nF/2 by enumeration; default SCNN " +
                    std::to_string(s) + " vs CNN twin " + std::to_string(c) + " trainable parameters"};
}

// 6. Packed triangle convolution: equivalence, storage and MACs.
Outcome packed_savings()
{
    Rng rng(606);
    int count = 0;
    double worst = 0.0;
    for (int inst = 0; inst < 120; ++inst) {
        const std::size_t L = pick(rng, 1, 20), m = pick(rng, 1, 4), F = pick(rng, 1, 4);
        const std::size_t C = 2 * pick(rng, 0, 2) + 1;
        Tensor z = random_symmetric(rng, L, m);
        SymPresKernel k(C, m, F, rng.uniform_tensor({tri_count(C), m, F}, 1.0), rng.uniform_tensor({F}, 1.0));
        worst = std::max(worst, max_abs_diff(unpack(packed_sym_conv(pack(z), k)), sym_pres_layer_forward(z, k)));
        ++count;
    }
    bool storage_exact = true;
    for (std::size_t L = 1; L <= 256; ++L) {
        // packed/full == (L+1)/(2L)  <=>  2L * packed == (L+1) * full, in integers.
        const std::size_t packed = PackedSymFeature(L, 1).data().size();
        storage_exact = storage_exact && 2 * L * packed == (L + 1) * L * L;
    }
    double worst_mac = 0.0;
    for (std::size_t L : {32, 48, 64})
        for (std::size_t C : {1, 3, 5}) {
            Tensor z = random_symmetric(rng, L, 2);
            SymPresKernel k(C, 2, 2, rng.uniform_tensor({tri_count(C), 2, 2}, 1.0), rng.uniform_tensor({2}, 1.0));
            MacCounter full, tri;
            conv2d_forward(z, expand_pres(k), &full);
            packed_sym_conv(pack(z), k, &tri);
            worst_mac = std::max(worst_mac, static_cast<double>(tri.macs) / static_cast<double>(full.macs));
        }
    return {count >= 100 && worst <= 1e-12 && storage_exact && worst_mac <= 0.55,
            std::to_string(count) + " instances, max diff " + fmt("%.3g", worst) + " (<= 1e-12); storage ratio " +
                "(L+1)/(2L) exact for L=1..256: " + (storage_exact ? "yes" : "no") + "; max MAC ratio at L>=32 " +
                fmt("%.4f", worst_mac) + " (<= 0.55)"};
}

// 7. CNN vs SCNN on the complementary pairing task.
Outcome comparison()
{
    const auto t0 = Clock::now();
    const RunConfig cfg = default_run_config();
    const Dataset data = make_pairing_dataset(cfg.task);
    const NetworkConfig cnn = cnn_twin(cfg.net);
    const ComparisonReport r = compare_cnn_scnn(cnn, cfg.net, data, cfg.trials);

    Dataset memo;
    memo.train.assign(data.train.begin(), data.train.begin() + static_cast<std::ptrdiff_t>(cfg.memorize));
    // Twenty sequences give two updates per epoch, so memorization runs longer.
    NetworkConfig memo_net = cfg.net;
    memo_net.epochs = 100;
    const double memo_scnn = train(memo_net, memo).train.accuracy;
    const double memo_cnn = train(cnn_twin(memo_net), memo).train.accuracy;
    const double secs = seconds_since(t0);

    const bool ok = cfg.task.length == 30 && cfg.task.alphabet == 4 && data.train.size() == 200 &&
                    data.test.size() == 50 && r.seeds.size() == 5 && cfg.memorize == 20 &&
                    r.scnn.accuracy.mean >= r.cnn.accuracy.mean - 0.02 && r.kernel_ratio <= 0.7 &&
                    memo_scnn >= 0.9 && memo_cnn >= 0.9 && secs < 600.0;
    return {ok, "5 seeds: SCNN test acc " + fmt("%.4f", r.scnn.accuracy.mean) + " vs CNN " +
                    fmt("%.4f", r.cnn.accuracy.mean) + " (>= CNN - 0.02); kernel ratio " +
                    fmt("%.4f", r.kernel_ratio) + " (<= 0.7); memorization train acc SCNN " +
                    fmt("%.4f", memo_scnn) + ", CNN " + fmt("%.4f", memo_cnn) + " (>= 0.9); " + fmt("%.1f", secs) +
                    " s (< 600 s)"};
}

std::map<std::string, std::string> read_tree(const fs::path& dir)
{
    std::map<std::string, std::string> files;
    for (const auto& e : fs::recursive_directory_iterator(dir))
        if (e.is_regular_file()) {
            std::ifstream is(e.path(), std::ios::binary);
            std::ostringstream ss;
            ss << is.rdbuf();
            files[fs::relative(e.path(), dir).string()] = ss.str();
        }
    return files;
}

// 8. Every subcommand writes byte-identical reports when repeated.
Outcome determinism()
{
    const fs::path base = fs::temp_directory_path() / "scnn_acceptance_cli";
    fs::remove_all(base);
    fs::create_directories(base);
    const fs::path cfg = base / "run.cfg";
    std::ofstream(cfg) << "layers=gen:1:8:relu,pres:3:6:relu,pres:1:1:sigmoid\n"
                          "length=16\ntrain=24\ntest=6\nepochs=4\ntrials=2\n";
    const std::vector<std::vector<std::string>> commands = {
        {"gradcheck"}, {"symcheck"}, {"packbench"}, {"cartesian"},
        {"train", "--config", cfg.string()}, {"compare", "--config", cfg.string()},
        {"heatmap", "--config", cfg.string()},
    };
    int identical = 0;
    std::string failed;
    for (const auto& cmd : commands) {
        std::map<std::string, std::string> runs[2];
        bool ran = true;
        for (int k = 0; k < 2; ++k) {
            const fs::path out = base / (cmd.front() + std::to_string(k));
            std::vector<std::string> args{"scnn"};
            args.insert(args.end(), cmd.begin(), cmd.end());
            args.insert(args.end(), {"--seed", "7", "--out", out.string()});
            std::vector<const char*> argv;
            for (const auto& a : args)
                argv.push_back(a.c_str());
            std::ostringstream sink;
            ran = ran && cli::run(static_cast<int>(argv.size()), argv.data(), sink, sink) == cli::kExitOk;
            if (ran)
                runs[k] = read_tree(out);
        }
        if (ran && !runs[0].empty() && runs[0] == runs[1])
            ++identical;
        else
            failed += " " + cmd.front();
    }
    fs::remove_all(base);
    const int total = static_cast<int>(commands.size());
    return {identical == total, std::to_string(identical) + "/" + std::to_string(total) +
                                    " subcommands produced byte-identical report files" +
                                    (failed.empty() ? "" : "; differing:" + failed)};
}

} // namespace

int main()
{
    const std::pair<const char*, std::function<Outcome()>> criteria[] = {
        {"generating-layer output symmetry", generating_symmetry},
        {"symmetry preservation through stacks", preservation},
        {"packed gradients vs finite differences", gradients},
        {"closure under SGD and Adam", closure},
        {"parameter counts", counts},
        {"packed equivalence and savings", packed_savings},
        {"CNN vs SCNN pairing experiment", comparison},
        {"CLI determinism", determinism},
    };
    int failures = 0;
    int index = 0;
    for (const auto& [name, run] : criteria) {
        ++index;
        Outcome o{false, ""};
        try {
            o = run();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        failures += o.pass ? 0 : 1;
        std::printf("[%s] %d %s: %s\n", o.pass ? "PASS" : "FAIL", index, name, o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%d criteria passed\n", index - failures, index);
    return failures == 0 ? 0 : 1;
}
