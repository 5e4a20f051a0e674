#include "scnn/harness/compare.hpp"

#include <cmath>
#include <exception>

namespace scnn {

MeanSd mean_sd(const std::vector<double>& values)
{
    MeanSd r;
    if (values.empty())
        return r;
    for (double v : values)
        r.mean += v;
    r.mean /= static_cast<double>(values.size());
    if (values.size() < 2)
        return r;
    double ss = 0.0;
    for (double v : values)
        ss += (v - r.mean) * (v - r.mean);
    r.sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
    return r;
}

NetworkConfig cnn_twin(const NetworkConfig& scnn)
{
    NetworkConfig cnn = scnn;
    for (auto& l : cnn.layers)
        l.kind = LayerKind::standard;
    return cnn;
}

namespace {

void require_matched(const NetworkConfig& cnn, const NetworkConfig& scnn)
{
    if (is_symmetric_stack(cnn.layers) || !is_symmetric_stack(scnn.layers))
        throw ConfigError("compare: expects a standard CNN and a symmetric SCNN");
    if (cnn.layers.size() != scnn.layers.size())
        throw ConfigError("compare: architectures differ in depth");
    for (std::size_t i = 0; i < cnn.layers.size(); ++i) {
        const auto& a = cnn.layers[i];
        const auto& b = scnn.layers[i];
        if (a.C != b.C || a.F != b.F || a.act != b.act)
            throw ConfigError("compare: layer " + std::to_string(i) + " differs beyond its kind");
    }
    if (scnn.n != cnn.n || scnn.learning_rate != cnn.learning_rate || scnn.pos_weight != cnn.pos_weight ||
        scnn.weight_decay != cnn.weight_decay || scnn.optimizer != cnn.optimizer || scnn.epochs != cnn.epochs ||
        scnn.batch_size != cnn.batch_size || scnn.min_sep != cnn.min_sep || scnn.seed != cnn.seed ||
        scnn.greedy_decode != cnn.greedy_decode)
        throw ConfigError("compare: configs differ in training hyperparameters");
}

ModelSummary summarize(const std::string& name, const NetworkConfig& cfg)
{
    ModelSummary s;
    s.name = name;
    s.layers = format_layers(cfg.layers);
    Rng rng(cfg.seed);
    const NetworkParams p = init_network(cfg.layers, cfg.n, rng);
    s.trainable_params = p.trainable_count();
    s.kernel_params = p.kernel_count();
    return s;
}

void finish(ModelSummary& s)
{
    std::vector<double> ppv, sen, acc, tr;
    for (const auto& m : s.test_trials) {
        ppv.push_back(m.ppv);
        sen.push_back(m.sensitivity);
        acc.push_back(m.accuracy);
    }
    for (const auto& m : s.train_trials)
        tr.push_back(m.accuracy);
    s.ppv = mean_sd(ppv);
    s.sensitivity = mean_sd(sen);
    s.accuracy = mean_sd(acc);
    s.train_accuracy = mean_sd(tr);
}

} // namespace

ComparisonReport compare_cnn_scnn(const NetworkConfig& cnn, const NetworkConfig& scnn, const Dataset& data,
                                  int trials)
{
    require_matched(cnn, scnn);
    cnn.validate();
    scnn.validate();
    if (trials < 1)
        throw ConfigError("compare: need at least one trial");

    ComparisonReport report;
    report.cnn = summarize("cnn", cnn);
    report.scnn = summarize("scnn", scnn);
    if (report.scnn.trainable_params >= report.cnn.trainable_params)
        throw ConfigError("compare: SCNN must have fewer trainable parameters than its CNN twin");
    report.kernel_ratio =
        static_cast<double>(report.scnn.kernel_params) / static_cast<double>(report.cnn.kernel_params);

    for (int t = 0; t < trials; ++t)
        report.seeds.push_back(cnn.seed + static_cast<std::uint64_t>(t));

    // Runs are independent (own config copy, own Rng); results land in fixed slots.
    const std::ptrdiff_t runs = 2 * static_cast<std::ptrdiff_t>(trials);
    std::vector<TrainResult> results(static_cast<std::size_t>(runs));
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t r = 0; r < runs; ++r) {
        try {
            NetworkConfig cfg = (r % 2 == 0) ? cnn : scnn;
            cfg.seed = report.seeds[static_cast<std::size_t>(r / 2)];
            results[static_cast<std::size_t>(r)] = train(cfg, data);
        } catch (...) {
#pragma omp critical
            failure = std::current_exception();
        }
    }
    if (failure)
        std::rethrow_exception(failure);

    for (int t = 0; t < trials; ++t) {
        const auto& c = results[2 * static_cast<std::size_t>(t)];
        const auto& s = results[2 * static_cast<std::size_t>(t) + 1];
        report.cnn.test_trials.push_back(c.test);
        report.cnn.train_trials.push_back(c.train);
        report.scnn.test_trials.push_back(s.test);
        report.scnn.train_trials.push_back(s.train);
    }
    finish(report.cnn);
    finish(report.scnn);
    return report;
}

} // namespace scnn
