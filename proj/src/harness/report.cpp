#include "scnn/harness/report.hpp"

#include <cstdio>
#include <fstream>

#include <json.hpp>

namespace scnn {

std::string real_text(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

std::ofstream open_out(const std::filesystem::path& path)
{
    std::ofstream os(path);
    if (!os)
        throw FormatError("cannot open " + path.string() + " for writing");
    return os;
}

nlohmann::ordered_json metrics_json(const StructureMetrics& m)
{
    return {{"ppv", m.ppv}, {"sen", m.sensitivity}, {"acc", m.accuracy},
            {"tp", m.tp},   {"fp", m.fp},           {"fn", m.fn},       {"tn", m.tn}};
}

nlohmann::ordered_json summary_json(const ModelSummary& s)
{
    nlohmann::ordered_json trials = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < s.test_trials.size(); ++i)
        trials.push_back({{"test", metrics_json(s.test_trials[i])}, {"train", metrics_json(s.train_trials[i])}});
    return {{"layers", s.layers},
            {"trainable_params", s.trainable_params},
            {"kernel_params", s.kernel_params},
            {"test_ppv", {{"mean", s.ppv.mean}, {"sd", s.ppv.sd}}},
            {"test_sen", {{"mean", s.sensitivity.mean}, {"sd", s.sensitivity.sd}}},
            {"test_acc", {{"mean", s.accuracy.mean}, {"sd", s.accuracy.sd}}},
            {"train_acc", {{"mean", s.train_accuracy.mean}, {"sd", s.train_accuracy.sd}}},
            {"trials", trials}};
}

} // namespace

void write_epoch_csv(const std::filesystem::path& path, std::span<const EpochRecord> history)
{
    auto os = open_out(path);
    os << "epoch,loss,ppv,sen,acc\n";
    for (const auto& r : history)
        os << r.epoch << ',' << real_text(r.loss) << ',' << real_text(r.metrics.ppv) << ','
           << real_text(r.metrics.sensitivity) << ',' << real_text(r.metrics.accuracy) << '\n';
}

void write_train_summary(const std::filesystem::path& path, const NetworkConfig& cfg, const TrainResult& result)
{
    nlohmann::ordered_json j = {
        {"layers", format_layers(cfg.layers)},
        {"seed", cfg.seed},
        {"epochs", cfg.epochs},
        {"trainable_params", result.params.trainable_count()},
        {"kernel_params", result.params.kernel_count()},
        {"final_loss", result.history.empty() ? 0.0 : result.history.back().loss},
        {"train", metrics_json(result.train)},
        {"val", metrics_json(result.val)},
        {"test", metrics_json(result.test)},
    };
    auto os = open_out(path);
    os << j.dump(2) << '\n';
}

void write_comparison(const std::filesystem::path& path, const ComparisonReport& report)
{
    nlohmann::ordered_json j = {
        {"seeds", report.seeds},
        {"kernel_ratio", report.kernel_ratio},
        {"cnn", summary_json(report.cnn)},
        {"scnn", summary_json(report.scnn)},
    };
    auto os = open_out(path);
    os << j.dump(2) << '\n';
}

void write_matrix_csv(const std::filesystem::path& path, const Tensor& map)
{
    if (map.rank() < 2 || map.extent(0) != map.extent(1) || map.size() != map.extent(0) * map.extent(0))
        throw ShapeError("write_matrix_csv: expected an L x L map");
    const std::size_t L = map.extent(0);
    auto os = open_out(path);
    for (std::size_t i = 0; i < L; ++i) {
        for (std::size_t j = 0; j < L; ++j)
            os << (j ? "," : "") << real_text(map[i * L + j]);
        os << '\n';
    }
}

} // namespace scnn
