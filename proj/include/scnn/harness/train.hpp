#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "scnn/harness/metrics.hpp"
#include "scnn/harness/network.hpp"
#include "scnn/harness/synthetic.hpp"
#include "scnn/loss.hpp"

namespace scnn {

enum class OptimizerKind { sgd, adam };

struct NetworkConfig {
    std::vector<LayerSpec> layers;
    std::size_t n = 4;
    std::uint64_t seed = 1;
    double learning_rate = 2e-3;
    double pos_weight = 5.0;
    double weight_decay = 0.0;
    OptimizerKind optimizer = OptimizerKind::adam;
    int epochs = 10;
    std::size_t batch_size = 10;
    std::size_t min_sep = 1;
    bool greedy_decode = false;

    /// Throws ConfigError on invalid values or an invalid layer stack.
    void validate() const;
};

struct EpochRecord {
    int epoch = 0;
    double loss = 0.0;
    StructureMetrics metrics;
};

struct TrainResult {
    NetworkParams params;
    std::vector<EpochRecord> history;
    StructureMetrics train;
    StructureMetrics val;
    StructureMetrics test;
};

/// Samples zero-padded to a common length, with their true lengths.
struct PaddedBatch {
    std::vector<Tensor> x;
    std::vector<Tensor> label;
    std::vector<std::size_t> length;
    std::size_t padded_length = 0;
};

PaddedBatch pad_batch(std::span<const PairSample* const> samples);

struct SampleLoss {
    double loss = 0.0;
    std::vector<Tensor> grads;
    Tensor pred;
};

/// Forward, loss over the valid upper triangle, and backward for one
/// (possibly padded) sample.
SampleLoss sample_loss_and_grads(const NetworkConfig& cfg, const NetworkParams& params, const Tensor& x,
                                 const Tensor& label, std::size_t valid_len);

/// Metrics of each sample evaluated at its own length, aggregated over the split.
StructureMetrics evaluate(const NetworkConfig& cfg, const NetworkParams& params, std::span<const PairSample> samples);

/// Mini-batch training. Deterministic given cfg.seed: initialization and
/// per-epoch shuffles draw from independent forks of one Rng. Throws
/// TrainingError when the loss stops being finite.
TrainResult train(const NetworkConfig& cfg, const Dataset& data);

} // namespace scnn
