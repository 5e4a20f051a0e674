#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "scnn/harness/train.hpp"

namespace scnn {

struct MeanSd {
    double mean = 0.0;
    double sd = 0.0;
};

/// Mean and sample standard deviation (0 for fewer than two values).
MeanSd mean_sd(const std::vector<double>& values);

struct ModelSummary {
    std::string name;
    std::string layers;
    std::size_t trainable_params = 0;
    std::size_t kernel_params = 0;
    std::vector<StructureMetrics> test_trials;
    std::vector<StructureMetrics> train_trials;
    MeanSd ppv;
    MeanSd sensitivity;
    MeanSd accuracy;
    MeanSd train_accuracy;
};

struct ComparisonReport {
    ModelSummary cnn;
    ModelSummary scnn;
    std::vector<std::uint64_t> seeds;
    double kernel_ratio = 0.0; // scnn / cnn kernel parameters
};

/// The CNN twin of a symmetric stack: same kernel sizes, channels and
/// activations, every layer standard.
NetworkConfig cnn_twin(const NetworkConfig& scnn);

/// Trains both hyperparameter-matched models once per trial with seeds
/// cnn.seed + t, t = 0..trials-1. Throws ConfigError unless the two
/// configs differ only in layer kind and scnn is a symmetric stack with
/// strictly fewer trainable parameters.
ComparisonReport compare_cnn_scnn(const NetworkConfig& cnn, const NetworkConfig& scnn, const Dataset& data,
                                  int trials);

} // namespace scnn
