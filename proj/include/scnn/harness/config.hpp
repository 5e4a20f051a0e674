#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "scnn/harness/synthetic.hpp"
#include "scnn/harness/train.hpp"

namespace scnn {

/// Everything a train/compare run needs, read from a flat key=value file.
///
/// Keys: layers (kind:C:F:act,...), seed, learning_rate, pos_weight,
/// weight_decay, optimizer (sgd|adam), epochs, batch_size, min_sep,
/// greedy_decode (0|1), length, alphabet, train, val, test, data_seed,
/// trials, memorize. The feature width n equals the alphabet size (one-hot).
struct RunConfig {
    NetworkConfig net;
    TaskConfig task;
    int trials = 5;
    std::size_t memorize = 20;
};

/// Defaults used when no config file is given: a three-layer SCNN on the
/// complementary pairing task.
RunConfig default_run_config();

RunConfig parse_run_config(std::istream& is);
RunConfig load_run_config(const std::filesystem::path& path);
/// Inverse of parse_run_config; keys in sorted order.
std::string format_run_config(const RunConfig& cfg);

} // namespace scnn
