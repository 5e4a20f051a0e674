#pragma once

#include <filesystem>
#include <span>
#include <string>

#include "scnn/harness/compare.hpp"
#include "scnn/harness/train.hpp"

namespace scnn {

/// Fixed-width decimal text with 17 significant digits (round-trips doubles).
std::string real_text(double v);

/// Header "epoch,loss,ppv,sen,acc", one row per epoch.
void write_epoch_csv(const std::filesystem::path& path, std::span<const EpochRecord> history);

/// Final train/val/test metrics plus parameter counts, as JSON.
void write_train_summary(const std::filesystem::path& path, const NetworkConfig& cfg, const TrainResult& result);

void write_comparison(const std::filesystem::path& path, const ComparisonReport& report);

/// L rows of L comma-separated values.
void write_matrix_csv(const std::filesystem::path& path, const Tensor& map);

} // namespace scnn
