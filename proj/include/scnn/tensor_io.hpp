#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>

#include "scnn/tensor.hpp"

namespace scnn {

// SCT1 layout: "SCT1", u32 LE rank, rank x u64 LE extents, f64 LE data.

void write_sct1(std::ostream& os, const Tensor& t);
Tensor read_sct1(std::istream& is);

void save_sct1(const std::filesystem::path& path, const Tensor& t);
Tensor load_sct1(const std::filesystem::path& path);

/// Flat text sidecar: one key=value per line, keys written in sorted order.
using Sidecar = std::map<std::string, std::string>;

void save_sidecar(const std::filesystem::path& path, const Sidecar& kv);
Sidecar load_sidecar(const std::filesystem::path& path);
/// Parses key=value lines; '#' starts a comment, blank lines are skipped.
Sidecar parse_key_values(std::istream& is);

} // namespace scnn
