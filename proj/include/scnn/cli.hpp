#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "scnn/error.hpp"
#include "scnn/tensor.hpp"

namespace scnn::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Bad flags or flag values.
class UsageError : public Error {
public:
    using Error::Error;
};

/// Grid from a string such as "L=4,8;C=1,3;n=2,4;F=2". Keys missing from
/// the string keep their defaults.
struct SizeGrid {
    std::vector<std::size_t> L{4, 8};
    std::vector<std::size_t> C{1, 3};
    std::vector<std::size_t> n{2, 4};
    std::vector<std::size_t> F{2};
};

SizeGrid parse_sizes(const std::string& text);

struct Options {
    std::optional<std::filesystem::path> config;
    std::filesystem::path out = "scnn_out";
    std::uint64_t seed = 1;
    bool seed_given = false;
    std::optional<SizeGrid> sizes;
    std::optional<std::filesystem::path> input;
};

/// Fold functions used by gradcheck; replaceable so tests can inject faults.
struct FoldHooks {
    std::function<Tensor(const Tensor&)> gen;
    std::function<Tensor(const Tensor&)> pres;
    FoldHooks();
};

int cmd_gradcheck(const Options& opt, std::ostream& log, const FoldHooks& hooks = {});
int cmd_symcheck(const Options& opt, std::ostream& log);
int cmd_packbench(const Options& opt, std::ostream& log);
int cmd_train(const Options& opt, std::ostream& log);
int cmd_compare(const Options& opt, std::ostream& log);
int cmd_cartesian(const Options& opt, std::ostream& log);
int cmd_heatmap(const Options& opt, std::ostream& log);

/// Parses argv, dispatches, and maps errors onto exit codes:
/// 0 success, 1 assertion or numeric failure, 2 usage error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace scnn::cli
