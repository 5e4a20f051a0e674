#include "scnn/cli.hpp"

#include <charconv>
#include <ostream>

#include <CLI11.hpp>

namespace scnn::cli {

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos)
        return {};
    return s.substr(b, s.find_last_not_of(" \t") - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        parts.push_back(s.substr(start, pos - start));
        if (pos == std::string::npos)
            return parts;
        start = pos + 1;
    }
}

std::vector<std::size_t> parse_counts(const std::string& key, const std::string& list)
{
    std::vector<std::size_t> values;
    for (const std::string& raw : split(list, ',')) {
        const std::string item = trim(raw);
        std::size_t v = 0;
        const auto [end, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
        if (item.empty() || ec != std::errc() || end != item.data() + item.size() || v == 0)
            throw UsageError("--sizes: " + key + " needs positive integers, got '" + item + "'");
        values.push_back(v);
    }
    return values;
}

} // namespace

SizeGrid parse_sizes(const std::string& text)
{
    SizeGrid grid;
    for (const std::string& raw : split(text, ';')) {
        const std::string entry = trim(raw);
        if (entry.empty())
            continue;
        const auto eq = entry.find('=');
        if (eq == std::string::npos)
            throw UsageError("--sizes: expected key=values, got '" + entry + "'");
        const std::string key = trim(entry.substr(0, eq));
        std::vector<std::size_t> values = parse_counts(key, entry.substr(eq + 1));
        if (key == "L")
            grid.L = std::move(values);
        else if (key == "C")
            grid.C = std::move(values);
        else if (key == "n")
            grid.n = std::move(values);
        else if (key == "F")
            grid.F = std::move(values);
        else
            throw UsageError("--sizes: unknown key '" + key + "' (expected L, C, n, F)");
    }
    return grid;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Symmetric-kernel convolutions on pair tensors: checks, benchmarks and training runs", "scnn"};
    app.require_subcommand(1);

    Options opt;
    std::string config, sizes, input;
    std::string out_dir = opt.out.string();
    std::uint64_t seed = opt.seed;

    using Command = int (*)(const Options&, std::ostream&);
    const std::pair<const char*, const char*> descriptions[] = {
        {"gradcheck", "finite-difference check of packed-parameter gradients over a size grid"},
        {"symcheck", "output symmetry of generating layers and preserving stacks over a size grid"},
        {"packbench", "packed triangle storage and compute against the full path"},
        {"train", "train the configured network on the synthetic pairing task"},
        {"compare", "train the configured SCNN and its CNN twin over several seeds"},
        {"cartesian", "self-Cartesian lift of a sequence (random, or --input SCT1 file)"},
        {"heatmap", "train, then export the output map of the first test sequence as CSV"},
    };
    const Command commands[] = {[](const Options& o, std::ostream& l) { return cmd_gradcheck(o, l); },
                                cmd_symcheck, cmd_packbench, cmd_train, cmd_compare, cmd_cartesian, cmd_heatmap};

    std::vector<CLI::App*> subs;
    for (const auto& [name, description] : descriptions) {
        CLI::App* sub = app.add_subcommand(name, description);
        sub->add_option("--config", config, "key=value run configuration file");
        sub->add_option("--out", out_dir, "directory for every output file")->capture_default_str();
        sub->add_option("--seed", seed, "random seed (overrides the config seed)");
        sub->add_option("--sizes", sizes, "size grid, e.g. \"L=4,8;C=1,3;n=2,4;F=2\"");
        if (std::string(name) == "cartesian")
            sub->add_option("--input", input, "L x n SCT1 tensor to lift");
        subs.push_back(sub);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
    }

    try {
        opt.out = out_dir;
        opt.seed = seed;
        for (CLI::App* sub : subs) {
            if (!sub->parsed())
                continue;
            opt.seed_given = sub->count("--seed") > 0;
            if (sub->count("--config"))
                opt.config = config;
            if (sub->count("--sizes"))
                opt.sizes = parse_sizes(sizes);
            if (const CLI::Option* o = sub->get_option_no_throw("--input"); o && o->count() > 0)
                opt.input = input;
            for (std::size_t i = 0; i < subs.size(); ++i)
                if (subs[i] == sub)
                    return commands[i](opt, out);
        }
        return kExitUsage;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
}

} // namespace scnn::cli
