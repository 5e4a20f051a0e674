#include "scnn/harness/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "scnn/harness/report.hpp"
#include "scnn/tensor_io.hpp"

namespace scnn {

RunConfig default_run_config()
{
    RunConfig cfg;
    cfg.net.layers = parse_layers("sym_generating:1:12:relu,sym_preserving:3:8:relu,sym_preserving:1:1:sigmoid");
    cfg.net.n = cfg.task.alphabet;
    cfg.net.seed = 1;
    cfg.net.learning_rate = 1e-2;
    cfg.net.pos_weight = 5.0;
    cfg.net.epochs = 30;
    cfg.net.batch_size = 10;
    cfg.net.min_sep = cfg.task.min_sep;
    return cfg;
}

namespace {

std::size_t as_count(const std::string& key, const std::string& v)
{
    try {
        std::size_t used = 0;
        const unsigned long long x = std::stoull(v, &used);
        if (used != v.size())
            throw std::invalid_argument(v);
        return static_cast<std::size_t>(x);
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': expected a non-negative integer, got '" + v + "'");
    }
}

double as_real(const std::string& key, const std::string& v)
{
    try {
        std::size_t used = 0;
        const double x = std::stod(v, &used);
        if (used != v.size())
            throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': expected a number, got '" + v + "'");
    }
}

} // namespace

RunConfig parse_run_config(std::istream& is)
{
    Sidecar kv;
    try {
        kv = parse_key_values(is);
    } catch (const FormatError& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    RunConfig cfg = default_run_config();
    for (const auto& [key, v] : kv) {
        if (key == "layers")
            cfg.net.layers = parse_layers(v);
        else if (key == "seed")
            cfg.net.seed = as_count(key, v);
        else if (key == "learning_rate")
            cfg.net.learning_rate = as_real(key, v);
        else if (key == "pos_weight")
            cfg.net.pos_weight = as_real(key, v);
        else if (key == "weight_decay")
            cfg.net.weight_decay = as_real(key, v);
        else if (key == "optimizer") {
            if (v == "sgd")
                cfg.net.optimizer = OptimizerKind::sgd;
            else if (v == "adam")
                cfg.net.optimizer = OptimizerKind::adam;
            else
                throw ConfigError("config key 'optimizer': expected sgd or adam");
        } else if (key == "epochs")
            cfg.net.epochs = static_cast<int>(as_count(key, v));
        else if (key == "batch_size")
            cfg.net.batch_size = as_count(key, v);
        else if (key == "min_sep")
            cfg.net.min_sep = cfg.task.min_sep = as_count(key, v);
        else if (key == "greedy_decode")
            cfg.net.greedy_decode = as_count(key, v) != 0;
        else if (key == "length")
            cfg.task.length = as_count(key, v);
        else if (key == "alphabet")
            cfg.task.alphabet = as_count(key, v);
        else if (key == "train")
            cfg.task.n_train = as_count(key, v);
        else if (key == "val")
            cfg.task.n_val = as_count(key, v);
        else if (key == "test")
            cfg.task.n_test = as_count(key, v);
        else if (key == "data_seed")
            cfg.task.seed = as_count(key, v);
        else if (key == "trials")
            cfg.trials = static_cast<int>(as_count(key, v));
        else if (key == "memorize")
            cfg.memorize = as_count(key, v);
        else
            throw ConfigError("unknown config key '" + key + "'");
    }
    cfg.net.n = cfg.task.alphabet;
    if (cfg.task.length < 2)
        throw ConfigError("length must be at least 2");
    if (cfg.task.alphabet < 2)
        throw ConfigError("alphabet must have at least 2 tokens");
    cfg.net.validate();
    return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path)
{
    std::ifstream is(path);
    if (!is)
        throw ConfigError("cannot open config " + path.string());
    return parse_run_config(is);
}

std::string format_run_config(const RunConfig& cfg)
{
    Sidecar kv{
        {"alphabet", std::to_string(cfg.task.alphabet)},
        {"batch_size", std::to_string(cfg.net.batch_size)},
        {"data_seed", std::to_string(cfg.task.seed)},
        {"epochs", std::to_string(cfg.net.epochs)},
        {"greedy_decode", cfg.net.greedy_decode ? "1" : "0"},
        {"layers", format_layers(cfg.net.layers)},
        {"learning_rate", real_text(cfg.net.learning_rate)},
        {"length", std::to_string(cfg.task.length)},
        {"memorize", std::to_string(cfg.memorize)},
        {"min_sep", std::to_string(cfg.net.min_sep)},
        {"optimizer", cfg.net.optimizer == OptimizerKind::adam ? "adam" : "sgd"},
        {"pos_weight", real_text(cfg.net.pos_weight)},
        {"seed", std::to_string(cfg.net.seed)},
        {"test", std::to_string(cfg.task.n_test)},
        {"train", std::to_string(cfg.task.n_train)},
        {"trials", std::to_string(cfg.trials)},
        {"val", std::to_string(cfg.task.n_val)},
        {"weight_decay", real_text(cfg.net.weight_decay)},
    };
    std::ostringstream os;
    for (const auto& [k, v] : kv)
        os << k << '=' << v << '\n';
    return os.str();
}

} // namespace scnn
