#include "scnn/harness/train.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>

#include "scnn/harness/optim.hpp"

namespace scnn {

void NetworkConfig::validate() const
{
    validate_layers(layers);
    if (n == 0)
        throw ConfigError("feature width n must be positive");
    if (!(learning_rate > 0.0))
        throw ConfigError("learning_rate must be positive");
    if (!(pos_weight > 0.0))
        throw ConfigError("pos_weight must be positive");
    if (weight_decay < 0.0)
        throw ConfigError("weight_decay must be non-negative");
    if (epochs < 0)
        throw ConfigError("epochs must be non-negative");
    if (batch_size == 0)
        throw ConfigError("batch_size must be positive");
}

PaddedBatch pad_batch(std::span<const PairSample* const> samples)
{
    PaddedBatch b;
    for (const PairSample* s : samples)
        b.padded_length = std::max(b.padded_length, s->length());
    const std::size_t L0 = b.padded_length;
    for (const PairSample* s : samples) {
        const std::size_t L = s->length();
        const std::size_t n = s->x.extent(1);
        Tensor x({L0, n});
        Tensor y({L0, L0});
        std::copy_n(s->x.raw(), L * n, x.raw());
        for (std::size_t i = 0; i < L; ++i)
            std::copy_n(s->label.raw() + i * L, L, y.raw() + i * L0);
        b.x.push_back(std::move(x));
        b.label.push_back(std::move(y));
        b.length.push_back(L);
    }
    return b;
}

SampleLoss sample_loss_and_grads(const NetworkConfig& cfg, const NetworkParams& params, const Tensor& x,
                                 const Tensor& label, std::size_t valid_len)
{
    ForwardState state;
    Tensor pred = forward_network(cfg.layers, params, x, valid_len, &state);
    LossResult lr = weighted_bce_upper(pred, label, cfg.pos_weight, cfg.min_sep, valid_len);
    return {lr.loss, backward_network(cfg.layers, state, lr.d_pred), std::move(pred)};
}

StructureMetrics evaluate(const NetworkConfig& cfg, const NetworkParams& params, std::span<const PairSample> samples)
{
    std::vector<StructureMetrics> per(samples.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(samples.size()); ++i) {
        const Tensor pred = forward_network(cfg.layers, params, samples[i].x);
        per[i] = evaluate_pairs(pred, samples[i].label, cfg.min_sep, std::nullopt, cfg.greedy_decode);
    }
    StructureMetrics total;
    for (const auto& m : per)
        total += m;
    total.finalize();
    return total;
}

TrainResult train(const NetworkConfig& cfg, const Dataset& data)
{
    cfg.validate();
    if (data.train.empty())
        throw ConfigError("training split is empty");
    for (const auto& s : data.train)
        if (s.x.extent(1) != cfg.n)
            throw ConfigError("sample feature width does not match config n");

    const Rng root(cfg.seed);
    Rng init_rng = root.fork(1);
    TrainResult result;
    result.params = init_network(cfg.layers, cfg.n, init_rng);
    std::vector<Tensor*> params = result.params.tensors();
    AdamState adam;

    std::vector<std::size_t> order(data.train.size());
    for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
        Rng shuffle = root.fork(1000 + static_cast<std::uint64_t>(epoch));
        std::iota(order.begin(), order.end(), std::size_t{0});
        for (std::size_t i = order.size(); i > 1; --i)
            std::swap(order[i - 1], order[shuffle.below(i)]);

        EpochRecord rec{epoch, 0.0, {}};
        for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
            const std::size_t stop = std::min(order.size(), start + cfg.batch_size);
            std::vector<const PairSample*> members;
            for (std::size_t i = start; i < stop; ++i)
                members.push_back(&data.train[order[i]]);
            const PaddedBatch batch = pad_batch(members);

            // Members run in parallel; the reduction below is serial and in
            // member order, so the update is identical for any thread count.
            std::vector<SampleLoss> out(members.size());
            std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 1)
            for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(members.size()); ++b) {
                try {
                    out[b] = sample_loss_and_grads(cfg, result.params, batch.x[b], batch.label[b], batch.length[b]);
                } catch (...) {
#pragma omp critical
                    failure = std::current_exception();
                }
            }
            if (failure) {
                try {
                    std::rethrow_exception(failure);
                } catch (const DomainError& e) {
                    // Non-finite activations reach the loss as out-of-range probabilities.
                    throw TrainingError("loss diverged in epoch " + std::to_string(epoch) + ": " + e.what(), epoch);
                }
            }

            std::vector<Tensor> grads = out.front().grads;
            for (std::size_t b = 1; b < out.size(); ++b)
                for (std::size_t t = 0; t < grads.size(); ++t)
                    grads[t] += out[b].grads[t];
            const double scale = 1.0 / static_cast<double>(out.size());
            for (auto& g : grads)
                g *= scale;

            for (std::size_t b = 0; b < out.size(); ++b) {
                if (!std::isfinite(out[b].loss))
                    throw TrainingError("loss diverged in epoch " + std::to_string(epoch), epoch);
                rec.loss += out[b].loss;
                rec.metrics += evaluate_pairs(out[b].pred, batch.label[b], cfg.min_sep, batch.length[b],
                                              cfg.greedy_decode);
            }

            if (cfg.optimizer == OptimizerKind::adam)
                adam_step(adam, params, grads, cfg.learning_rate, cfg.weight_decay);
            else
                sgd_step(params, grads, cfg.learning_rate, cfg.weight_decay);
        }
        rec.loss /= static_cast<double>(order.size());
        rec.metrics.finalize();
        if (!std::isfinite(rec.loss))
            throw TrainingError("loss diverged in epoch " + std::to_string(epoch), epoch);
        result.history.push_back(rec);
    }

    result.train = evaluate(cfg, result.params, data.train);
    result.val = evaluate(cfg, result.params, data.val);
    result.test = evaluate(cfg, result.params, data.test);
    return result;
}

} // namespace scnn
