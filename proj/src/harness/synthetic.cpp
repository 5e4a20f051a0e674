#include "scnn/harness/synthetic.hpp"

#include "scnn/error.hpp"

namespace scnn {

bool PairingRule::allows(std::size_t a, std::size_t b) const
{
    for (const auto& [p, q] : pairs)
        if ((p == a && q == b) || (p == b && q == a))
            return true;
    return false;
}

PairingRule PairingRule::complementary(std::size_t alphabet_size)
{
    PairingRule rule;
    for (std::size_t k = 0; k < alphabet_size / 2; ++k)
        rule.pairs.emplace_back(k, alphabet_size - 1 - k);
    return rule;
}

PairSample make_pair_sample(std::vector<std::size_t> tokens, std::size_t alphabet_size, const PairingRule& rule,
                            std::size_t min_sep)
{
    const std::size_t L = tokens.size();
    if (L == 0 || alphabet_size == 0)
        throw ConfigError("pair sample needs a non-empty sequence and alphabet");
    PairSample s{std::move(tokens), Tensor({L, alphabet_size}), Tensor({L, L})};
    for (std::size_t i = 0; i < L; ++i) {
        if (s.tokens[i] >= alphabet_size)
            throw ConfigError("token outside alphabet");
        s.x(i, s.tokens[i]) = 1.0;
    }
    for (std::size_t i = 0; i < L; ++i)
        for (std::size_t j = 0; j < L; ++j) {
            const std::size_t sep = i > j ? i - j : j - i;
            if (i != j && sep >= min_sep && rule.allows(s.tokens[i], s.tokens[j]))
                s.label(i, j) = 1.0;
        }
    return s;
}

PairSample gen_synthetic_pairing(Rng& rng, std::size_t L, std::size_t alphabet_size, const PairingRule& rule,
                                 std::size_t min_sep)
{
    if (L < 2)
        throw ConfigError("synthetic pairing needs L >= 2");
    std::vector<std::size_t> tokens(L);
    for (auto& t : tokens)
        t = rng.below(alphabet_size);
    return make_pair_sample(std::move(tokens), alphabet_size, rule, min_sep);
}

Dataset make_pairing_dataset(const TaskConfig& task)
{
    const Rng root(task.seed);
    const PairingRule rule = PairingRule::complementary(task.alphabet);
    auto split = [&](std::uint64_t stream, std::size_t count) {
        Rng rng = root.fork(stream);
        std::vector<PairSample> out;
        out.reserve(count);
        for (std::size_t i = 0; i < count; ++i)
            out.push_back(gen_synthetic_pairing(rng, task.length, task.alphabet, rule, task.min_sep));
        return out;
    };
    return Dataset{split(1, task.n_train), split(2, task.n_val), split(3, task.n_test)};
}

} // namespace scnn
