#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "scnn/rng.hpp"
#include "scnn/tensor.hpp"

namespace scnn {

/// Unordered token pairs that may bond.
struct PairingRule {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;

    bool allows(std::size_t a, std::size_t b) const;

    static PairingRule never() { return {}; }
    /// Token k pairs with alphabet_size - 1 - k (A-U and C-G for A,C,G,U).
    static PairingRule complementary(std::size_t alphabet_size);
};

struct PairSample {
    std::vector<std::size_t> tokens;
    Tensor x;     // L x alphabet one-hot
    Tensor label; // L x L binary, symmetric, zero diagonal
    std::size_t length() const { return tokens.size(); }
};

/// Builds the one-hot features and the pairing label for a given token sequence.
PairSample make_pair_sample(std::vector<std::size_t> tokens, std::size_t alphabet_size, const PairingRule& rule,
                            std::size_t min_sep);

/// Uniform random tokens; label[i,j] = 1 iff the rule pairs tokens i and j and |i - j| >= min_sep.
PairSample gen_synthetic_pairing(Rng& rng, std::size_t L, std::size_t alphabet_size, const PairingRule& rule,
                                 std::size_t min_sep);

struct Dataset {
    std::vector<PairSample> train;
    std::vector<PairSample> val;
    std::vector<PairSample> test;
};

struct TaskConfig {
    std::size_t length = 30;
    std::size_t alphabet = 4;
    std::size_t n_train = 200;
    std::size_t n_val = 0;
    std::size_t n_test = 50;
    std::size_t min_sep = 3;
    std::uint64_t seed = 1;
};

/// Complementary-pairing splits drawn from independent streams of task.seed.
Dataset make_pairing_dataset(const TaskConfig& task);

} // namespace scnn
