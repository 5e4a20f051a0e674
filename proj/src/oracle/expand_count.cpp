#include <set>

#include "scnn/oracle.hpp"

namespace scnn::oracle {

ExpandCount brute_force_expand_count(SymKind kind, std::size_t C, std::size_t channels, std::size_t F)
{
    auto count = [](const Tensor& full) {
        std::set<double> distinct(full.data().begin(), full.data().end());
        return ExpandCount{distinct.size(), full.size()};
    };
    // Entry value = 1 + flat index, so distinct packed entries stay distinct.
    if (kind == SymKind::generating) {
        SymGenKernel k(C, channels, F);
        for (std::size_t i = 0; i < k.S.size(); ++i)
            k.S[i] = static_cast<double>(i + 1);
        return count(expand_gen(k).weights);
    }
    SymPresKernel k(C, channels, F);
    for (std::size_t i = 0; i < k.R.size(); ++i)
        k.R[i] = static_cast<double>(i + 1);
    return count(expand_pres(k).weights);
}

} // namespace scnn::oracle
