#include "cie/kernels.hpp"

#include "bipartition_detail.hpp"

namespace cie::kernels {

BipartitionBest bipartition_scan_ref(const double* slot_bits, int n) {
    const std::uint32_t n_masks = (1u << (n - 1)) - 1u;
    BipartitionBest best;
    double best_rate = 0.0;
    std::uint64_t best_key = 0;
    bool have = false;
    for (std::uint32_t mask = 1; mask <= n_masks; ++mask) {
        const double rate = detail::cross_rate(slot_bits, n, mask);
        const std::uint64_t key = detail::lex_key(mask, n);
        if (!have || detail::better(rate, key, best_rate, best_key)) {
            best_rate = rate;
            best_key = key;
            best.mask = mask;
            have = true;
        }
    }
    best.rate = best_rate;
    return best;
}

} // namespace cie::kernels
