#include "cie/kernels.hpp"

#include "bipartition_detail.hpp"

#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace cie::kernels {

// Masks are scanned in per-thread chunks; the per-thread winners are merged
// in thread order. The comparator's tie band makes the final winner
// independent of the chunking, so any thread count returns the same mask.
BipartitionBest bipartition_scan(const double* slot_bits, int n) {
    const std::uint32_t n_masks = (1u << (n - 1)) - 1u;

    struct Local {
        double rate = 0.0;
        std::uint64_t key = 0;
        std::uint32_t mask = 0;
        bool have = false;
    };

#ifdef _OPENMP
    const int max_threads = omp_get_max_threads();
#else
    const int max_threads = 1;
#endif
    std::vector<Local> locals(static_cast<std::size_t>(max_threads));

#pragma omp parallel for schedule(static)
    for (std::int64_t m = 1; m <= static_cast<std::int64_t>(n_masks); ++m) {
#ifdef _OPENMP
        Local& local = locals[static_cast<std::size_t>(omp_get_thread_num())];
#else
        Local& local = locals[0];
#endif
        const auto mask = static_cast<std::uint32_t>(m);
        const double rate = detail::cross_rate(slot_bits, n, mask);
        const std::uint64_t key = detail::lex_key(mask, n);
        if (!local.have || detail::better(rate, key, local.rate, local.key)) {
            local.rate = rate;
            local.key = key;
            local.mask = mask;
            local.have = true;
        }
    }

    BipartitionBest best;
    double best_rate = 0.0;
    std::uint64_t best_key = 0;
    bool have = false;
    for (const Local& local : locals) {
        if (!local.have) continue;
        if (!have || detail::better(local.rate, local.key, best_rate, best_key)) {
            best_rate = local.rate;
            best_key = local.key;
            best.mask = local.mask;
            have = true;
        }
    }
    best.rate = best_rate;
    return best;
}

} // namespace cie::kernels
