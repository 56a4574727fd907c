#pragma once

#include "cie/kernels.hpp"

#include <cmath>
#include <cstdint>

namespace cie::kernels::detail {

// mean cross-slot entropy of the bipartition encoded by mask
// (bit i-1 = node i in block 1, node 0 always block 0)
inline double cross_rate(const double* slot_bits, int n, std::uint32_t mask) {
    double sum = 0.0;
    int count = 0;
    for (int i = 0; i < n; ++i) {
        const bool side_i = i > 0 && ((mask >> (i - 1)) & 1u);
        for (int j = i + 1; j < n; ++j) {
            const bool side_j = (mask >> (j - 1)) & 1u;
            if (side_i != side_j) {
                sum += slot_bits[i * n + j];
                ++count;
            }
        }
    }
    return sum / static_cast<double>(count); // every nontrivial split crosses
}

// lexicographic key of the block assignment (node 1 bit most significant)
inline std::uint64_t lex_key(std::uint32_t mask, int n) {
    std::uint64_t key = 0;
    for (int i = 1; i < n; ++i)
        key = (key << 1) | ((mask >> (i - 1)) & 1u);
    return key;
}

// Total order used by the scan: strictly smaller rate wins; rates within a
// relative 1e-12 band count as ties and fall back to the smallest lex key.
// Rate clusters are separated either by ulps (genuine ties) or by amounts
// far above the band, so the winner does not depend on visit order.
inline bool better(double rate_a, std::uint64_t key_a, double rate_b,
                   std::uint64_t key_b) {
    const double tol =
        1e-12 * (1.0 + (std::abs(rate_a) < std::abs(rate_b) ? std::abs(rate_b)
                                                            : std::abs(rate_a)));
    if (rate_a < rate_b - tol) return true;
    if (rate_a > rate_b + tol) return false;
    return key_a < key_b;
}

} // namespace cie::kernels::detail
