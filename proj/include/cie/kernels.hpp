#pragma once

#include <cstdint>

// Data-parallel inner loops, each with an OpenMP implementation and a serial
// reference. The pairs compute identical results element-for-element (no
// floating-point reordering across elements), so tests compare them exactly
// and the benchmark target measures the speedup.

namespace cie::kernels {

// For each sample, pick the model with the smallest squared residual.
// features: n x 3 row-major, targets: n x 2 row-major,
// weights: k x 6 row-major (two rows of 3 per model).
// Writes the argmin model id (ties -> lowest id) and the winning squared
// residual per sample.
void assign_step(const double* features, const double* targets,
                 const double* weights, int n, int k,
                 std::int32_t* assignment_out, double* sq_residual_out);
void assign_step_ref(const double* features, const double* targets,
                     const double* weights, int n, int k,
                     std::int32_t* assignment_out, double* sq_residual_out);

struct BipartitionBest {
    std::uint32_t mask = 0; // bit i-1 set -> node i in block 1; node 0 pinned to block 0
    double rate = 0.0;      // mean cross-slot entropy (bits per slot)
};

// Scan all 2^(n-1)-1 nontrivial bipartitions of n nodes and return the one
// with the smallest mean per-slot cross entropy. slot_bits is the n x n
// row-major matrix of per-edge entropies (symmetric; the diagonal never
// crosses). Near-equal rates (relative 1e-12) tie-break to the
// lexicographically smallest block assignment, which makes the result
// independent of scan order and thread count.
BipartitionBest bipartition_scan(const double* slot_bits, int n);
BipartitionBest bipartition_scan_ref(const double* slot_bits, int n);

// One generation of the Life rules over a w x h grid (row-major, 0/1).
// torus selects wraparound neighbors; otherwise cells outside are dead.
void life_step(const std::uint8_t* cells, std::uint8_t* next, int w, int h,
               bool torus);
void life_step_ref(const std::uint8_t* cells, std::uint8_t* next, int w, int h,
                   bool torus);

} // namespace cie::kernels
