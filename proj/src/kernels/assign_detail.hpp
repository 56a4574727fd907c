#pragma once

#include <cstdint>

// per-sample argmin shared by the OpenMP kernel and the serial reference

namespace cie::kernels::detail {

inline void assign_one(const double* features, const double* targets,
                       const double* weights, int k, int s,
                       std::int32_t* assignment_out, double* sq_residual_out) {
    const double* f = features + 3 * s;
    const double* y = targets + 2 * s;
    std::int32_t best = 0;
    double best_r = 0.0;
    for (int m = 0; m < k; ++m) {
        const double* w = weights + 6 * m;
        const double ex = y[0] - (w[0] * f[0] + w[1] * f[1] + w[2] * f[2]);
        const double ey = y[1] - (w[3] * f[0] + w[4] * f[1] + w[5] * f[2]);
        const double r = ex * ex + ey * ey;
        if (m == 0 || r < best_r) {
            best = m;
            best_r = r;
        }
    }
    assignment_out[s] = best;
    sq_residual_out[s] = best_r;
}

} // namespace cie::kernels::detail
