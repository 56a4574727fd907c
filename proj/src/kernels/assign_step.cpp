#include "cie/kernels.hpp"

#include "assign_detail.hpp"

namespace cie::kernels {

// Samples are independent, so the parallel result is identical to the
// reference for any schedule or thread count.
void assign_step(const double* features, const double* targets,
                 const double* weights, int n, int k,
                 std::int32_t* assignment_out, double* sq_residual_out) {
#pragma omp parallel for schedule(static)
    for (int s = 0; s < n; ++s)
        detail::assign_one(features, targets, weights, k, s, assignment_out,
                           sq_residual_out);
}

} // namespace cie::kernels
