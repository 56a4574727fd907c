#include "cie/kernels.hpp"

#include "assign_detail.hpp"

namespace cie::kernels {

void assign_step_ref(const double* features, const double* targets,
                     const double* weights, int n, int k,
                     std::int32_t* assignment_out, double* sq_residual_out) {
    for (int s = 0; s < n; ++s)
        detail::assign_one(features, targets, weights, k, s, assignment_out,
                           sq_residual_out);
}

} // namespace cie::kernels
