#include "cie/kernels.hpp"

#include "life_detail.hpp"

namespace cie::kernels {

void life_step(const std::uint8_t* cells, std::uint8_t* next, int w, int h,
               bool torus) {
#pragma omp parallel for schedule(static)
    for (int y = 0; y < h; ++y)
        detail::life_row(cells, next, w, h, torus, y);
}

} // namespace cie::kernels
