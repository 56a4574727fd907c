#include "cie/kernels.hpp"

#include "life_detail.hpp"

namespace cie::kernels {

void life_step_ref(const std::uint8_t* cells, std::uint8_t* next, int w, int h,
                   bool torus) {
    for (int y = 0; y < h; ++y)
        detail::life_row(cells, next, w, h, torus, y);
}

} // namespace cie::kernels
