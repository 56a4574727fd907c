#pragma once

#include <cstdint>

namespace cie::kernels::detail {

inline void life_row(const std::uint8_t* cells, std::uint8_t* next, int w,
                     int h, bool torus, int y) {
    for (int x = 0; x < w; ++x) {
        int live = 0;
        for (int dy = -1; dy <= 1; ++dy) {
            const int ny = y + dy;
            for (int dx = -1; dx <= 1; ++dx) {
                if (dx == 0 && dy == 0) continue;
                int nx = x + dx;
                if (torus) {
                    nx = nx < 0 ? w - 1 : (nx >= w ? 0 : nx);
                    const int wy = ny < 0 ? h - 1 : (ny >= h ? 0 : ny);
                    live += cells[wy * w + nx];
                } else {
                    if (nx < 0 || nx >= w || ny < 0 || ny >= h) continue;
                    live += cells[ny * w + nx];
                }
            }
        }
        const std::uint8_t alive = cells[y * w + x];
        // live cell survives on 2 or 3 neighbors; dead cell born on exactly 3
        next[y * w + x] =
            alive ? static_cast<std::uint8_t>(live == 2 || live == 3)
                  : static_cast<std::uint8_t>(live == 3);
    }
}

} // namespace cie::kernels::detail
