#pragma once

#include <utility>

// Generic zoom-in/zoom-out driver: alternate a macro model X inferred from
// the current encoding Y (zoom_out) with a re-encoding Y derived from X
// (zoom_in) until X stops changing between consecutive iterations.

namespace cie {

template <typename X, typename Y>
struct ZizoOutcome {
    X x{};
    Y y{};
    bool converged = false;
    int iterations = 0; // completed (zoom_out, zoom_in) rounds
};

template <typename X, typename Y, typename ZoomOut, typename ZoomIn, typename Eq>
ZizoOutcome<X, Y> zizo(ZoomOut&& zoom_out, ZoomIn&& zoom_in, Y y0, int max_iters,
                       Eq&& equal) {
    ZizoOutcome<X, Y> out;
    out.y = std::move(y0);
    bool have_prev = false;
    for (int i = 1; i <= max_iters; ++i) {
        X x = zoom_out(out.y);
        if (have_prev && equal(x, out.x)) {
            out.x = std::move(x);
            out.converged = true;
            break;
        }
        out.x = std::move(x);
        have_prev = true;
        out.y = zoom_in(out.x);
        out.iterations = i;
    }
    return out;
}

} // namespace cie
