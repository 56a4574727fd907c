#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

// Game of Life engine with macro-object extraction: 8-connected clusters are
// tracked across frames and classified as still lifes, oscillators, or
// movers, and a ZIZO demo binds the extractor to a frame renderer.

namespace cie::life {

enum class Topology { torus, bounded };

class LifeGrid {
public:
    LifeGrid(int width, int height, Topology topo = Topology::torus);

    int width() const { return width_; }
    int height() const { return height_; }
    Topology topology() const { return topo_; }

    std::uint8_t at(int x, int y) const {
        return cells_[static_cast<std::size_t>(y) * width_ + x];
    }
    void set(int x, int y, std::uint8_t v) {
        cells_[static_cast<std::size_t>(y) * width_ + x] = v;
    }
    const std::vector<std::uint8_t>& cells() const { return cells_; }
    std::vector<std::uint8_t>& cells() { return cells_; }
    int population() const;

    bool operator==(const LifeGrid&) const = default;

private:
    int width_, height_;
    Topology topo_;
    std::vector<std::uint8_t> cells_;
};

// one generation of the rules; parallel kernel with a serial reference
LifeGrid life_step(const LifeGrid& g);
LifeGrid life_step_ref(const LifeGrid& g);

// whole-grid translation with wraparound (used by the commutation property)
LifeGrid translate(const LifeGrid& g, int dx, int dy);

struct Cell {
    int x = 0, y = 0;
    auto operator<=>(const Cell&) const = default;
};

enum class MacroKind { still_life, oscillator, mover, unknown };

const char* to_string(MacroKind kind);

struct MacroObject {
    MacroKind kind = MacroKind::unknown;
    std::vector<Cell> cells; // footprint at the reference (first) frame, sorted
    int period = 0;          // 0 while unknown
    int dx = 0, dy = 0;      // displacement per period
    int first_frame = 0;

    bool operator==(const MacroObject&) const = default;
};

// Label 8-connected live clusters per frame, track them by best-overlap
// translation (>= 50% of the larger footprint), and classify each clean
// track. Tracks that merge or split are reported unknown rather than
// guessed. Needs at least max_period + 1 frames.
std::vector<MacroObject> extract_objects(const std::vector<LifeGrid>& frames,
                                         int max_period);

struct ZizoState {
    std::vector<MacroObject> macro_model;  // X
    std::vector<LifeGrid> micro_frames;    // Y: re-rendered frames
    bool converged = false;
    int iterations = 0;
};

// ZIZO bound to Life: zoom_out = extract_objects over the frame window,
// zoom_in = stamp each macro object's footprint on an empty grid and replay
// the rules to regenerate the window.
ZizoState zizo_life_demo(const std::vector<LifeGrid>& frames, int max_period,
                         int max_iters = 8);

// '.'/'#' rows
LifeGrid grid_from_text(const std::string& text, Topology topo = Topology::torus);
std::string grid_to_text(const LifeGrid& g);

// run-length-encoded pattern files (b/o/$ runs, '!' terminator); the pattern
// is centered on a grid_w x grid_h grid (0 = fit the pattern with a margin)
LifeGrid grid_from_rle(const std::string& text, Topology topo = Topology::torus,
                       int grid_w = 0, int grid_h = 0);

LifeGrid load_pattern(const std::string& path, Topology topo = Topology::torus,
                      int grid_w = 0, int grid_h = 0);

} // namespace cie::life
