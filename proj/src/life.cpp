#include "cie/life.hpp"

#include "cie/kernels.hpp"
#include "cie/zizo.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <numeric>
#include <queue>
#include <sstream>
#include <stdexcept>

namespace cie::life {

LifeGrid::LifeGrid(int width, int height, Topology topo)
    : width_(width), height_(height), topo_(topo),
      cells_(static_cast<std::size_t>(width) * height, 0) {
    if (width < 1 || height < 1)
        throw std::invalid_argument("life grid: dimensions must be >= 1");
}

int LifeGrid::population() const {
    return std::accumulate(cells_.begin(), cells_.end(), 0);
}

LifeGrid life_step(const LifeGrid& g) {
    LifeGrid next(g.width(), g.height(), g.topology());
    kernels::life_step(g.cells().data(), next.cells().data(), g.width(),
                       g.height(), g.topology() == Topology::torus);
    return next;
}

LifeGrid life_step_ref(const LifeGrid& g) {
    LifeGrid next(g.width(), g.height(), g.topology());
    kernels::life_step_ref(g.cells().data(), next.cells().data(), g.width(),
                           g.height(), g.topology() == Topology::torus);
    return next;
}

LifeGrid translate(const LifeGrid& g, int dx, int dy) {
    const int w = g.width(), h = g.height();
    LifeGrid out(w, h, g.topology());
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (!g.at(x, y)) continue;
            const int nx = ((x + dx) % w + w) % w;
            const int ny = ((y + dy) % h + h) % h;
            out.set(nx, ny, 1);
        }
    }
    return out;
}

const char* to_string(MacroKind kind) {
    switch (kind) {
    case MacroKind::still_life: return "still-life";
    case MacroKind::oscillator: return "oscillator";
    case MacroKind::mover: return "mover";
    default: return "unknown";
    }
}

namespace {

using Footprint = std::vector<Cell>; // sorted

std::vector<Footprint> label_clusters(const LifeGrid& g) {
    const int w = g.width(), h = g.height();
    const bool torus = g.topology() == Topology::torus;
    std::vector<char> seen(static_cast<std::size_t>(w) * h, 0);
    std::vector<Footprint> clusters;

    for (int y0 = 0; y0 < h; ++y0) {
        for (int x0 = 0; x0 < w; ++x0) {
            if (!g.at(x0, y0) || seen[static_cast<std::size_t>(y0) * w + x0]) continue;
            Footprint fp;
            std::queue<Cell> frontier;
            frontier.push({x0, y0});
            seen[static_cast<std::size_t>(y0) * w + x0] = 1;
            while (!frontier.empty()) {
                const Cell c = frontier.front();
                frontier.pop();
                fp.push_back(c);
                for (int dy = -1; dy <= 1; ++dy) {
                    for (int dx = -1; dx <= 1; ++dx) {
                        if (dx == 0 && dy == 0) continue;
                        int nx = c.x + dx, ny = c.y + dy;
                        if (torus) {
                            nx = (nx + w) % w;
                            ny = (ny + h) % h;
                        } else if (nx < 0 || nx >= w || ny < 0 || ny >= h) {
                            continue;
                        }
                        if (g.at(nx, ny) &&
                            !seen[static_cast<std::size_t>(ny) * w + nx]) {
                            seen[static_cast<std::size_t>(ny) * w + nx] = 1;
                            frontier.push({nx, ny});
                        }
                    }
                }
            }
            std::sort(fp.begin(), fp.end());
            clusters.push_back(std::move(fp));
        }
    }
    std::sort(clusters.begin(), clusters.end());
    return clusters;
}

Cell wrap_cell(Cell c, int w, int h, bool torus) {
    if (torus) {
        c.x = (c.x % w + w) % w;
        c.y = (c.y % h + h) % h;
    }
    return c;
}

// translate the footprint by d and compare as a set
bool equal_translated(const Footprint& a, const Footprint& b, int dx, int dy,
                      int w, int h, bool torus) {
    if (a.size() != b.size()) return false;
    Footprint moved;
    moved.reserve(a.size());
    for (Cell c : a) {
        Cell m{c.x + dx, c.y + dy};
        if (!torus && (m.x < 0 || m.x >= w || m.y < 0 || m.y >= h)) return false;
        moved.push_back(wrap_cell(m, w, h, torus));
    }
    std::sort(moved.begin(), moved.end());
    return moved == b;
}

int overlap_translated(const Footprint& a, const Footprint& b, int dx, int dy,
                       int w, int h, bool torus) {
    int count = 0;
    for (Cell c : a) {
        Cell m{c.x + dx, c.y + dy};
        if (!torus && (m.x < 0 || m.x >= w || m.y < 0 || m.y >= h)) continue;
        m = wrap_cell(m, w, h, torus);
        if (std::binary_search(b.begin(), b.end(), m)) ++count;
    }
    return count;
}

// canonical displacement on a torus: congruent value closest to zero
int canon_shift(int d, int span, bool torus) {
    if (!torus) return d;
    d = (d % span + span) % span;
    if (d > span / 2) d -= span;
    return d;
}

struct Track {
    std::vector<int> frame;
    std::vector<Footprint> footprints;
    bool ambiguous = false;
};

} // namespace

std::vector<MacroObject> extract_objects(const std::vector<LifeGrid>& frames,
                                         int max_period) {
    if (max_period < 1)
        throw std::invalid_argument("extract_objects: max_period must be >= 1");
    if (static_cast<int>(frames.size()) < max_period + 1)
        throw std::invalid_argument("extract_objects: need at least max_period+1 = " +
                                    std::to_string(max_period + 1) + " frames");
    const int w = frames.front().width(), h = frames.front().height();
    const bool torus = frames.front().topology() == Topology::torus;
    for (const LifeGrid& f : frames)
        if (f.width() != w || f.height() != h)
            throw std::invalid_argument("extract_objects: frames differ in size");

    std::vector<std::vector<Footprint>> clusters;
    clusters.reserve(frames.size());
    for (const LifeGrid& f : frames) clusters.push_back(label_clusters(f));

    // open tracks indexed by the cluster they ended on in the previous frame
    std::vector<Track> tracks;
    std::vector<int> open; // track id per cluster of the previous frame
    for (std::size_t c = 0; c < clusters[0].size(); ++c) {
        Track t;
        t.frame.push_back(0);
        t.footprints.push_back(clusters[0][c]);
        tracks.push_back(std::move(t));
        open.push_back(static_cast<int>(tracks.size()) - 1);
    }

    const int search = 2; // per-frame drift of desk-scale patterns
    for (std::size_t f = 1; f < frames.size(); ++f) {
        const auto& prev = clusters[f - 1];
        const auto& cur = clusters[f];

        // best displacement per (prev, cur) pair, then keep qualifying edges
        std::vector<std::vector<int>> out_edges(prev.size());
        std::vector<std::vector<int>> in_edges(cur.size());
        for (std::size_t a = 0; a < prev.size(); ++a) {
            for (std::size_t b = 0; b < cur.size(); ++b) {
                int best_overlap = 0;
                for (int dy = -search; dy <= search; ++dy)
                    for (int dx = -search; dx <= search; ++dx)
                        best_overlap = std::max(
                            best_overlap, overlap_translated(prev[a], cur[b], dx,
                                                             dy, w, h, torus));
                const int need = static_cast<int>(
                    (std::max(prev[a].size(), cur[b].size()) + 1) / 2);
                if (best_overlap >= need) {
                    out_edges[a].push_back(static_cast<int>(b));
                    in_edges[b].push_back(static_cast<int>(a));
                }
            }
        }

        std::vector<int> next_open(cur.size(), -1);
        for (std::size_t a = 0; a < prev.size(); ++a) {
            Track& t = tracks[static_cast<std::size_t>(open[a])];
            if (out_edges[a].size() != 1) {
                if (!out_edges[a].empty()) t.ambiguous = true; // split
                continue;                                      // track ends
            }
            const int b = out_edges[a][0];
            if (in_edges[static_cast<std::size_t>(b)].size() != 1) {
                t.ambiguous = true; // merge
                continue;
            }
            t.frame.push_back(static_cast<int>(f));
            t.footprints.push_back(cur[static_cast<std::size_t>(b)]);
            next_open[static_cast<std::size_t>(b)] = open[a];
        }
        for (std::size_t b = 0; b < cur.size(); ++b) {
            if (next_open[b] >= 0) continue;
            if (in_edges[b].size() > 1) {
                // merged cluster starts a fresh ambiguous track
                Track t;
                t.frame.push_back(static_cast<int>(f));
                t.footprints.push_back(cur[b]);
                t.ambiguous = true;
                tracks.push_back(std::move(t));
            } else {
                Track t;
                t.frame.push_back(static_cast<int>(f));
                t.footprints.push_back(cur[b]);
                tracks.push_back(std::move(t));
            }
            next_open[b] = static_cast<int>(tracks.size()) - 1;
        }
        open = std::move(next_open);
    }

    std::vector<MacroObject> objects;
    for (const Track& t : tracks) {
        MacroObject obj;
        obj.first_frame = t.frame.front();
        obj.cells = t.footprints.front();
        if (!t.ambiguous) {
            const int len = static_cast<int>(t.footprints.size());
            for (int p = 1; p <= max_period && obj.period == 0; ++p) {
                if (len < p + 1) break;
                // candidate displacements from the first (t, t+p) pair
                std::vector<std::pair<int, int>> candidates;
                const Footprint& f0 = t.footprints[0];
                const Footprint& fp = t.footprints[static_cast<std::size_t>(p)];
                if (f0.size() != fp.size()) continue;
                for (const Cell& c : fp) {
                    const int dx = canon_shift(c.x - f0.front().x, w, torus);
                    const int dy = canon_shift(c.y - f0.front().y, h, torus);
                    if (equal_translated(f0, fp, dx, dy, w, h, torus))
                        candidates.emplace_back(dx, dy);
                }
                std::sort(candidates.begin(), candidates.end(),
                          [](const auto& a, const auto& b) {
                              const int ma = std::abs(a.first) + std::abs(a.second);
                              const int mb = std::abs(b.first) + std::abs(b.second);
                              return ma != mb ? ma < mb : a < b;
                          });
                candidates.erase(std::unique(candidates.begin(), candidates.end()),
                                 candidates.end());
                for (const auto& [dx, dy] : candidates) {
                    bool consistent = true;
                    for (int s = 0; s + p < len && consistent; ++s)
                        consistent = equal_translated(
                            t.footprints[static_cast<std::size_t>(s)],
                            t.footprints[static_cast<std::size_t>(s + p)], dx, dy,
                            w, h, torus);
                    if (consistent) {
                        obj.period = p;
                        obj.dx = dx;
                        obj.dy = dy;
                        break;
                    }
                }
            }
        }
        if (obj.period == 0) {
            obj.kind = MacroKind::unknown;
        } else if (obj.dx == 0 && obj.dy == 0) {
            obj.kind = obj.period == 1 ? MacroKind::still_life : MacroKind::oscillator;
        } else {
            obj.kind = MacroKind::mover;
        }
        objects.push_back(std::move(obj));
    }

    std::sort(objects.begin(), objects.end(),
              [](const MacroObject& a, const MacroObject& b) {
                  if (a.first_frame != b.first_frame)
                      return a.first_frame < b.first_frame;
                  return a.cells < b.cells;
              });
    return objects;
}

ZizoState zizo_life_demo(const std::vector<LifeGrid>& frames, int max_period,
                         int max_iters) {
    if (frames.empty())
        throw std::invalid_argument("zizo_life_demo: no frames");
    const int w = frames.front().width(), h = frames.front().height();
    const Topology topo = frames.front().topology();
    const std::size_t n_frames = frames.size();

    using X = std::vector<MacroObject>;
    using Y = std::vector<LifeGrid>;

    auto zoom_out = [max_period](const Y& y) { return extract_objects(y, max_period); };
    auto zoom_in = [&](const X& x) {
        LifeGrid g(w, h, topo);
        for (const MacroObject& obj : x)
            for (const Cell& c : obj.cells) g.set(c.x, c.y, 1);
        Y out;
        out.reserve(n_frames);
        out.push_back(g);
        for (std::size_t i = 1; i < n_frames; ++i) {
            g = life_step(g);
            out.push_back(g);
        }
        return out;
    };

    const auto outcome = zizo<X, Y>(zoom_out, zoom_in, frames, max_iters,
                                    [](const X& a, const X& b) { return a == b; });
    ZizoState state;
    state.macro_model = outcome.x;
    state.micro_frames = outcome.y;
    state.converged = outcome.converged;
    state.iterations = outcome.iterations;
    return state;
}

LifeGrid grid_from_text(const std::string& text, Topology topo) {
    std::istringstream in(text);
    std::string line;
    std::vector<std::string> rows;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        rows.push_back(line);
    }
    if (rows.empty())
        throw std::invalid_argument("life pattern: empty grid text");
    const std::size_t w = rows.front().size();
    for (const std::string& r : rows)
        if (r.size() != w)
            throw std::invalid_argument("life pattern: ragged rows in grid text");

    LifeGrid g(static_cast<int>(w), static_cast<int>(rows.size()), topo);
    for (std::size_t y = 0; y < rows.size(); ++y) {
        for (std::size_t x = 0; x < w; ++x) {
            const char c = rows[y][x];
            if (c == '#')
                g.set(static_cast<int>(x), static_cast<int>(y), 1);
            else if (c != '.')
                throw std::invalid_argument(
                    std::string("life pattern: unexpected character '") + c + "'");
        }
    }
    return g;
}

std::string grid_to_text(const LifeGrid& g) {
    std::string out;
    out.reserve(static_cast<std::size_t>(g.height()) * (g.width() + 1));
    for (int y = 0; y < g.height(); ++y) {
        for (int x = 0; x < g.width(); ++x) out += g.at(x, y) ? '#' : '.';
        out += '\n';
    }
    return out;
}

LifeGrid grid_from_rle(const std::string& text, Topology topo, int grid_w,
                       int grid_h) {
    std::istringstream in(text);
    std::string line, body;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (line.find('=') != std::string::npos && body.empty() &&
            (line[0] == 'x' || line[0] == 'X'))
            continue; // header; pattern extent is recomputed from the body
        body += line;
    }

    std::vector<Cell> cells;
    int x = 0, y = 0, run = 0;
    bool done = false;
    for (char c : body) {
        if (done) break;
        if (std::isdigit(static_cast<unsigned char>(c))) {
            run = run * 10 + (c - '0');
        } else if (c == 'b') {
            x += run ? run : 1;
            run = 0;
        } else if (c == 'o') {
            const int r = run ? run : 1;
            for (int i = 0; i < r; ++i) cells.push_back({x++, y});
            run = 0;
        } else if (c == '$') {
            y += run ? run : 1;
            x = 0;
            run = 0;
        } else if (c == '!') {
            done = true;
        } else if (!std::isspace(static_cast<unsigned char>(c))) {
            throw std::invalid_argument(
                std::string("life pattern: unexpected RLE token '") + c + "'");
        }
    }
    if (cells.empty())
        throw std::invalid_argument("life pattern: RLE body has no live cells");

    int max_x = 0, max_y = 0;
    for (const Cell& c : cells) {
        max_x = std::max(max_x, c.x);
        max_y = std::max(max_y, c.y);
    }
    const int pw = max_x + 1, ph = max_y + 1;
    if (grid_w == 0) grid_w = std::max(16, pw + 8);
    if (grid_h == 0) grid_h = std::max(16, ph + 8);
    if (pw > grid_w || ph > grid_h)
        throw std::invalid_argument("life pattern: pattern larger than the grid");

    LifeGrid g(grid_w, grid_h, topo);
    const int ox = (grid_w - pw) / 2, oy = (grid_h - ph) / 2;
    for (const Cell& c : cells) g.set(c.x + ox, c.y + oy, 1);
    return g;
}

LifeGrid load_pattern(const std::string& path, Topology topo, int grid_w,
                      int grid_h) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open pattern file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    const std::string text = ss.str();
    if (path.size() >= 4 && path.compare(path.size() - 4, 4, ".rle") == 0)
        return grid_from_rle(text, topo, grid_w, grid_h);
    return grid_from_text(text, topo);
}

} // namespace cie::life
