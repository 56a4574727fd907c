#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

// Seeded ball-world simulator: a square map with a central disk where the
// acceleration turns with the velocity, surrounded by three 120-degree
// sectors with fixed acceleration directions that point back toward the
// interior. Emits timestamped (position, velocity, acceleration, region)
// records.

namespace cie::world {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    double norm() const { return std::hypot(x, y); }
};

struct WorldConfig {
    double map_size = 1.0;
    Vec2 center{0.5, 0.5}; // defaults to the map center
    double r_center = 0.25;
    double a_mag = 1.0;
    double dt = 0.01;
    int n_steps = 20000;
    double v0_mag = 0.01;
    std::uint64_t seed = 0;
    double eps_v = 1e-8;

    void validate() const; // a_mag > 0, dt > 0, 0 < r_center < map_size/2
};

struct StateSample {
    int t = 0;
    Vec2 pos, vel, acc;
    int region_true = 0;                     // 1..4
    std::array<int, 4> activation_true{};    // one-hot, index region-1
};

struct Trajectory {
    WorldConfig config;
    std::vector<StateSample> samples;
};

// Region 1 is the central disk. Outside it the angle of (pos - center)
// selects a sector: [210,330) degrees -> 2 (bottom), [90,210) -> 3
// (upper left), the rest -> 4 (upper right).
int region_of(Vec2 pos, const WorldConfig& cfg);

// Region 1 turns the velocity clockwise: a_mag * (v_y, -v_x)/|v|. The edge
// regions use the fixed directions (0,1), (sqrt(3)/2,-1/2), (-sqrt(3)/2,-1/2).
// A region-1 velocity below eps_v falls back to fallback_dir (the direction
// is undefined at v = 0).
Vec2 acceleration(Vec2 vel, int region, double a_mag, double eps_v = 1e-8,
                  Vec2 fallback_dir = {0.0, 1.0});

// Semi-implicit Euler: v += a*dt then x += v*dt. Initial position uniform on
// the square and initial heading uniform in angle, both drawn from the seed.
// Bit-exact reproducible for a given (config, seed).
Trajectory simulate(const WorldConfig& cfg);

// CSV columns: t,x,y,vx,vy,ax,ay,region_true
std::string trajectory_to_csv(const Trajectory& traj);
std::string trajectory_to_json(const Trajectory& traj);
void export_trajectory(const Trajectory& traj, const std::string& path,
                       const std::string& format); // "csv" or "json"

Trajectory trajectory_from_csv(const std::string& text);
Trajectory trajectory_from_json(const std::string& text);
Trajectory import_trajectory(const std::string& path); // picks by extension

// JSON with any subset of the WorldConfig fields; omitted fields take
// defaults (center follows map_size unless given explicitly)
WorldConfig config_from_json(const std::string& text);
std::string config_to_json(const WorldConfig& cfg);

} // namespace cie::world
