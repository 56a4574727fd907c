#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cie/world.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

using namespace cie::world;

namespace {

WorldConfig default_config() {
    WorldConfig cfg;
    cfg.seed = 42;
    return cfg;
}

} // namespace

TEST_CASE("region assignment") {
    const WorldConfig cfg = default_config();
    CHECK(region_of(cfg.center, cfg) == 1);
    CHECK(region_of({0.5, 0.5 + 0.24}, cfg) == 1); // still inside the disk

    // directly below the center, outside the disk: the bottom sector, whose
    // law accelerates straight up
    CHECK(region_of({0.5, 0.1}, cfg) == 2);

    // angle 150 degrees, outside the disk
    const double rad = 150.0 * 3.14159265358979323846 / 180.0;
    CHECK(region_of({0.5 + 0.4 * std::cos(rad), 0.5 + 0.4 * std::sin(rad)}, cfg) == 3);

    // upper right sector
    CHECK(region_of({0.9, 0.8}, cfg) == 4);
    // sector boundaries are half-open at 90/210/330 degrees
    CHECK(region_of({0.5, 0.9}, cfg) == 3);   // exactly 90 degrees
    CHECK(region_of({0.9, 0.5}, cfg) == 4);   // exactly 0 degrees
}

TEST_CASE("acceleration laws") {
    CHECK(acceleration({1.0, 0.0}, 1, 1.0).x == doctest::Approx(0.0));
    CHECK(acceleration({1.0, 0.0}, 1, 1.0).y == doctest::Approx(-1.0));

    const Vec2 a2 = acceleration({3.0, -2.0}, 2, 2.0);
    CHECK(a2.x == doctest::Approx(0.0));
    CHECK(a2.y == doctest::Approx(2.0));

    const Vec2 a3 = acceleration({0.1, 0.1}, 3, 1.0);
    CHECK(a3.x == doctest::Approx(0.8660254037844386).epsilon(1e-12));
    CHECK(a3.y == doctest::Approx(-0.5).epsilon(1e-12));

    const Vec2 a4 = acceleration({0.1, 0.1}, 4, 1.0);
    CHECK(a4.x == doctest::Approx(-0.8660254037844386).epsilon(1e-12));
    CHECK(a4.y == doctest::Approx(-0.5).epsilon(1e-12));

    // the magnitude is constant in every region
    for (int region = 1; region <= 4; ++region)
        CHECK(acceleration({0.3, -0.7}, region, 2.5).norm() ==
              doctest::Approx(2.5).epsilon(1e-12));

    // zero velocity in region 1 falls back to the supplied direction
    const Vec2 guard = acceleration({0.0, 0.0}, 1, 1.0, 1e-8, {0.0, 1.0});
    CHECK(guard.x == 0.0);
    CHECK(guard.y == 1.0);

    CHECK_THROWS_AS(acceleration({1.0, 0.0}, 5, 1.0), std::invalid_argument);
}

TEST_CASE("zero initial speed in a constant-field region moves straight") {
    WorldConfig cfg = default_config();
    cfg.v0_mag = 0.0;
    cfg.n_steps = 50;
    // find a seed whose start lands in region 2
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        cfg.seed = seed;
        const Trajectory t = simulate(cfg);
        if (t.samples.front().region_true != 2) continue;
        CHECK(t.samples.front().acc.x == doctest::Approx(0.0));
        CHECK(t.samples.front().acc.y == doctest::Approx(cfg.a_mag));
        // x never changes while the ball stays in region 2
        for (const StateSample& s : t.samples) {
            if (s.region_true != 2) break;
            CHECK(s.pos.x == doctest::Approx(t.samples.front().pos.x));
            CHECK(s.vel.x == doctest::Approx(0.0));
        }
        return;
    }
    FAIL("no seed in 0..199 started in region 2");
}

TEST_CASE("acceleration magnitude is constant along the default run") {
    WorldConfig cfg = default_config();
    cfg.n_steps = 20000;
    const Trajectory t = simulate(cfg);
    REQUIRE(t.samples.size() == 20000);
    for (const StateSample& s : t.samples) {
        if (s.vel.norm() > cfg.eps_v)
            CHECK(std::abs(s.acc.norm() - cfg.a_mag) < 1e-9);
    }
}

TEST_CASE("activation is one-hot and matches the region") {
    WorldConfig cfg = default_config();
    cfg.n_steps = 5000;
    const Trajectory t = simulate(cfg);
    for (const StateSample& s : t.samples) {
        int active = 0;
        for (int i = 0; i < 4; ++i) {
            CHECK((s.activation_true[static_cast<std::size_t>(i)] == 0 ||
                   s.activation_true[static_cast<std::size_t>(i)] == 1));
            active += s.activation_true[static_cast<std::size_t>(i)];
        }
        CHECK(active == 1);
        CHECK(s.activation_true[static_cast<std::size_t>(s.region_true - 1)] == 1);
    }
}

TEST_CASE("same seed gives byte-identical csv") {
    WorldConfig cfg = default_config();
    cfg.n_steps = 2000;
    const std::string a = trajectory_to_csv(simulate(cfg));
    const std::string b = trajectory_to_csv(simulate(cfg));
    CHECK(a == b);
    cfg.seed = 43;
    CHECK(a != trajectory_to_csv(simulate(cfg)));
}

TEST_CASE("trajectory remains compact over a long run") {
    // the restoring sectors keep the ball near the map; measured extremes at
    // this seed are ~2.4 map units from the center over 100k steps
    WorldConfig cfg = default_config();
    cfg.n_steps = 100000;
    const Trajectory t = simulate(cfg);
    bool inside = true;
    for (const StateSample& s : t.samples)
        inside = inside && std::abs(s.pos.x - 0.5) <= 3.0 &&
                 std::abs(s.pos.y - 0.5) <= 3.0;
    CHECK(inside);
}

TEST_CASE("samples replay the integrator update exactly") {
    WorldConfig cfg = default_config();
    cfg.n_steps = 1000;
    const Trajectory t = simulate(cfg);
    for (std::size_t i = 0; i + 1 < t.samples.size(); ++i) {
        const StateSample& s = t.samples[i];
        const StateSample& nx = t.samples[i + 1];
        const Vec2 v = s.vel + s.acc * cfg.dt;
        const Vec2 x = s.pos + v * cfg.dt;
        CHECK(nx.vel.x == v.x);
        CHECK(nx.vel.y == v.y);
        CHECK(nx.pos.x == x.x);
        CHECK(nx.pos.y == x.y);
    }
}

TEST_CASE("csv export format and row counts") {
    WorldConfig cfg = default_config();
    cfg.n_steps = 3;
    const Trajectory t = simulate(cfg);
    const std::string csv = trajectory_to_csv(t);
    CHECK(csv.rfind("t,x,y,vx,vy,ax,ay,region_true\n", 0) == 0);
    int newlines = 0;
    for (char c : csv)
        if (c == '\n') ++newlines;
    CHECK(newlines == 4); // header + 3 rows

    cfg.n_steps = 0;
    CHECK(trajectory_to_csv(simulate(cfg)) == "t,x,y,vx,vy,ax,ay,region_true\n");
}

TEST_CASE("csv round trip is bit exact") {
    WorldConfig cfg = default_config();
    cfg.n_steps = 500;
    const Trajectory t = simulate(cfg);
    const Trajectory back = trajectory_from_csv(trajectory_to_csv(t));
    REQUIRE(back.samples.size() == t.samples.size());
    for (std::size_t i = 0; i < t.samples.size(); ++i) {
        CHECK(back.samples[i].pos.x == t.samples[i].pos.x);
        CHECK(back.samples[i].pos.y == t.samples[i].pos.y);
        CHECK(back.samples[i].vel.x == t.samples[i].vel.x);
        CHECK(back.samples[i].vel.y == t.samples[i].vel.y);
        CHECK(back.samples[i].acc.x == t.samples[i].acc.x);
        CHECK(back.samples[i].acc.y == t.samples[i].acc.y);
        CHECK(back.samples[i].region_true == t.samples[i].region_true);
    }
}

TEST_CASE("json round trip preserves samples") {
    WorldConfig cfg = default_config();
    cfg.n_steps = 50;
    const Trajectory t = simulate(cfg);
    const Trajectory back = trajectory_from_json(trajectory_to_json(t));
    REQUIRE(back.samples.size() == t.samples.size());
    for (std::size_t i = 0; i < t.samples.size(); ++i) {
        CHECK(back.samples[i].pos.x == t.samples[i].pos.x);
        CHECK(back.samples[i].region_true == t.samples[i].region_true);
    }
}

TEST_CASE("import rejects malformed inputs") {
    CHECK_THROWS_AS(trajectory_from_csv(""), std::invalid_argument);
    CHECK_THROWS_AS(trajectory_from_csv("wrong,header\n"), std::invalid_argument);
    CHECK_THROWS_AS(trajectory_from_csv(
                        "t,x,y,vx,vy,ax,ay,region_true\n0,bad\n"),
                    std::invalid_argument);
    CHECK_THROWS_AS(trajectory_from_csv(
                        "t,x,y,vx,vy,ax,ay,region_true\n0,0,0,0,0,0,0,9\n"),
                    std::invalid_argument);
    CHECK_THROWS_AS(trajectory_from_json("{}"), std::invalid_argument);
    CHECK_THROWS_AS(trajectory_from_json("[{\"t\": 0}]"), std::invalid_argument);
}

TEST_CASE("world config json defaults and overrides") {
    const WorldConfig d = config_from_json("{}");
    CHECK(d.map_size == 1.0);
    CHECK(d.center.x == 0.5);
    CHECK(d.r_center == 0.25);
    CHECK(d.n_steps == 20000);

    const WorldConfig scaled = config_from_json("{\"map_size\": 4.0}");
    CHECK(scaled.center.x == 2.0);   // center follows the map by default
    CHECK(scaled.r_center == 1.0);

    const WorldConfig pinned =
        config_from_json("{\"map_size\": 4.0, \"center\": [1.0, 1.0], "
                         "\"r_center\": 0.5, \"seed\": 7}");
    CHECK(pinned.center.x == 1.0);
    CHECK(pinned.r_center == 0.5);
    CHECK(pinned.seed == 7);

    const WorldConfig round =
        config_from_json(config_to_json(default_config()));
    CHECK(round.seed == 42);

    CHECK_THROWS_AS(config_from_json("{\"dt\": -1}"), std::invalid_argument);
    CHECK_THROWS_AS(config_from_json("{\"r_center\": 0.9}"), std::invalid_argument);
    CHECK_THROWS_AS(config_from_json("[1,2]"), std::invalid_argument);
    CHECK_THROWS_AS(config_from_json("{\"center\": [1.0]}"), std::invalid_argument);
}
