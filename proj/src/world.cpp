#include "cie/world.hpp"

#include "cie/rng.hpp"

#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace cie::world {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kSqrt3Half = 0.86602540378443864676;

void append_double(std::string& out, double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out += buf;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

void WorldConfig::validate() const {
    if (!(map_size > 0.0))
        throw std::invalid_argument("world config: map_size must be > 0");
    if (!(a_mag > 0.0))
        throw std::invalid_argument("world config: a_mag must be > 0");
    if (!(dt > 0.0))
        throw std::invalid_argument("world config: dt must be > 0");
    if (!(r_center > 0.0) || !(r_center < map_size / 2.0))
        throw std::invalid_argument(
            "world config: r_center must be in (0, map_size/2)");
    if (n_steps < 0)
        throw std::invalid_argument("world config: n_steps must be >= 0");
    if (!(v0_mag >= 0.0))
        throw std::invalid_argument("world config: v0_mag must be >= 0");
}

int region_of(Vec2 pos, const WorldConfig& cfg) {
    const Vec2 d = pos - cfg.center;
    if (d.norm() <= cfg.r_center) return 1;
    double deg = std::atan2(d.y, d.x) * 180.0 / kPi;
    if (deg < 0.0) deg += 360.0;
    if (deg >= 210.0 && deg < 330.0) return 2;
    if (deg >= 90.0 && deg < 210.0) return 3;
    return 4;
}

Vec2 acceleration(Vec2 vel, int region, double a_mag, double eps_v,
                  Vec2 fallback_dir) {
    switch (region) {
    case 1: {
        const double speed = vel.norm();
        if (speed <= eps_v) return fallback_dir * a_mag;
        return Vec2{vel.y / speed, -vel.x / speed} * a_mag;
    }
    case 2:
        return Vec2{0.0, 1.0} * a_mag;
    case 3:
        return Vec2{kSqrt3Half, -0.5} * a_mag;
    case 4:
        return Vec2{-kSqrt3Half, -0.5} * a_mag;
    default:
        throw std::invalid_argument("acceleration: unknown region " +
                                    std::to_string(region));
    }
}

Trajectory simulate(const WorldConfig& cfg) {
    cfg.validate();
    SplitMix64 rng(cfg.seed);

    Vec2 pos{rng.next_double() * cfg.map_size, rng.next_double() * cfg.map_size};
    const double heading = rng.next_double() * 2.0 * kPi;
    Vec2 vel{cfg.v0_mag * std::cos(heading), cfg.v0_mag * std::sin(heading)};

    Trajectory traj;
    traj.config = cfg;
    traj.samples.reserve(static_cast<std::size_t>(cfg.n_steps));

    Vec2 fallback{0.0, 1.0}; // last acceleration direction; (0,1) at t = 0
    for (int t = 0; t < cfg.n_steps; ++t) {
        StateSample s;
        s.t = t;
        s.pos = pos;
        s.vel = vel;
        s.region_true = region_of(pos, cfg);
        s.acc = acceleration(vel, s.region_true, cfg.a_mag, cfg.eps_v, fallback);
        s.activation_true[static_cast<std::size_t>(s.region_true - 1)] = 1;
        traj.samples.push_back(s);

        if (cfg.a_mag > 0.0)
            fallback = s.acc * (1.0 / cfg.a_mag);
        vel = vel + s.acc * cfg.dt;
        pos = pos + vel * cfg.dt;
    }
    return traj;
}

std::string trajectory_to_csv(const Trajectory& traj) {
    std::string out = "t,x,y,vx,vy,ax,ay,region_true\n";
    for (const StateSample& s : traj.samples) {
        out += std::to_string(s.t);
        for (double v : {s.pos.x, s.pos.y, s.vel.x, s.vel.y, s.acc.x, s.acc.y}) {
            out += ',';
            append_double(out, v);
        }
        out += ',';
        out += std::to_string(s.region_true);
        out += '\n';
    }
    return out;
}

std::string trajectory_to_json(const Trajectory& traj) {
    nlohmann::json doc;
    doc["config"] = nlohmann::json::parse(config_to_json(traj.config));
    nlohmann::json rows = nlohmann::json::array();
    for (const StateSample& s : traj.samples) {
        rows.push_back({{"t", s.t},
                        {"x", s.pos.x},
                        {"y", s.pos.y},
                        {"vx", s.vel.x},
                        {"vy", s.vel.y},
                        {"ax", s.acc.x},
                        {"ay", s.acc.y},
                        {"region_true", s.region_true}});
    }
    doc["samples"] = std::move(rows);
    return doc.dump(2);
}

void export_trajectory(const Trajectory& traj, const std::string& path,
                       const std::string& format) {
    std::string body;
    if (format == "csv")
        body = trajectory_to_csv(traj);
    else if (format == "json")
        body = trajectory_to_json(traj);
    else
        throw std::invalid_argument("export_trajectory: unknown format " + format);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << body;
    if (!out) throw std::runtime_error("write failed: " + path);
}

namespace {

StateSample sample_from_fields(int t, double x, double y, double vx, double vy,
                               double ax, double ay, int region) {
    if (region < 1 || region > 4)
        throw std::invalid_argument("trajectory: region_true outside 1..4: " +
                                    std::to_string(region));
    StateSample s;
    s.t = t;
    s.pos = {x, y};
    s.vel = {vx, vy};
    s.acc = {ax, ay};
    s.region_true = region;
    s.activation_true[static_cast<std::size_t>(region - 1)] = 1;
    return s;
}

} // namespace

Trajectory trajectory_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line))
        throw std::invalid_argument("trajectory csv: empty input");
    if (line.size() && line.back() == '\r') line.pop_back();
    if (line != "t,x,y,vx,vy,ax,ay,region_true")
        throw std::invalid_argument(
            "trajectory csv: unexpected header \"" + line +
            "\", want t,x,y,vx,vy,ax,ay,region_true");

    Trajectory traj;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.size() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        double f[7];
        int t = 0, region = 0;
        long long tt = 0;
        char* end = nullptr;
        const char* p = line.c_str();
        tt = std::strtoll(p, &end, 10);
        if (end == p || *end != ',')
            throw std::invalid_argument("trajectory csv: bad row at line " +
                                        std::to_string(lineno));
        t = static_cast<int>(tt);
        p = end + 1;
        for (int i = 0; i < 6; ++i) {
            f[i] = std::strtod(p, &end);
            if (end == p || *end != ',')
                throw std::invalid_argument("trajectory csv: bad row at line " +
                                            std::to_string(lineno));
            p = end + 1;
        }
        region = static_cast<int>(std::strtol(p, &end, 10));
        if (end == p)
            throw std::invalid_argument("trajectory csv: bad row at line " +
                                        std::to_string(lineno));
        traj.samples.push_back(
            sample_from_fields(t, f[0], f[1], f[2], f[3], f[4], f[5], region));
    }
    return traj;
}

Trajectory trajectory_from_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("trajectory json: ") + e.what());
    }
    const nlohmann::json* rows = nullptr;
    if (doc.is_array())
        rows = &doc;
    else if (doc.contains("samples") && doc["samples"].is_array())
        rows = &doc["samples"];
    else
        throw std::invalid_argument(
            "trajectory json: need an array or a \"samples\" array");

    Trajectory traj;
    if (!doc.is_array() && doc.contains("config"))
        traj.config = config_from_json(doc["config"].dump());
    for (const auto& r : *rows) {
        for (const char* key :
             {"t", "x", "y", "vx", "vy", "ax", "ay", "region_true"})
            if (!r.contains(key))
                throw std::invalid_argument(
                    std::string("trajectory json: sample missing field \"") +
                    key + "\"");
        traj.samples.push_back(sample_from_fields(
            r["t"].get<int>(), r["x"].get<double>(), r["y"].get<double>(),
            r["vx"].get<double>(), r["vy"].get<double>(), r["ax"].get<double>(),
            r["ay"].get<double>(), r["region_true"].get<int>()));
    }
    return traj;
}

Trajectory import_trajectory(const std::string& path) {
    const std::string text = read_file(path);
    if (path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0)
        return trajectory_from_json(text);
    return trajectory_from_csv(text);
}

WorldConfig config_from_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("world config json: ") + e.what());
    }
    if (!doc.is_object())
        throw std::invalid_argument("world config json: expected an object");
    WorldConfig cfg;
    auto number = [&doc](const char* key, double fallback) {
        if (!doc.contains(key)) return fallback;
        if (!doc[key].is_number())
            throw std::invalid_argument(
                std::string("world config json: field \"") + key +
                "\" must be a number");
        return doc[key].get<double>();
    };
    cfg.map_size = number("map_size", cfg.map_size);
    cfg.r_center = number("r_center", 0.25 * cfg.map_size);
    cfg.a_mag = number("a_mag", cfg.a_mag);
    cfg.dt = number("dt", cfg.dt);
    if (doc.contains("n_steps")) {
        if (!doc["n_steps"].is_number_integer())
            throw std::invalid_argument(
                "world config json: field \"n_steps\" must be an integer");
        cfg.n_steps = doc["n_steps"].get<int>();
    }
    cfg.v0_mag = number("v0_mag", cfg.v0_mag);
    cfg.eps_v = number("eps_v", cfg.eps_v);
    if (doc.contains("seed")) cfg.seed = doc["seed"].get<std::uint64_t>();
    if (doc.contains("center")) {
        const auto& c = doc["center"];
        if (!c.is_array() || c.size() != 2 || !c[0].is_number() ||
            !c[1].is_number())
            throw std::invalid_argument(
                "world config json: field \"center\" must be [x, y]");
        cfg.center = {c[0].get<double>(), c[1].get<double>()};
    } else {
        cfg.center = {cfg.map_size / 2.0, cfg.map_size / 2.0};
    }
    cfg.validate();
    return cfg;
}

std::string config_to_json(const WorldConfig& cfg) {
    nlohmann::json doc;
    doc["map_size"] = cfg.map_size;
    doc["center"] = {cfg.center.x, cfg.center.y};
    doc["r_center"] = cfg.r_center;
    doc["a_mag"] = cfg.a_mag;
    doc["dt"] = cfg.dt;
    doc["n_steps"] = cfg.n_steps;
    doc["v0_mag"] = cfg.v0_mag;
    doc["seed"] = cfg.seed;
    doc["eps_v"] = cfg.eps_v;
    return doc.dump(2);
}

} // namespace cie::world
