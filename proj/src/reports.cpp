#include "cie/reports.hpp"

#include "cie/svg.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace cie::reports {

namespace {

const char* kObjectColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                               "#ff7f0e", "#8c564b", "#e377c2", "#7f7f7f"};

const char* object_color(int i) {
    return kObjectColors[static_cast<std::size_t>(i) % 8];
}

} // namespace

void write_file_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write file: " + tmp);
        out << content;
        if (!out) throw std::runtime_error("write failed: " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw std::runtime_error("cannot rename " + tmp + " to " + path);
}

std::string graph_report_json(const graph::EdgeProbabilityGraph& g,
                              const graph::BlockEntropyReport& report,
                              const graph::NodePartition& partition) {
    nlohmann::json doc;
    doc["spec_version"] = kSpecVersion;
    doc["n"] = g.n();
    doc["graph_entropy_bits"] = graph::graph_entropy(g);
    doc["partition"] = partition.assignment();
    nlohmann::json within = nlohmann::json::array();
    for (const auto& [block, h] : report.within)
        within.push_back({{"block", block}, {"H_bits", h}});
    doc["within"] = std::move(within);
    nlohmann::json cross = nlohmann::json::array();
    for (const auto& [a, b, h] : report.cross)
        cross.push_back({{"blocks", {a, b}}, {"H_bits", h}});
    doc["cross"] = std::move(cross);
    doc["total_bits"] = report.total;
    return doc.dump(2);
}

std::string bipartition_report_json(const graph::EdgeProbabilityGraph& g,
                                    const graph::BipartitionResult& result) {
    nlohmann::json doc = nlohmann::json::parse(
        graph_report_json(g, result.report, result.partition));
    doc["cross_entropy_rate_bits_per_slot"] = result.cross_entropy_rate;
    return doc.dump(2);
}

std::string adjacency_svg(const graph::EdgeProbabilityGraph& g,
                          const graph::NodePartition& partition) {
    const int n = g.n();
    const double cell = 24.0, margin = 30.0;
    const double size = margin * 2 + cell * n;
    svg::Writer w(size, size);
    w.comment(std::string("cie ") + kSpecVersion);

    // block tint behind each cell, edge probability as the dot darkness
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double x = margin + cell * j, y = margin + cell * i;
            const int bi = partition.block_of(i), bj = partition.block_of(j);
            if (bi == bj)
                w.rect(x, y, cell, cell, object_color(bi), 0.15);
            else
                w.rect(x, y, cell, cell, "#999999", 0.12);
            w.rect(x + 3, y + 3, cell - 6, cell - 6, "#000000",
                   0.05 + 0.95 * g.p(i, j));
        }
    }
    for (int i = 0; i <= n; ++i) {
        const bool boundary =
            i == 0 || i == n ||
            (i < n && partition.block_of(i) != partition.block_of(i - 1));
        const double width = boundary ? 2.0 : 0.5;
        w.line(margin, margin + cell * i, margin + cell * n, margin + cell * i,
               "#333333", width);
        w.line(margin + cell * i, margin, margin + cell * i, margin + cell * n,
               "#333333", width);
    }
    for (int i = 0; i < n; ++i) {
        w.text(margin + cell * i + cell / 2 - 4, margin - 8,
               std::to_string(i + 1));
        w.text(margin - 18, margin + cell * i + cell / 2 + 4,
               std::to_string(i + 1));
    }
    return w.finish();
}

std::string world_svg(const world::Trajectory& traj) {
    const world::WorldConfig& cfg = traj.config;
    const double plot = 480.0, margin = 20.0;
    const double scale = plot / cfg.map_size;
    const double size = plot + 2 * margin;
    auto X = [&](double wx) { return margin + wx * scale; };
    auto Y = [&](double wy) { return margin + plot - wy * scale; }; // y up

    svg::Writer w(size, size);
    w.comment(std::string("cie ") + kSpecVersion);
    w.rect(margin, margin, plot, plot, "#fcfcfc");

    // sector boundaries at 90, 210, 330 degrees and the central disk
    const double cx = X(cfg.center.x), cy = Y(cfg.center.y);
    const double reach = 2.0 * cfg.map_size * scale;
    for (double deg : {90.0, 210.0, 330.0}) {
        const double rad = deg * 3.14159265358979323846 / 180.0;
        w.line(cx, cy, cx + reach * std::cos(rad), cy - reach * std::sin(rad),
               "#bbbbbb", 1.0);
    }
    w.circle(cx, cy, cfg.r_center * scale, "#eeeeee");

    // trajectory, one polyline per contiguous same-region run
    const auto& samples = traj.samples;
    std::size_t i = 0;
    while (i < samples.size()) {
        std::size_t j = i;
        while (j + 1 < samples.size() &&
               samples[j + 1].region_true == samples[i].region_true)
            ++j;
        w.polyline_begin(object_color(samples[i].region_true - 1), 1.0);
        for (std::size_t s = i; s <= j; ++s)
            w.polyline_point(X(samples[s].pos.x), Y(samples[s].pos.y));
        if (j + 1 < samples.size())
            w.polyline_point(X(samples[j + 1].pos.x), Y(samples[j + 1].pos.y));
        w.polyline_end();
        i = j + 1;
    }
    w.line(margin, margin, margin + plot, margin, "#333333", 1.5);
    w.line(margin, margin + plot, margin + plot, margin + plot, "#333333", 1.5);
    w.line(margin, margin, margin, margin + plot, "#333333", 1.5);
    w.line(margin + plot, margin, margin + plot, margin + plot, "#333333", 1.5);
    return w.finish();
}

std::string infer_report_json(const infer::SystemModel& model,
                              const infer::CieReport& report,
                              const std::vector<infer::CandidateRecord>& ledger,
                              const std::vector<int>& sub_object_counts,
                              bool shuffled_input) {
    nlohmann::json doc = nlohmann::json::parse(infer::model_to_json(model, report));
    doc["spec_version"] = kSpecVersion;
    doc["object_count"] = model.k();
    nlohmann::json led = nlohmann::json::array();
    for (const infer::CandidateRecord& c : ledger) {
        nlohmann::json entry;
        entry["description"] = c.description;
        entry["k"] = c.k;
        entry["loss"] = c.loss;
        entry["cie"] = std::isfinite(c.cie) ? nlohmann::json(c.cie)
                                            : nlohmann::json(nullptr);
        entry["accepted"] = c.accepted;
        led.push_back(std::move(entry));
    }
    doc["ledger"] = std::move(led);
    doc["sub_object_counts"] = sub_object_counts;
    doc["shuffled_input"] = shuffled_input;
    return doc.dump(2);
}

std::string activation_svg(const infer::SystemModel& model) {
    const int k = model.k();
    const std::size_t n = model.assignment.size();
    const double plot_w = 640.0, row_h = 40.0, margin = 30.0;
    const double height = margin * 2 + row_h * k;
    svg::Writer w(plot_w + 2 * margin, height);
    w.comment(std::string("cie ") + kSpecVersion);

    for (int obj = 0; obj < k; ++obj) {
        const double y0 = margin + row_h * obj;
        w.text(4, y0 + row_h / 2 + 4, "A" + std::to_string(obj));
        w.line(margin, y0 + row_h - 8, margin + plot_w, y0 + row_h - 8,
               "#cccccc", 0.5);
        // run-length encode the one-hot activation into bars
        std::size_t i = 0;
        while (i < n) {
            std::size_t j = i;
            while (j + 1 < n && model.assignment[j + 1] == model.assignment[i])
                ++j;
            if (model.assignment[i] == obj) {
                const double x0 = margin + plot_w * static_cast<double>(i) /
                                               static_cast<double>(n);
                const double x1 = margin + plot_w * static_cast<double>(j + 1) /
                                               static_cast<double>(n);
                w.rect(x0, y0 + 6, std::max(x1 - x0, 0.5), row_h - 14,
                       object_color(obj));
            }
            i = j + 1;
        }
    }
    return w.finish();
}

std::string assignment_map_svg(const infer::Dataset& data,
                               const infer::SystemModel& model) {
    const double plot = 480.0, margin = 20.0;
    double max_coord = 1.0;
    for (const auto& p : data.positions)
        max_coord = std::max({max_coord, std::abs(p.x), std::abs(p.y)});
    const double scale = plot / (2.0 * max_coord);
    auto X = [&](double wx) { return margin + (wx + max_coord) * scale; };
    auto Y = [&](double wy) { return margin + plot - (wy + max_coord) * scale; };

    svg::Writer w(plot + 2 * margin, plot + 2 * margin);
    w.comment(std::string("cie ") + kSpecVersion);
    w.rect(margin, margin, plot, plot, "#fcfcfc");

    const std::size_t n = data.size();
    const std::size_t stride = std::max<std::size_t>(1, n / 8000);
    for (std::size_t r = 0; r < n; r += stride)
        w.rect(X(data.positions[r].x), Y(data.positions[r].y), 1.6, 1.6,
               object_color(model.assignment[r]));
    return w.finish();
}

std::string life_report_json(const std::vector<life::MacroObject>& objects,
                             int generations, bool zizo_ran, bool zizo_converged,
                             int zizo_iterations) {
    nlohmann::json doc;
    doc["spec_version"] = kSpecVersion;
    doc["generations"] = generations;
    nlohmann::json arr = nlohmann::json::array();
    for (const life::MacroObject& o : objects) {
        nlohmann::json cells = nlohmann::json::array();
        for (const life::Cell& c : o.cells) cells.push_back({c.x, c.y});
        arr.push_back({{"kind", life::to_string(o.kind)},
                       {"period", o.period},
                       {"displacement", {o.dx, o.dy}},
                       {"first_frame", o.first_frame},
                       {"cells", std::move(cells)}});
    }
    doc["objects"] = std::move(arr);
    if (zizo_ran) {
        doc["zizo"] = {{"converged", zizo_converged},
                       {"iterations", zizo_iterations}};
    }
    return doc.dump(2);
}

std::string manifest_json(const std::string& subcommand,
                          const std::string& config_json,
                          const std::vector<std::string>& inputs,
                          const std::vector<std::string>& outputs,
                          std::uint64_t seed) {
    nlohmann::json doc;
    doc["spec_version"] = kSpecVersion;
    doc["subcommand"] = subcommand;
    doc["config"] = nlohmann::json::parse(config_json);
    doc["inputs"] = inputs;
    doc["outputs"] = outputs;
    doc["seed"] = seed;
    return doc.dump(2);
}

} // namespace cie::reports
