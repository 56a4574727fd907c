// cie: workbench for complex-information-entropy experiments.
// Subcommands: graph-demo, simulate, infer, life.
// Exit codes: 0 success, 2 input error, 3 invariant failure.

#include "cie/graph.hpp"
#include "cie/inference.hpp"
#include "cie/life.hpp"
#include "cie/reports.hpp"
#include "cie/world.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

namespace fs = std::filesystem;

namespace {

struct CommonArgs {
    std::uint64_t seed = 0;
    std::string out_dir = ".";
    std::string formats = "json,csv,svg";
    std::string manifest; // re-run from a manifest file

    bool wants(const std::string& fmt) const {
        return formats.find(fmt) != std::string::npos;
    }
    std::string path(const std::string& name) const {
        return (fs::path(out_dir) / name).string();
    }
};

void add_common(CLI::App* cmd, CommonArgs& common) {
    cmd->add_option("--seed", common.seed, "random seed");
    cmd->add_option("--out", common.out_dir, "output directory");
    cmd->add_option("--format", common.formats,
                    "comma list of output formats (json,csv,svg)");
    cmd->add_option("--manifest", common.manifest,
                    "re-run the experiment recorded in a manifest file");
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// returns the "config" object of a manifest; also surfaces seed and inputs
nlohmann::json load_manifest(const std::string& path, CommonArgs& common,
                             std::vector<std::string>& inputs) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(read_file(path));
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("manifest: ") + e.what());
    }
    if (!doc.contains("config"))
        throw std::invalid_argument("manifest: missing field \"config\"");
    if (doc.contains("seed")) common.seed = doc["seed"].get<std::uint64_t>();
    if (doc.contains("inputs"))
        inputs = doc["inputs"].get<std::vector<std::string>>();
    return doc["config"];
}

void ensure_out_dir(const CommonArgs& common) {
    if (!common.out_dir.empty()) fs::create_directories(common.out_dir);
}

// "1-4,5-8" or "all" over 1-based node ids
cie::graph::NodePartition parse_blocks(const std::string& spec, int n) {
    if (spec == "all")
        return cie::graph::NodePartition(
            std::vector<int>(static_cast<std::size_t>(n), 0));
    std::vector<int> assignment(static_cast<std::size_t>(n), -1);
    int block = 0;
    std::stringstream groups(spec);
    std::string group;
    while (std::getline(groups, group, ',')) {
        if (group.empty())
            throw std::invalid_argument("blocks: empty group in \"" + spec + "\"");
        const auto dash = group.find('-');
        int lo, hi;
        try {
            if (dash == std::string::npos) {
                lo = hi = std::stoi(group);
            } else {
                lo = std::stoi(group.substr(0, dash));
                hi = std::stoi(group.substr(dash + 1));
            }
        } catch (const std::exception&) {
            throw std::invalid_argument("blocks: cannot parse group \"" + group +
                                        "\"");
        }
        if (lo < 1 || hi > n || lo > hi)
            throw std::invalid_argument("blocks: range " + group +
                                        " outside nodes 1.." + std::to_string(n));
        for (int node = lo; node <= hi; ++node) {
            if (assignment[static_cast<std::size_t>(node - 1)] != -1)
                throw std::invalid_argument("blocks: node " + std::to_string(node) +
                                            " assigned twice");
            assignment[static_cast<std::size_t>(node - 1)] = block;
        }
        ++block;
    }
    for (int node = 0; node < n; ++node)
        if (assignment[static_cast<std::size_t>(node)] == -1)
            throw std::invalid_argument("blocks: node " + std::to_string(node + 1) +
                                        " not assigned to any block");
    return cie::graph::NodePartition(assignment);
}

struct GraphArgs {
    std::string input;
    bool paper_example = false;
    int n = 0;
    double uniform_p = 0.5;
    std::string blocks = "all";
    bool find_bipartition = false;
    int realize = 0;
};

int cmd_graph_demo(CommonArgs common, GraphArgs args) {
    using namespace cie;
    std::vector<std::string> inputs;
    std::unique_ptr<graph::EdgeProbabilityGraph> g;

    if (!common.manifest.empty()) {
        const nlohmann::json cfg = load_manifest(common.manifest, common, inputs);
        g = std::make_unique<graph::EdgeProbabilityGraph>(
            graph::graph_from_json(cfg["graph"].dump()));
        args.blocks = cfg.value("blocks", "all");
        args.find_bipartition = cfg.value("find_bipartition", false);
        args.realize = cfg.value("realize", 0);
    } else if (args.paper_example) {
        g = std::make_unique<graph::EdgeProbabilityGraph>(
            graph::EdgeProbabilityGraph::uniform(8, 0.5));
    } else if (!args.input.empty()) {
        g = std::make_unique<graph::EdgeProbabilityGraph>(
            graph::graph_from_json(read_file(args.input)));
        inputs.push_back(args.input);
    } else if (args.n > 0) {
        g = std::make_unique<graph::EdgeProbabilityGraph>(
            graph::EdgeProbabilityGraph::uniform(args.n, args.uniform_p));
    } else {
        throw std::invalid_argument(
            "graph-demo: need --input, --paper-example, or --n/--uniform-p");
    }
    ensure_out_dir(common);

    const graph::NodePartition partition = parse_blocks(args.blocks, g->n());
    const graph::BlockEntropyReport report = graph::block_entropies(*g, partition);

    std::vector<std::string> outputs;
    if (common.wants("json")) {
        reports::write_file_atomic(common.path("graph_report.json"),
                                   reports::graph_report_json(*g, report, partition));
        outputs.push_back("graph_report.json");
    }
    if (common.wants("svg")) {
        reports::write_file_atomic(common.path("adjacency.svg"),
                                   reports::adjacency_svg(*g, partition));
        outputs.push_back("adjacency.svg");
    }
    if (args.find_bipartition) {
        const graph::BipartitionResult best = graph::best_bipartition(*g);
        reports::write_file_atomic(common.path("bipartition.json"),
                                   reports::bipartition_report_json(*g, best));
        outputs.push_back("bipartition.json");
    }
    for (int r = 0; r < args.realize; ++r) {
        const auto adj =
            graph::sample_graph(*g, common.seed + static_cast<std::uint64_t>(r));
        const std::string name = "realized_" + std::to_string(r) + ".json";
        reports::write_file_atomic(common.path(name),
                                   graph::adjacency_to_json(adj, g->n()));
        outputs.push_back(name);
    }

    nlohmann::json cfg_json{{"graph", nlohmann::json::parse(graph::graph_to_json(*g))},
                            {"blocks", args.blocks},
                            {"find_bipartition", args.find_bipartition},
                            {"realize", args.realize}};
    reports::write_file_atomic(
        common.path("manifest.json"),
        reports::manifest_json("graph-demo", cfg_json.dump(), inputs, outputs,
                               common.seed));

    std::cout << "graph-demo: total " << report.total << " bits over "
              << partition.block_count() << " block(s)\n";
    return 0;
}

int cmd_simulate(CommonArgs common, cie::world::WorldConfig cfg,
                 const std::string& config_file) {
    using namespace cie;
    std::vector<std::string> inputs;
    if (!common.manifest.empty()) {
        const nlohmann::json mcfg = load_manifest(common.manifest, common, inputs);
        cfg = world::config_from_json(mcfg.dump());
    } else if (!config_file.empty()) {
        cfg = world::config_from_json(read_file(config_file));
        inputs.push_back(config_file);
    }
    cfg.validate();
    ensure_out_dir(common);

    const world::Trajectory traj = world::simulate(cfg);
    std::vector<std::string> outputs;
    if (common.wants("csv")) {
        reports::write_file_atomic(common.path("trajectory.csv"),
                                   world::trajectory_to_csv(traj));
        outputs.push_back("trajectory.csv");
    }
    if (common.wants("json")) {
        reports::write_file_atomic(common.path("trajectory.json"),
                                   world::trajectory_to_json(traj));
        outputs.push_back("trajectory.json");
    }
    if (common.wants("svg")) {
        reports::write_file_atomic(common.path("map.svg"),
                                   reports::world_svg(traj));
        outputs.push_back("map.svg");
    }
    reports::write_file_atomic(
        common.path("manifest.json"),
        reports::manifest_json("simulate", world::config_to_json(cfg), inputs,
                               outputs, cfg.seed));

    std::cout << "simulate: " << traj.samples.size() << " samples\n";
    return 0;
}

int cmd_infer(CommonArgs common, std::string input,
              cie::infer::InferenceConfig cfg, std::string criterion) {
    using namespace cie;
    std::vector<std::string> inputs;
    if (!common.manifest.empty()) {
        const nlohmann::json mcfg = load_manifest(common.manifest, common, inputs);
        if (inputs.empty())
            throw std::invalid_argument("manifest: no input file recorded");
        input = inputs[0];
        cfg.min_improvement = mcfg.value("min_improvement", cfg.min_improvement);
        cfg.max_objects = mcfg.value("max_objects", cfg.max_objects);
        cfg.max_anneal_iters = mcfg.value("max_anneal_iters", cfg.max_anneal_iters);
        cfg.seed_fraction = mcfg.value("seed_fraction", cfg.seed_fraction);
        cfg.temperature0 = mcfg.value("temperature0", cfg.temperature0);
        cfg.cooling_alpha = mcfg.value("cooling_alpha", cfg.cooling_alpha);
        cfg.unify_tolerance = mcfg.value("unify_tolerance", cfg.unify_tolerance);
        cfg.gamma = mcfg.value("gamma", cfg.gamma);
        cfg.loss_floor = mcfg.value("loss_floor", cfg.loss_floor);
        cfg.bellman_driver = mcfg.value("bellman_driver", cfg.bellman_driver);
        cfg.recursion_depth = mcfg.value("recursion_depth", cfg.recursion_depth);
        cfg.eps_v = mcfg.value("eps_v", cfg.eps_v);
        criterion = mcfg.value("criterion", criterion);
    } else {
        inputs.push_back(input);
    }
    if (criterion == "loss")
        cfg.criterion = infer::InferenceConfig::Criterion::loss;
    else if (criterion == "cie")
        cfg.criterion = infer::InferenceConfig::Criterion::cie;
    else
        throw std::invalid_argument("infer: --criterion must be loss or cie");
    cfg.seed = common.seed;
    cfg.validate();
    ensure_out_dir(common);

    const world::Trajectory traj = world::import_trajectory(input);
    const infer::Dataset data = infer::featurize(traj, cfg.eps_v);
    const infer::StructureResult result = infer::structure_learning_loop(data, cfg);

    if (result.model.k() < 1 || result.model.assignment.size() != data.size()) {
        std::cerr << "infer: model violates coverage invariants\n";
        return 3;
    }
    if (result.shuffled_input)
        std::cerr << "infer: warning: input rows are not time-adjacent; "
                     "affordance graph is empty\n";

    std::vector<std::string> outputs{"model.json"};
    reports::write_file_atomic(
        common.path("model.json"),
        reports::infer_report_json(result.model, result.report, result.ledger,
                                   result.sub_object_counts,
                                   result.shuffled_input));
    if (common.wants("svg")) {
        reports::write_file_atomic(common.path("activations.svg"),
                                   reports::activation_svg(result.model));
        reports::write_file_atomic(common.path("assignment_map.svg"),
                                   reports::assignment_map_svg(data, result.model));
        outputs.push_back("activations.svg");
        outputs.push_back("assignment_map.svg");
    }

    nlohmann::json cfg_json{{"min_improvement", cfg.min_improvement},
                            {"max_objects", cfg.max_objects},
                            {"max_anneal_iters", cfg.max_anneal_iters},
                            {"seed_fraction", cfg.seed_fraction},
                            {"temperature0", cfg.temperature0},
                            {"cooling_alpha", cfg.cooling_alpha},
                            {"unify_tolerance", cfg.unify_tolerance},
                            {"gamma", cfg.gamma},
                            {"loss_floor", cfg.loss_floor},
                            {"criterion", criterion},
                            {"bellman_driver", cfg.bellman_driver},
                            {"recursion_depth", cfg.recursion_depth},
                            {"eps_v", cfg.eps_v}};
    reports::write_file_atomic(
        common.path("manifest.json"),
        reports::manifest_json("infer", cfg_json.dump(), inputs, outputs,
                               cfg.seed));

    std::cout << "infer: " << result.model.k() << " objects, loss "
              << result.model.loss << "\n";
    return 0;
}

struct LifeArgs {
    std::string pattern;
    int generations = 20;
    int max_period = 4;
    bool zizo = false;
    std::string topology = "torus";
    int grid_size = 0;
};

int cmd_life(CommonArgs common, LifeArgs args) {
    using namespace cie;
    std::vector<std::string> inputs;
    if (!common.manifest.empty()) {
        const nlohmann::json mcfg = load_manifest(common.manifest, common, inputs);
        args.pattern = mcfg.value("pattern", args.pattern);
        args.generations = mcfg.value("generations", args.generations);
        args.max_period = mcfg.value("max_period", args.max_period);
        args.zizo = mcfg.value("zizo", args.zizo);
        args.topology = mcfg.value("topology", args.topology);
        args.grid_size = mcfg.value("grid_size", args.grid_size);
    } else {
        inputs.push_back(args.pattern);
    }

    life::Topology topo;
    if (args.topology == "torus")
        topo = life::Topology::torus;
    else if (args.topology == "bounded")
        topo = life::Topology::bounded;
    else
        throw std::invalid_argument("life: --topology must be torus or bounded");
    if (args.generations < args.max_period)
        throw std::invalid_argument(
            "life: --generations must be at least --max-period");
    ensure_out_dir(common);

    life::LifeGrid grid =
        life::load_pattern(args.pattern, topo, args.grid_size, args.grid_size);
    std::vector<life::LifeGrid> frames{grid};
    for (int g = 0; g < args.generations; ++g)
        frames.push_back(life::life_step(frames.back()));

    const auto objects = life::extract_objects(frames, args.max_period);
    bool zizo_converged = false;
    int zizo_iterations = 0;
    if (args.zizo) {
        const life::ZizoState state = life::zizo_life_demo(frames, args.max_period);
        zizo_converged = state.converged;
        zizo_iterations = state.iterations;
    }

    std::string dump;
    for (std::size_t f = 0; f < frames.size(); ++f) {
        dump += "generation " + std::to_string(f) + "\n";
        dump += life::grid_to_text(frames[f]);
        dump += "\n";
    }
    std::vector<std::string> outputs{"frames.txt", "objects.json"};
    reports::write_file_atomic(common.path("frames.txt"), dump);
    reports::write_file_atomic(
        common.path("objects.json"),
        reports::life_report_json(objects, args.generations, args.zizo,
                                  zizo_converged, zizo_iterations));

    nlohmann::json cfg_json{{"pattern", args.pattern},
                            {"generations", args.generations},
                            {"max_period", args.max_period},
                            {"zizo", args.zizo},
                            {"topology", args.topology},
                            {"grid_size", args.grid_size}};
    reports::write_file_atomic(
        common.path("manifest.json"),
        reports::manifest_json("life", cfg_json.dump(), inputs, outputs,
                               common.seed));

    std::cout << "life: " << objects.size() << " object(s) over "
              << args.generations << " generations\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"complex-information-entropy workbench"};
    app.require_subcommand(1);

    CommonArgs graph_common;
    GraphArgs graph_args;
    CLI::App* graph_cmd =
        app.add_subcommand("graph-demo", "block entropy accounting on a graph");
    add_common(graph_cmd, graph_common);
    graph_cmd->add_option("--input", graph_args.input, "graph JSON file");
    graph_cmd->add_flag("--paper-example", graph_args.paper_example,
                        "built-in 8-node graph with p = 0.5 everywhere");
    graph_cmd->add_option("--n", graph_args.n, "node count for a uniform graph");
    graph_cmd->add_option("--uniform-p", graph_args.uniform_p,
                          "edge probability for a uniform graph");
    graph_cmd->add_option("--blocks", graph_args.blocks,
                          "partition, e.g. \"1-4,5-8\" or \"all\"");
    graph_cmd->add_flag("--find-bipartition", graph_args.find_bipartition,
                        "exhaustive minimum-cross-entropy bipartition");
    graph_cmd->add_option("--realize", graph_args.realize,
                          "sample this many 0/1 adjacency matrices");

    CommonArgs sim_common;
    cie::world::WorldConfig world_cfg;
    std::string sim_config_file;
    std::vector<double> center_vals;
    CLI::App* sim_cmd = app.add_subcommand("simulate", "run the ball world");
    add_common(sim_cmd, sim_common);
    sim_cmd->add_option("--config", sim_config_file, "WorldConfig JSON file");
    sim_cmd->add_option("--map-size", world_cfg.map_size, "side of the square map");
    sim_cmd->add_option("--r-center", world_cfg.r_center, "radius of region 1");
    sim_cmd->add_option("--a-mag", world_cfg.a_mag, "acceleration magnitude");
    sim_cmd->add_option("--dt", world_cfg.dt, "integrator timestep");
    sim_cmd->add_option("--n-steps", world_cfg.n_steps, "number of steps");
    sim_cmd->add_option("--v0-mag", world_cfg.v0_mag, "initial speed");
    sim_cmd->add_option("--center", center_vals, "map center (x y)")->expected(2);

    CommonArgs infer_common;
    std::string infer_input, criterion = "loss";
    cie::infer::InferenceConfig infer_cfg;
    CLI::App* infer_cmd =
        app.add_subcommand("infer", "discover hidden objects in a trajectory");
    add_common(infer_cmd, infer_common);
    infer_cmd->add_option("--input", infer_input, "trajectory CSV/JSON file");
    infer_cmd->add_option("--min-improvement", infer_cfg.min_improvement,
                          "relative loss gain required to accept an object");
    infer_cmd->add_option("--max-objects", infer_cfg.max_objects, "object cap");
    infer_cmd->add_option("--max-anneal-iters", infer_cfg.max_anneal_iters,
                          "annealing iteration cap");
    infer_cmd->add_option("--seed-fraction", infer_cfg.seed_fraction,
                          "top-residual fraction for new objects");
    infer_cmd->add_option("--temperature0", infer_cfg.temperature0,
                          "Metropolis start temperature (0 = off)");
    infer_cmd->add_option("--cooling-alpha", infer_cfg.cooling_alpha,
                          "temperature decay per iteration");
    infer_cmd->add_option("--unify-tolerance", infer_cfg.unify_tolerance,
                          "relative loss increase allowed by a merge");
    infer_cmd->add_option("--gamma", infer_cfg.gamma, "Bellman factor");
    infer_cmd->add_option("--criterion", criterion, "growth gate: loss or cie");
    infer_cmd->add_flag("--bellman-driver", infer_cfg.bellman_driver,
                        "drive annealing by CIE-valued moves");
    infer_cmd->add_option("--recursion-depth", infer_cfg.recursion_depth,
                          "per-object sub-structure search depth");

    CommonArgs life_common;
    LifeArgs life_args;
    CLI::App* life_cmd = app.add_subcommand("life", "cellular automaton demo");
    add_common(life_cmd, life_common);
    life_cmd->add_option("--pattern", life_args.pattern,
                         "pattern file ('.'/'#' or RLE)");
    life_cmd->add_option("--generations", life_args.generations,
                         "generations to run");
    life_cmd->add_option("--max-period", life_args.max_period,
                         "largest period to test");
    life_cmd->add_flag("--zizo", life_args.zizo,
                       "run the zoom-in/zoom-out driver");
    life_cmd->add_option("--topology", life_args.topology, "torus or bounded");
    life_cmd->add_option("--grid-size", life_args.grid_size, "grid side (0 = auto)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (graph_cmd->parsed()) return cmd_graph_demo(graph_common, graph_args);
        if (sim_cmd->parsed()) {
            if (center_vals.size() == 2)
                world_cfg.center = {center_vals[0], center_vals[1]};
            else if (!sim_cmd->count("--config"))
                world_cfg.center = {world_cfg.map_size / 2.0,
                                    world_cfg.map_size / 2.0};
            world_cfg.seed = sim_common.seed;
            return cmd_simulate(sim_common, world_cfg, sim_config_file);
        }
        if (infer_cmd->parsed()) {
            if (infer_input.empty() && infer_common.manifest.empty())
                throw std::invalid_argument("infer: need --input or --manifest");
            return cmd_infer(infer_common, infer_input, infer_cfg, criterion);
        }
        if (life_cmd->parsed()) {
            if (life_args.pattern.empty() && life_common.manifest.empty())
                throw std::invalid_argument("life: need --pattern or --manifest");
            return cmd_life(life_common, life_args);
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
