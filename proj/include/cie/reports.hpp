#pragma once

#include "cie/graph.hpp"
#include "cie/inference.hpp"
#include "cie/life.hpp"
#include "cie/world.hpp"

#include <string>
#include <vector>

// Report and plot builders shared by the CLI and the acceptance suite, so a
// run can be reproduced and byte-compared without going through the shell.

namespace cie::reports {

inline constexpr const char* kSpecVersion = "1.0.0";

// temp-file + rename
void write_file_atomic(const std::string& path, const std::string& content);

std::string graph_report_json(const graph::EdgeProbabilityGraph& g,
                              const graph::BlockEntropyReport& report,
                              const graph::NodePartition& partition);

std::string bipartition_report_json(const graph::EdgeProbabilityGraph& g,
                                    const graph::BipartitionResult& result);

// adjacency matrix with block shading
std::string adjacency_svg(const graph::EdgeProbabilityGraph& g,
                          const graph::NodePartition& partition);

// map square, central disk, sector boundaries, trajectory colored by region
std::string world_svg(const world::Trajectory& traj);

// model + CIE + trace wrapped with the format version
std::string infer_report_json(const infer::SystemModel& model,
                              const infer::CieReport& report,
                              const std::vector<infer::CandidateRecord>& ledger,
                              const std::vector<int>& sub_object_counts,
                              bool shuffled_input);

// one-hot activation timeline per object
std::string activation_svg(const infer::SystemModel& model);

// sample positions colored by assigned object
std::string assignment_map_svg(const infer::Dataset& data,
                               const infer::SystemModel& model);

std::string life_report_json(const std::vector<life::MacroObject>& objects,
                             int generations, bool zizo_ran, bool zizo_converged,
                             int zizo_iterations);

std::string manifest_json(const std::string& subcommand,
                          const std::string& config_json,
                          const std::vector<std::string>& inputs,
                          const std::vector<std::string>& outputs,
                          std::uint64_t seed);

} // namespace cie::reports
