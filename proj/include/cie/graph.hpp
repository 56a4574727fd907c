#pragma once

#include <cstdint>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

// Entropy accounting on random graphs: a symmetric matrix of per-edge
// Bernoulli probabilities (self-loops included, n(n+1)/2 independent slots),
// block decomposition of the adjacency matrix under a node partition, and
// exhaustive minimum-cross-entropy bipartition search.

namespace cie::graph {

class EdgeProbabilityGraph {
public:
    // p is the full n x n row-major matrix; must be symmetric with entries
    // in [0,1]. Throws std::invalid_argument otherwise.
    EdgeProbabilityGraph(int n, std::vector<double> p);

    static EdgeProbabilityGraph uniform(int n, double p);

    int n() const { return n_; }
    double p(int i, int j) const { return p_[static_cast<std::size_t>(i) * n_ + j]; }
    int slot_count() const { return n_ * (n_ + 1) / 2; }

private:
    int n_;
    std::vector<double> p_;
};

// node -> block id; block ids are 0..k-1 with no empty block
class NodePartition {
public:
    explicit NodePartition(std::vector<int> block_of);

    int block_count() const { return k_; }
    int block_of(int node) const { return block_of_[static_cast<std::size_t>(node)]; }
    int node_count() const { return static_cast<int>(block_of_.size()); }
    const std::vector<int>& assignment() const { return block_of_; }

private:
    std::vector<int> block_of_;
    int k_;
};

struct BlockEntropyReport {
    std::vector<std::pair<int, double>> within;          // (block, bits)
    std::vector<std::tuple<int, int, double>> cross;     // (block a, block b, bits), a < b
    double total = 0.0;                                  // bits
};

// sum of per-slot Bernoulli entropies over the independent slots i <= j
double graph_entropy(const EdgeProbabilityGraph& g);

// Entropy of each adjacency-matrix section induced by the partition:
// within-block slots (self-loops included) and cross-block slots. The total
// always equals graph_entropy(g) -- information is conserved under any
// choice of boundaries.
BlockEntropyReport block_entropies(const EdgeProbabilityGraph& g,
                                   const NodePartition& part);

// H(target block) recovered by the chain rule: H(G) minus the joint entropy
// of every other section.
double conditional_block_entropy(const EdgeProbabilityGraph& g,
                                 const NodePartition& part, int target_block);

struct BipartitionResult {
    NodePartition partition;
    BlockEntropyReport report;
    double cross_entropy_rate = 0.0; // mean bits per cross slot (search objective)
};

// Exhaustive scan of all 2^(n-1)-1 nontrivial bipartitions, minimizing the
// mean per-slot cross entropy; ties go to the lexicographically smallest
// block assignment. Throws if n exceeds max_exhaustive_n.
BipartitionResult best_bipartition(const EdgeProbabilityGraph& g,
                                   int max_exhaustive_n = 16);

// one Bernoulli draw per slot i <= j, mirrored; row-major n x n 0/1 matrix
std::vector<std::uint8_t> sample_graph(const EdgeProbabilityGraph& g,
                                       std::uint64_t seed);

// {"n": int, "p": [[...]]} or {"n": int, "uniform_p": real}
EdgeProbabilityGraph graph_from_json(const std::string& text);
std::string graph_to_json(const EdgeProbabilityGraph& g);
std::string adjacency_to_json(const std::vector<std::uint8_t>& adj, int n);

} // namespace cie::graph
