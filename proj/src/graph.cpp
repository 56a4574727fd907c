#include "cie/graph.hpp"

#include "cie/entropy.hpp"
#include "cie/kernels.hpp"
#include "cie/rng.hpp"

#include <json.hpp>

#include <algorithm>
#include <map>
#include <stdexcept>

namespace cie::graph {

EdgeProbabilityGraph::EdgeProbabilityGraph(int n, std::vector<double> p)
    : n_(n), p_(std::move(p)) {
    if (n_ < 1) throw std::invalid_argument("graph: node count must be >= 1");
    if (p_.size() != static_cast<std::size_t>(n_) * n_)
        throw std::invalid_argument("graph: probability matrix is not n x n");
    for (int i = 0; i < n_; ++i) {
        for (int j = 0; j < n_; ++j) {
            const double v = p_[static_cast<std::size_t>(i) * n_ + j];
            if (!(v >= 0.0) || v > 1.0)
                throw std::invalid_argument(
                    "graph: edge probability outside [0,1] at (" +
                    std::to_string(i) + "," + std::to_string(j) + ")");
            if (p_[static_cast<std::size_t>(i) * n_ + j] !=
                p_[static_cast<std::size_t>(j) * n_ + i])
                throw std::invalid_argument(
                    "graph: probability matrix is not symmetric at (" +
                    std::to_string(i) + "," + std::to_string(j) + ")");
        }
    }
}

EdgeProbabilityGraph EdgeProbabilityGraph::uniform(int n, double p) {
    return EdgeProbabilityGraph(
        n, std::vector<double>(static_cast<std::size_t>(n) * n, p));
}

NodePartition::NodePartition(std::vector<int> block_of)
    : block_of_(std::move(block_of)) {
    if (block_of_.empty())
        throw std::invalid_argument("partition: no nodes assigned");
    k_ = 1 + *std::max_element(block_of_.begin(), block_of_.end());
    std::vector<int> count(static_cast<std::size_t>(k_), 0);
    for (int b : block_of_) {
        if (b < 0)
            throw std::invalid_argument("partition: negative block id");
        ++count[static_cast<std::size_t>(b)];
    }
    for (int b = 0; b < k_; ++b)
        if (count[static_cast<std::size_t>(b)] == 0)
            throw std::invalid_argument("partition: empty block " +
                                        std::to_string(b));
}

double graph_entropy(const EdgeProbabilityGraph& g) {
    double bits = 0.0;
    for (int i = 0; i < g.n(); ++i)
        for (int j = i; j < g.n(); ++j)
            bits += bernoulli_entropy(g.p(i, j), Unit::bits);
    return bits;
}

BlockEntropyReport block_entropies(const EdgeProbabilityGraph& g,
                                   const NodePartition& part) {
    if (part.node_count() != g.n())
        throw std::invalid_argument(
            "block_entropies: partition covers " +
            std::to_string(part.node_count()) + " nodes, graph has " +
            std::to_string(g.n()));

    const int k = part.block_count();
    std::vector<double> within(static_cast<std::size_t>(k), 0.0);
    std::map<std::pair<int, int>, double> cross;
    for (int a = 0; a < k; ++a)
        for (int b = a + 1; b < k; ++b) cross[{a, b}] = 0.0;

    for (int i = 0; i < g.n(); ++i) {
        for (int j = i; j < g.n(); ++j) {
            const double h = bernoulli_entropy(g.p(i, j), Unit::bits);
            const int bi = part.block_of(i), bj = part.block_of(j);
            if (bi == bj)
                within[static_cast<std::size_t>(bi)] += h;
            else
                cross[{std::min(bi, bj), std::max(bi, bj)}] += h;
        }
    }

    BlockEntropyReport report;
    double total = 0.0;
    for (int b = 0; b < k; ++b) {
        report.within.emplace_back(b, within[static_cast<std::size_t>(b)]);
        total += within[static_cast<std::size_t>(b)];
    }
    for (const auto& [key, h] : cross) {
        report.cross.emplace_back(key.first, key.second, h);
        total += h;
    }
    report.total = total;
    return report;
}

double conditional_block_entropy(const EdgeProbabilityGraph& g,
                                 const NodePartition& part, int target_block) {
    if (target_block < 0 || target_block >= part.block_count())
        throw std::invalid_argument("conditional_block_entropy: unknown block " +
                                    std::to_string(target_block));
    const BlockEntropyReport report = block_entropies(g, part);
    double others = 0.0;
    for (const auto& [block, h] : report.within)
        if (block != target_block) others += h;
    for (const auto& [a, b, h] : report.cross) others += h;
    return graph_entropy(g) - others;
}

BipartitionResult best_bipartition(const EdgeProbabilityGraph& g,
                                   int max_exhaustive_n) {
    const int n = g.n();
    if (n < 2)
        throw std::invalid_argument("best_bipartition: need at least 2 nodes");
    if (n > max_exhaustive_n)
        throw std::invalid_argument(
            "best_bipartition: n = " + std::to_string(n) +
            " exceeds the exhaustive cap " + std::to_string(max_exhaustive_n));

    std::vector<double> slot_bits(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            slot_bits[static_cast<std::size_t>(i) * n + j] =
                bernoulli_entropy(g.p(i, j), Unit::bits);

    const kernels::BipartitionBest best = kernels::bipartition_scan(slot_bits.data(), n);

    std::vector<int> assignment(static_cast<std::size_t>(n), 0);
    for (int i = 1; i < n; ++i)
        assignment[static_cast<std::size_t>(i)] =
            static_cast<int>((best.mask >> (i - 1)) & 1u);

    BipartitionResult result{NodePartition(assignment), {}, best.rate};
    result.report = block_entropies(g, result.partition);
    return result;
}

std::vector<std::uint8_t> sample_graph(const EdgeProbabilityGraph& g,
                                       std::uint64_t seed) {
    const int n = g.n();
    std::vector<std::uint8_t> adj(static_cast<std::size_t>(n) * n, 0);
    SplitMix64 rng(seed);
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            const std::uint8_t v = rng.next_double() < g.p(i, j) ? 1 : 0;
            adj[static_cast<std::size_t>(i) * n + j] = v;
            adj[static_cast<std::size_t>(j) * n + i] = v;
        }
    }
    return adj;
}

EdgeProbabilityGraph graph_from_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("graph json: ") + e.what());
    }
    if (!doc.contains("n") || !doc["n"].is_number_integer())
        throw std::invalid_argument("graph json: missing integer field \"n\"");
    const int n = doc["n"].get<int>();
    if (doc.contains("uniform_p")) {
        if (!doc["uniform_p"].is_number())
            throw std::invalid_argument(
                "graph json: field \"uniform_p\" must be a number");
        return EdgeProbabilityGraph::uniform(n, doc["uniform_p"].get<double>());
    }
    if (!doc.contains("p") || !doc["p"].is_array())
        throw std::invalid_argument(
            "graph json: need field \"p\" (matrix) or \"uniform_p\" (scalar)");
    std::vector<double> p;
    p.reserve(static_cast<std::size_t>(n) * n);
    if (doc["p"].size() != static_cast<std::size_t>(n))
        throw std::invalid_argument("graph json: field \"p\" must have n rows");
    for (const auto& row : doc["p"]) {
        if (!row.is_array() || row.size() != static_cast<std::size_t>(n))
            throw std::invalid_argument(
                "graph json: every row of \"p\" must have n entries");
        for (const auto& v : row) {
            if (!v.is_number())
                throw std::invalid_argument(
                    "graph json: non-numeric entry in \"p\"");
            p.push_back(v.get<double>());
        }
    }
    return EdgeProbabilityGraph(n, std::move(p));
}

std::string graph_to_json(const EdgeProbabilityGraph& g) {
    nlohmann::json doc;
    doc["n"] = g.n();
    nlohmann::json rows = nlohmann::json::array();
    for (int i = 0; i < g.n(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (int j = 0; j < g.n(); ++j) row.push_back(g.p(i, j));
        rows.push_back(std::move(row));
    }
    doc["p"] = std::move(rows);
    return doc.dump(2);
}

std::string adjacency_to_json(const std::vector<std::uint8_t>& adj, int n) {
    nlohmann::json rows = nlohmann::json::array();
    for (int i = 0; i < n; ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (int j = 0; j < n; ++j)
            row.push_back(static_cast<int>(adj[static_cast<std::size_t>(i) * n + j]));
        rows.push_back(std::move(row));
    }
    return rows.dump();
}

} // namespace cie::graph
