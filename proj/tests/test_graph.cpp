#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cie/entropy.hpp"
#include "cie/graph.hpp"
#include "cie/rng.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

using namespace cie;
using namespace cie::graph;

namespace {

// independent oracle: slot counting; every p = 0.5 slot is worth one bit
int slots_within(const std::vector<int>& nodes) {
    const int m = static_cast<int>(nodes.size());
    return m * (m + 1) / 2;
}

EdgeProbabilityGraph planted_graph(int n, const std::vector<int>& community,
                                   double p_in, double p_cross) {
    std::vector<double> p(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            p[static_cast<std::size_t>(i) * n + j] =
                community[static_cast<std::size_t>(i)] ==
                        community[static_cast<std::size_t>(j)]
                    ? p_in
                    : p_cross;
    return EdgeProbabilityGraph(n, p);
}

EdgeProbabilityGraph random_graph(int n, SplitMix64& rng) {
    std::vector<double> p(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            const double v = rng.next_double();
            p[static_cast<std::size_t>(i) * n + j] = v;
            p[static_cast<std::size_t>(j) * n + i] = v;
        }
    return EdgeProbabilityGraph(n, p);
}

NodePartition random_partition(int n, int k, SplitMix64& rng) {
    while (true) {
        std::vector<int> assignment(static_cast<std::size_t>(n));
        for (auto& a : assignment)
            a = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(k)));
        std::vector<int> seen(static_cast<std::size_t>(k), 0);
        for (int a : assignment) seen[static_cast<std::size_t>(a)] = 1;
        if (std::count(seen.begin(), seen.end(), 1) == k)
            return NodePartition(assignment);
    }
}

} // namespace

TEST_CASE("eight-node fair-coin graph carries 36 bits") {
    const auto g = EdgeProbabilityGraph::uniform(8, 0.5);
    CHECK(graph_entropy(g) == doctest::Approx(36.0).epsilon(1e-12));
}

TEST_CASE("deterministic and small graphs") {
    CHECK(graph_entropy(EdgeProbabilityGraph::uniform(8, 1.0)) == 0.0);
    CHECK(graph_entropy(EdgeProbabilityGraph::uniform(3, 0.5)) ==
          doctest::Approx(6.0).epsilon(1e-12));
}

TEST_CASE("block decomposition of the 8-node example") {
    const auto g = EdgeProbabilityGraph::uniform(8, 0.5);
    const NodePartition part({0, 0, 0, 0, 1, 1, 1, 1});
    const BlockEntropyReport r = block_entropies(g, part);

    REQUIRE(r.within.size() == 2);
    CHECK(r.within[0].second == doctest::Approx(10.0).epsilon(1e-12));
    CHECK(r.within[1].second == doctest::Approx(10.0).epsilon(1e-12));
    REQUIRE(r.cross.size() == 1);
    CHECK(std::get<2>(r.cross[0]) == doctest::Approx(16.0).epsilon(1e-12));
    CHECK(r.total == doctest::Approx(36.0).epsilon(1e-12));
    CHECK(r.total == doctest::Approx(graph_entropy(g)).epsilon(1e-12));
}

TEST_CASE("single block holds the whole graph") {
    const auto g = EdgeProbabilityGraph::uniform(8, 0.5);
    const NodePartition part(std::vector<int>(8, 0));
    const BlockEntropyReport r = block_entropies(g, part);
    REQUIRE(r.within.size() == 1);
    CHECK(r.within[0].second == doctest::Approx(graph_entropy(g)));
    CHECK(r.cross.empty());
}

TEST_CASE("peel-one split of the 8-node example") {
    // oracle: count slots per section, one bit each
    const auto g = EdgeProbabilityGraph::uniform(8, 0.5);
    const NodePartition part({0, 1, 1, 1, 1, 1, 1, 1});
    const BlockEntropyReport r = block_entropies(g, part);
    CHECK(r.within[0].second == doctest::Approx(slots_within({1})));      // 1
    CHECK(r.within[1].second ==
          doctest::Approx(slots_within({2, 3, 4, 5, 6, 7, 8})));          // 28
    CHECK(std::get<2>(r.cross[0]) == doctest::Approx(7.0));
}

TEST_CASE("partition must cover the graph") {
    const auto g = EdgeProbabilityGraph::uniform(4, 0.5);
    const NodePartition part({0, 1, 0});
    CHECK_THROWS_AS(block_entropies(g, part), std::invalid_argument);
}

TEST_CASE("conditional block entropy via the chain rule") {
    const auto g = EdgeProbabilityGraph::uniform(8, 0.5);
    CHECK(conditional_block_entropy(g, NodePartition({0, 0, 0, 0, 1, 1, 1, 1}), 0) ==
          doctest::Approx(10.0).epsilon(1e-12));
    CHECK(conditional_block_entropy(g, NodePartition(std::vector<int>(8, 0)), 0) ==
          doctest::Approx(36.0).epsilon(1e-12));
    CHECK(conditional_block_entropy(g, NodePartition({0, 1, 1, 1, 1, 1, 1, 1}), 0) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(
        conditional_block_entropy(g, NodePartition({0, 0, 0, 0, 1, 1, 1, 1}), 7),
        std::invalid_argument);
}

TEST_CASE("conservation holds for random graphs and partitions") {
    SplitMix64 rng(123);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 2 + static_cast<int>(rng.next_below(9));
        const auto g = random_graph(n, rng);
        const int k = 1 + static_cast<int>(
                              rng.next_below(static_cast<std::uint64_t>(
                                  std::min(4, n))));
        const NodePartition part = random_partition(n, k, rng);
        const BlockEntropyReport r = block_entropies(g, part);
        CHECK(std::abs(r.total - graph_entropy(g)) < 1e-9);
    }
}

TEST_CASE("refining a partition moves entropy but keeps the total") {
    SplitMix64 rng(77);
    const auto g = random_graph(9, rng);
    const NodePartition coarse = random_partition(9, 2, rng);
    // refine: split block 0 by node parity
    std::vector<int> refined(9);
    for (int i = 0; i < 9; ++i) {
        if (coarse.block_of(i) == 0)
            refined[static_cast<std::size_t>(i)] = (i % 2 == 0) ? 0 : 2;
        else
            refined[static_cast<std::size_t>(i)] = 1;
    }
    if (std::count(refined.begin(), refined.end(), 2) > 0 &&
        std::count(refined.begin(), refined.end(), 0) > 0) {
        const double t1 = block_entropies(g, coarse).total;
        const double t2 = block_entropies(g, NodePartition(refined)).total;
        CHECK(t1 == doctest::Approx(t2).epsilon(1e-12));
    }
}

TEST_CASE("sharpening an edge never increases total entropy") {
    SplitMix64 rng(31);
    for (int trial = 0; trial < 40; ++trial) {
        const int n = 3 + static_cast<int>(rng.next_below(5));
        const auto g = random_graph(n, rng);
        const double before = graph_entropy(g);
        const int i = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n)));
        const int j = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n)));
        std::vector<double> p(static_cast<std::size_t>(n) * n);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                p[static_cast<std::size_t>(a) * n + b] = g.p(a, b);
        const double sharp = rng.next_double() < 0.5 ? 0.0 : 1.0;
        p[static_cast<std::size_t>(i) * n + j] = sharp;
        p[static_cast<std::size_t>(j) * n + i] = sharp;
        CHECK(graph_entropy(EdgeProbabilityGraph(n, p)) <= before + 1e-12);
    }
}

TEST_CASE("planted bipartition is recovered") {
    const std::vector<int> community{0, 0, 0, 0, 1, 1, 1, 1};
    const auto g = planted_graph(8, community, 0.95, 0.02);
    const BipartitionResult best = best_bipartition(g);

    // recovered split equals the planted one up to block relabeling
    const auto& a = best.partition.assignment();
    bool direct = true, flipped = true;
    for (int i = 0; i < 8; ++i) {
        direct = direct && a[static_cast<std::size_t>(i)] ==
                               community[static_cast<std::size_t>(i)];
        flipped = flipped && a[static_cast<std::size_t>(i)] ==
                                 1 - community[static_cast<std::size_t>(i)];
    }
    CHECK((direct || flipped));

    // the returned rate is minimal against full enumeration
    for (std::uint32_t mask = 1; mask < (1u << 7); ++mask) {
        double sum = 0.0;
        int count = 0;
        for (int i = 0; i < 8; ++i) {
            const bool side_i = i > 0 && ((mask >> (i - 1)) & 1u);
            for (int j = i + 1; j < 8; ++j) {
                const bool side_j = (mask >> (j - 1)) & 1u;
                if (side_i != side_j) {
                    sum += bernoulli_entropy(g.p(i, j), Unit::bits);
                    ++count;
                }
            }
        }
        CHECK(best.cross_entropy_rate <= sum / count + 1e-9);
    }
}

TEST_CASE("identical edge probabilities tie-break lexicographically") {
    const auto g = EdgeProbabilityGraph::uniform(6, 0.3);
    const BipartitionResult best = best_bipartition(g);
    // smallest assignment vector: all nodes in block 0 except the last
    const std::vector<int> expected{0, 0, 0, 0, 0, 1};
    CHECK(best.partition.assignment() == expected);
    // that split also has the minimal cross-slot count (n - 1 slots)
    CHECK(best.cross_entropy_rate ==
          doctest::Approx(bernoulli_entropy(0.3, Unit::bits)).epsilon(1e-9));
}

TEST_CASE("two nodes with a certain non-edge split cleanly") {
    std::vector<double> p{0.5, 0.0, 0.0, 0.5};
    const EdgeProbabilityGraph g(2, p);
    const BipartitionResult best = best_bipartition(g);
    CHECK(best.partition.assignment() == std::vector<int>{0, 1});
    CHECK(std::get<2>(best.report.cross[0]) == 0.0);
}

TEST_CASE("bipartition search refuses oversized graphs") {
    const auto g = EdgeProbabilityGraph::uniform(17, 0.5);
    CHECK_THROWS_AS(best_bipartition(g), std::invalid_argument);
    CHECK_THROWS_AS(best_bipartition(EdgeProbabilityGraph::uniform(1, 0.5)),
                    std::invalid_argument);
}

TEST_CASE("graph sampling determinism and extremes") {
    const auto full = EdgeProbabilityGraph::uniform(5, 1.0);
    const auto empty = EdgeProbabilityGraph::uniform(5, 0.0);
    const auto adj_full = sample_graph(full, 9);
    const auto adj_empty = sample_graph(empty, 9);
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) {
            CHECK(adj_full[static_cast<std::size_t>(i) * 5 + j] == 1);
            CHECK(adj_empty[static_cast<std::size_t>(i) * 5 + j] == 0);
        }

    const auto g = EdgeProbabilityGraph::uniform(4, 0.37);
    CHECK(sample_graph(g, 1234) == sample_graph(g, 1234));
    CHECK(sample_graph(g, 1234) != sample_graph(g, 1235));
}

TEST_CASE("sampled edge frequencies approach the slot probability") {
    const int n = 6;
    const auto g = EdgeProbabilityGraph::uniform(n, 0.5);
    std::vector<int> hits(static_cast<std::size_t>(n) * n, 0);
    const int draws = 10000;
    for (int s = 0; s < draws; ++s) {
        const auto adj = sample_graph(g, static_cast<std::uint64_t>(s));
        for (int i = 0; i < n * n; ++i) hits[static_cast<std::size_t>(i)] += adj[static_cast<std::size_t>(i)];
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double freq =
                static_cast<double>(hits[static_cast<std::size_t>(i) * n + j]) / draws;
            CHECK(std::abs(freq - 0.5) < 0.02);
        }
    // symmetry of every sample
    const auto adj = sample_graph(g, 5);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            CHECK(adj[static_cast<std::size_t>(i) * n + j] ==
                  adj[static_cast<std::size_t>(j) * n + i]);
}

TEST_CASE("graph json round trip and error reporting") {
    const auto g = EdgeProbabilityGraph::uniform(3, 0.25);
    const auto back = graph_from_json(graph_to_json(g));
    CHECK(back.n() == 3);
    CHECK(back.p(0, 1) == 0.25);

    const auto uniform = graph_from_json("{\"n\": 4, \"uniform_p\": 0.5}");
    CHECK(uniform.n() == 4);
    CHECK(graph_entropy(uniform) == doctest::Approx(10.0));

    CHECK_THROWS_AS(graph_from_json("{\"p\": [[0.5]]}"), std::invalid_argument);
    CHECK_THROWS_AS(graph_from_json("{\"n\": 2, \"p\": [[0.5, 0.1]]}"),
                    std::invalid_argument);
    CHECK_THROWS_AS(graph_from_json("not json"), std::invalid_argument);
    CHECK_THROWS_AS(graph_from_json("{\"n\": 2, \"p\": [[0.5, 0.2], [0.3, 0.5]]}"),
                    std::invalid_argument); // asymmetric
}

TEST_CASE("graph type validation") {
    CHECK_THROWS_AS(EdgeProbabilityGraph(2, std::vector<double>{0.5}),
                    std::invalid_argument);
    CHECK_THROWS_AS(EdgeProbabilityGraph(1, std::vector<double>{1.5}),
                    std::invalid_argument);
    CHECK_THROWS_AS(NodePartition(std::vector<int>{0, 2}), std::invalid_argument);
    CHECK_THROWS_AS(NodePartition(std::vector<int>{}), std::invalid_argument);
    CHECK_THROWS_AS(NodePartition(std::vector<int>{-1, 0}), std::invalid_argument);
}
