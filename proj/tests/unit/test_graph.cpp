#include <doctest.h>

#include <cmath>
#include <random>

#include "../support/oracles.hpp"
#include "nettask/graph.hpp"

using namespace nettask;

namespace {

EdgeSet path(std::size_t n) {
    std::vector<Arc> pairs;
    for (NodeId i = 0; i + 1 < n; ++i) pairs.emplace_back(i, i + 1);
    return EdgeSet::from_pairs(n, pairs, Provenance::observed);
}

EdgeSet random_graph(std::size_t n, double p, std::mt19937_64& gen, bool directed) {
    std::bernoulli_distribution coin(p);
    std::vector<Arc> arcs;
    for (NodeId i = 0; i < n; ++i)
        for (NodeId j = directed ? 0 : i + 1; j < n; ++j)
            if (i != j && coin(gen)) arcs.emplace_back(i, j);
    return directed ? EdgeSet::from_arcs(n, arcs, Provenance::knn) : EdgeSet::from_pairs(n, arcs, Provenance::observed);
}

}  // namespace

TEST_CASE("edge set rejects malformed input") {
    CHECK_THROWS_AS(EdgeSet::from_arcs(3, {{0, 0}}, Provenance::observed), InputError);
    CHECK_THROWS_AS(EdgeSet::from_arcs(3, {{0, 3}}, Provenance::observed), InputError);
    CHECK_THROWS_AS(EdgeSet::from_arcs(3, {{0, 1}, {0, 1}}, Provenance::observed), InputError);
    const std::vector<Arc> both{{0, 1}, {1, 0}};
    CHECK_THROWS_AS(EdgeSet::from_pairs(3, both, Provenance::observed), InputError);
}

TEST_CASE("edge set stores sorted adjacency") {
    const auto e = EdgeSet::from_arcs(4, {{2, 1}, {0, 3}, {0, 1}, {2, 0}}, Provenance::knn);
    CHECK(e.num_nodes() == 4);
    CHECK(e.num_arcs() == 4);
    CHECK(std::vector<NodeId>(e.out(0).begin(), e.out(0).end()) == std::vector<NodeId>{1, 3});
    CHECK(std::vector<NodeId>(e.out(2).begin(), e.out(2).end()) == std::vector<NodeId>{0, 1});
    CHECK(e.out_degree(3) == 0);
    CHECK(e.has_arc(2, 0));
    CHECK_FALSE(e.has_arc(0, 2));
    CHECK_FALSE(e.is_symmetric());
    CHECK(e.num_pairs() == 4);
    const auto mutual = EdgeSet::from_arcs(3, {{0, 1}, {1, 0}, {1, 2}}, Provenance::knn);
    CHECK(mutual.num_pairs() == 2);
}

TEST_CASE("pairs are symmetrized") {
    const auto e = path(4);
    CHECK(e.is_symmetric());
    CHECK(e.num_arcs() == 6);
    CHECK(e.num_pairs() == 3);
}

TEST_CASE("labelset validates and counts") {
    CHECK_THROWS_AS(LabelSet("x", {0, 2}), InputError);
    LabelSet l("rock", {1, 0, 1, 1});
    CHECK(l.positive_count() == 3);
    CHECK(l.prevalence() == doctest::Approx(0.75));
    CHECK(l.positive_nodes() == std::vector<NodeId>{0, 2, 3});
}

TEST_CASE("neighborhood returns out-neighbors") {
    const auto e = path(3);
    const auto nb = neighborhood(e, 1);
    CHECK(std::vector<NodeId>(nb.begin(), nb.end()) == std::vector<NodeId>{0, 2});
    CHECK(neighborhood(e, 0).size() == 1);
    CHECK_THROWS_AS(neighborhood(e, 3), InputError);
}

TEST_CASE("bfs order on a path") {
    const auto e = path(6);
    CHECK(bfs_order(e, 0, 3) == std::vector<NodeId>{1, 2, 3});
    CHECK(bfs_order(e, 2, 4) == std::vector<NodeId>{1, 3, 0, 4});
    // Fewer reachable nodes than requested: everything reachable.
    CHECK(bfs_order(e, 0, 100).size() == 5);
    CHECK_THROWS_AS(bfs_order(e, 0, 0), InputError);
}

TEST_CASE("bfs order respects hop distance and prefixes") {
    std::mt19937_64 gen(7);
    for (int rep = 0; rep < 20; ++rep) {
        const bool directed = rep % 2 == 0;
        const auto e = random_graph(40, 0.06, gen, directed);
        const NodeId src = static_cast<NodeId>(rep % 40);
        const auto dist = oracle::hop_distances(e, src);
        std::size_t reachable = 0;
        for (std::size_t v = 0; v < dist.size(); ++v) reachable += (dist[v] > 0);
        const auto full = bfs_order(e, src, 39);
        REQUIRE(full.size() == reachable);
        for (std::size_t k = 0; k < full.size(); ++k) {
            CHECK(dist[full[k]] > 0);
            if (k > 0) {
                CHECK(dist[full[k - 1]] <= dist[full[k]]);
                if (dist[full[k - 1]] == dist[full[k]]) CHECK(full[k - 1] < full[k]);
            }
        }
        for (std::size_t k = 1; k <= full.size(); k += 3) {
            const auto part = bfs_order(e, src, k);
            CHECK(part == std::vector<NodeId>(full.begin(), full.begin() + static_cast<std::ptrdiff_t>(k)));
        }
    }
}

TEST_CASE("degree statistics") {
    // Star with 4 leaves: degrees 4,1,1,1,1.
    const std::vector<Arc> star{{0, 1}, {0, 2}, {0, 3}, {0, 4}};
    const auto e = EdgeSet::from_pairs(5, star, Provenance::observed);
    const auto s = degree_stats(e);
    CHECK(s.median_degree == 1);
    REQUIRE(s.powerlaw_alpha.has_value());
    CHECK(*s.powerlaw_alpha == doctest::Approx(1.0 + 5.0 / std::log(4.0)));

    const auto pathed = degree_stats(EdgeSet::from_pairs(2, std::vector<Arc>{{0, 1}}, Provenance::observed));
    CHECK_FALSE(pathed.powerlaw_alpha.has_value());
    CHECK_THROWS_AS(degree_stats(EdgeSet::from_arcs(3, {}, Provenance::observed)), InputError);
}

TEST_CASE("attributed graph validation") {
    AttributedGraph g;
    g.num_nodes = 2;
    g.num_dims = 3;
    g.edges = path(2);
    g.attributes = {SparseCountVector({0}, {2}), SparseCountVector({2}, {1})};
    g.labelsets.emplace("a", LabelSet("a", {1, 0}));
    CHECK_NOTHROW(g.validate());
    g.attributes[1] = SparseCountVector({3}, {1});
    CHECK_THROWS_AS(g.validate(), InputError);
}
