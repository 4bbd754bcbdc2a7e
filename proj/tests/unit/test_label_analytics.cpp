#include <doctest.h>

#include <random>

#include "../support/oracles.hpp"
#include "nettask/label_analytics.hpp"
#include "nettask/stats.hpp"

using namespace nettask;

TEST_CASE("bias of a perfectly sorted graph") {
    // Two cliques of 3; positives fill one clique.
    std::vector<Arc> pairs{{0, 1}, {0, 2}, {1, 2}, {3, 4}, {3, 5}, {4, 5}};
    const auto e = EdgeSet::from_pairs(6, pairs, Provenance::observed);
    const auto r = network_label_bias(e, LabelSet("g", {1, 1, 1, 0, 0, 0}));
    REQUIRE(r.bias);
    CHECK(*r.bias == doctest::Approx(0.5));
    CHECK(r.n_evaluated == 3);
    CHECK(r.n_positive == 3);
}

TEST_CASE("bias uses the lower median") {
    // Positive 0 has neighbors {1(+)} -> 1; positive 1 has {0(+),2(-)} -> 1/2.
    std::vector<Arc> pairs{{0, 1}, {1, 2}};
    const auto e = EdgeSet::from_pairs(4, pairs, Provenance::observed);
    const auto r = network_label_bias(e, LabelSet("g", {1, 1, 0, 0}));
    REQUIRE(r.bias);
    CHECK(*r.bias == doctest::Approx(0.5 - 0.5));
}

TEST_CASE("bias is undefined without evaluable positives") {
    std::vector<Arc> pairs{{0, 1}};
    const auto e = EdgeSet::from_pairs(3, pairs, Provenance::observed);
    CHECK_THROWS_AS(network_label_bias(e, LabelSet("g", {0, 0, 0})), UndefinedBiasError);
    CHECK_THROWS_AS(network_label_bias(e, LabelSet("g", {0, 0, 1})), UndefinedBiasError);

    LabelSets sets;
    sets.emplace("none", LabelSet("none", {0, 0, 0}));
    sets.emplace("isolated", LabelSet("isolated", {0, 0, 1}));
    sets.emplace("fine", LabelSet("fine", {1, 1, 0}));
    const auto table = bias_scatter_table(e, sets);
    REQUIRE(table.size() == 3);
    CHECK(table[0].labelset == "fine");
    CHECK(table[0].bias.has_value());
    CHECK(table[1].labelset == "isolated");
    CHECK_FALSE(table[1].bias.has_value());
    CHECK(table[1].reason == "all-positives-isolated");
    CHECK(table[2].reason == "no-positives");
}

TEST_CASE("bias matches a brute-force computation on random graphs") {
    std::mt19937_64 gen(21);
    std::bernoulli_distribution edge(0.1), label(0.3);
    for (int rep = 0; rep < 50; ++rep) {
        const std::size_t n = 30;
        std::vector<Arc> arcs;
        for (NodeId i = 0; i < n; ++i)
            for (NodeId j = 0; j < n; ++j)
                if (i != j && edge(gen)) arcs.emplace_back(i, j);
        const auto e = EdgeSet::from_arcs(n, arcs, Provenance::knn);
        std::vector<std::uint8_t> y(n);
        for (auto& v : y) v = label(gen) ? 1 : 0;
        const auto expect = oracle::bias(e, y);
        if (!expect) continue;
        const auto got = network_label_bias(e, LabelSet("x", y));
        REQUIRE(got.bias);
        CHECK(*got.bias == doctest::Approx(*expect).epsilon(1e-12));
        CHECK(*got.bias >= -1.0);
        CHECK(*got.bias <= 1.0);
    }
}

TEST_CASE("delta bias of an edge set with itself is exactly zero") {
    std::vector<Arc> pairs{{0, 1}, {1, 2}, {2, 3}};
    const auto e = EdgeSet::from_pairs(4, pairs, Provenance::observed);
    LabelSets sets;
    sets.emplace("a", LabelSet("a", {1, 1, 0, 0}));
    sets.emplace("b", LabelSet("b", {0, 1, 1, 1}));
    const auto t = bias_scatter_table(e, sets);
    const auto d = delta_bias(t, t, "E", "E");
    CHECK(d.mean == 0.0);
    CHECK(d.stddev == 0.0);
    CHECK(d.deltas.size() == 2);
}

TEST_CASE("delta bias statistics") {
    std::vector<BiasReport> base{{"a", 0.1, 0.2, 1, 1, ""}, {"b", 0.1, 0.1, 1, 1, ""}, {"c", 0.1, std::nullopt, 0, 0, "x"}};
    std::vector<BiasReport> other{{"a", 0.1, 0.6, 1, 1, ""}, {"b", 0.1, 0.3, 1, 1, ""}, {"c", 0.1, 0.5, 1, 1, ""}};
    const auto d = delta_bias(base, other);
    CHECK(d.deltas.size() == 2);
    CHECK(d.mean == doctest::Approx(0.3));
    CHECK(d.stddev == doctest::Approx(0.1));  // population: deltas 0.4 and 0.2
    std::vector<BiasReport> unrelated{{"z", 0.1, 0.2, 1, 1, ""}};
    CHECK_THROWS_AS(delta_bias(base, unrelated), InputError);
}

TEST_CASE("stats helpers") {
    CHECK(lower_median(std::vector<int>{4, 1, 3, 2}) == 2);
    CHECK(lower_median(std::vector<int>{5}) == 5);
    CHECK_THROWS_AS(lower_median(std::vector<int>{}), InputError);
    Eigen::VectorXd v(4);
    v << 1, 2, 3, 4;
    CHECK(population_stddev(v) == doctest::Approx(std::sqrt(1.25)));
    CHECK(lower_median(v) == 2.0);

    Eigen::VectorXd x(4), y(4);
    x << 0, 1, 2, 3;
    y << 1, 3, 5, 7;
    const auto f = ols_fit(x, y);
    CHECK(*f.slope == doctest::Approx(2.0));
    CHECK(*f.intercept == doctest::Approx(1.0));
    CHECK(*f.pearson_r == doctest::Approx(1.0));
    y << 2, 2, 2, 2;
    const auto flat = ols_fit(x, y);
    CHECK(*flat.slope == doctest::Approx(0.0));
    CHECK_FALSE(flat.pearson_r.has_value());
    x << 1, 1, 1, 1;
    CHECK_FALSE(ols_fit(x, y).slope.has_value());
}
