#include <doctest.h>

#include <cmath>

#include "nettask/synth.hpp"

using namespace nettask;

namespace {

SynthConfig base(double homophily) {
    SynthConfig c;
    c.num_nodes = 400;
    c.num_dimensions = 300;
    c.num_communities = 4;
    c.homophily = homophily;
    c.target_degree = 10;
    c.mean_plays = 250;
    c.seed = 21;
    return c;
}

// Pearson chi-square for the 2x2 table (within/across) x (edge/non-edge).
double chi_square(const SynthResult& r) {
    const double a = static_cast<double>(r.within_edges);
    const double b = static_cast<double>(r.within_pairs) - a;
    const double c = static_cast<double>(r.across_edges);
    const double d = static_cast<double>(r.across_pairs) - c;
    const double n = a + b + c + d;
    const double num = n * std::pow(a * d - b * c, 2);
    return num / ((a + b) * (c + d) * (a + c) * (b + d));
}

}  // namespace

TEST_CASE("generator is deterministic across worker counts") {
    auto c = base(0.5);
    c.labelsets = labelset_battery(3, 4, 0.3, 0.9, 0.2);
    const auto a = generate_synthetic(c, 1);
    const auto b = generate_synthetic(c, 3);
    CHECK(a.graph.edges == b.graph.edges);
    CHECK(a.graph.attributes == b.graph.attributes);
    CHECK(a.graph.labelsets == b.graph.labelsets);
    c.seed = 22;
    CHECK_FALSE(generate_synthetic(c).graph.edges == a.graph.edges);
}

TEST_CASE("homophily extremes") {
    const auto full = generate_synthetic(base(1.0));
    CHECK(full.across_edges == 0);
    CHECK(full.within_edges > 0);
    for (const auto& [u, v] : full.graph.edges.arcs()) CHECK(full.community[u] == full.community[v]);

    // h = 0: ties ignore communities (chi-square, 1 dof, alpha = 0.01).
    const auto none = generate_synthetic(base(0.0));
    CHECK(none.p_within == doctest::Approx(none.p_across));
    CHECK(chi_square(none) < 6.635);
    CHECK(chi_square(generate_synthetic(base(0.5))) > 6.635);
}

TEST_CASE("mean degree tracks the target") {
    const auto r = generate_synthetic(base(0.5));
    const double mean = static_cast<double>(r.graph.edges.num_arcs()) / 400.0;
    CHECK(mean == doctest::Approx(10.0).epsilon(0.1));
}

TEST_CASE("calibrated prevalence") {
    auto c = base(0.5);
    c.num_nodes = 1000;
    c.labelsets = labelset_battery(4, 4, 0.0, 1.0, 0.2);
    const auto r = generate_synthetic(c);
    REQUIRE(r.graph.labelsets.size() == 4);
    for (const auto& [name, ls] : r.graph.labelsets) CHECK(std::abs(ls.prevalence() - 0.2) <= 0.05);
}

TEST_CASE("battery spreads locality and homes") {
    const auto rules = labelset_battery(5, 3, 0.0, 1.0, std::nullopt, 40, 2);
    REQUIRE(rules.size() == 5);
    CHECK(rules.front().locality == 0.0);
    CHECK(rules.back().locality == 1.0);
    CHECK(rules[1].home_community == 1);
    CHECK(rules[3].home_community == 0);
    for (const auto& r : rules) {
        CHECK(r.home_span == 2);
        CHECK(r.genre_size == 40);
    }
}

TEST_CASE("invalid settings are config errors") {
    auto c = base(0.5);
    c.homophily = 1.5;
    CHECK_THROWS_AS(generate_synthetic(c), ConfigError);
    c = base(0.5);
    c.target_degree = 500;
    CHECK_THROWS_AS(generate_synthetic(c), ConfigError);
    // Dense target with many tiny communities forces p_within above 1.
    c = base(1.0);
    c.num_communities = 200;
    c.target_degree = 5;
    CHECK_THROWS_AS(generate_synthetic(c), ConfigError);
    c = base(0.5);
    c.labelsets = labelset_battery(1, 4, 0.5, 0.5, 0.2);
    c.labelsets[0].home_span = 9;
    CHECK_THROWS_AS(generate_synthetic(c), ConfigError);
}
