#include <doctest.h>

#include <cmath>

#include "nettask/evaluation.hpp"
#include "nettask/synth.hpp"

using namespace nettask;

namespace {

SynthConfig small_config() {
    SynthConfig c;
    c.num_nodes = 160;
    c.num_dimensions = 240;
    c.num_communities = 4;
    c.mean_plays = 300;
    c.target_degree = 8;
    c.labelsets = labelset_battery(4, 4, 0.2, 1.0, 0.25);
    c.seed = 11;
    return c;
}

const AttributedGraph& small_graph() {
    static const AttributedGraph g = generate_synthetic(small_config()).graph;
    return g;
}

std::vector<std::string> names(const AttributedGraph& g) {
    std::vector<std::string> out;
    for (const auto& [name, ls] : g.labelsets)
        if (ls.positive_count() > 0) out.push_back(name);
    return out;
}

OracleResult result(std::string ls, std::size_t tested, std::size_t correct) {
    OracleResult r;
    r.labelset = std::move(ls);
    r.n_tested = tested;
    r.n_covered = tested;
    r.n_correct = correct;
    return r;
}

}  // namespace

TEST_CASE("lift arithmetic") {
    CHECK(lift(result("a", 10, 8), result("a", 10, 5)) == doctest::Approx(0.3));
    CHECK(lift(result("a", 10, 5), result("a", 10, 5)) == 0.0);
    CHECK(lift(result("a", 10, 2), 4.5) == doctest::Approx(-0.25));
    CHECK_THROWS_AS(lift(result("a", 10, 5), result("b", 10, 5)), InputError);
    CHECK_THROWS_AS(lift(result("a", 10, 5), result("a", 9, 5)), InputError);
    CHECK_THROWS_AS(lift(result("a", 0, 0), 0.0), InputError);
}

TEST_CASE("oracle on hand-built graphs") {
    // Star: every leaf points at the hub. Hub and leaves 1, 2 are positive.
    const auto star = EdgeSet::from_arcs(5, {{1, 0}, {2, 0}, {3, 0}, {4, 0}}, Provenance::observed);
    const LabelSet labels("s", {1, 1, 1, 0, 0});
    const std::vector<SparseCountVector> attrs(5, SparseCountVector({0}, {1}));
    MethodSpec nl;
    nl.method = Method::NL;
    EvalContext ctx;
    const auto r = run_oracle(attrs, star, nl, labels, ctx, Neighborhood::adjacency(), "star");
    CHECK(r.n_tested == 3);
    CHECK(r.n_covered == 2);  // the hub has no out-neighbors
    CHECK(r.n_correct == 2);
    CHECK(r.precision == doctest::Approx(1.0));
    CHECK(r.recall_coverage == doctest::Approx(2.0 / 3.0));

    // All-positive complete graph: NL is always right.
    std::vector<Arc> pairs;
    for (NodeId i = 0; i < 4; ++i)
        for (NodeId j = i + 1; j < 4; ++j) pairs.push_back({i, j});
    const auto k4 = EdgeSet::from_pairs(4, pairs, Provenance::observed);
    const LabelSet all("all", {1, 1, 1, 1});
    const std::vector<SparseCountVector> a4(4, SparseCountVector({0}, {1}));
    CHECK(run_oracle(a4, k4, nl, all, ctx).precision == doctest::Approx(1.0));

    // No arcs: nothing is covered and precision is null.
    const auto empty = EdgeSet::from_arcs(4, {}, Provenance::observed);
    const auto none = run_oracle(a4, empty, nl, all, ctx);
    CHECK(none.n_covered == 0);
    CHECK_FALSE(none.precision.has_value());

    MethodSpec ga;
    ga.method = Method::GA;
    CHECK_THROWS_AS(run_oracle(a4, k4, ga, all, ctx), InputError);
    CHECK_THROWS_AS(run_oracle(a4, k4, nl, LabelSet("z", {0, 0, 0, 0}), ctx), InputError);
}

TEST_CASE("bfs neighborhood of size one is the nearest node") {
    const auto path = EdgeSet::from_pairs(4, std::vector<Arc>{{0, 1}, {1, 2}, {2, 3}}, Provenance::observed);
    const LabelSet labels("p", {1, 0, 1, 1});
    const std::vector<SparseCountVector> attrs(4, SparseCountVector({0}, {1}));
    MethodSpec nl;
    nl.method = Method::NL;
    EvalContext ctx;
    // Node 0 -> 1 (neg), node 2 -> 1 (neg), node 3 -> 2 (pos).
    const auto r = run_oracle(attrs, path, nl, labels, ctx, Neighborhood::bfs(1));
    CHECK(r.n_correct == 1);
    CHECK(r.n_covered == 3);
}

TEST_CASE("heatmap cells match recomputed lift") {
    const auto& g = small_graph();
    const auto ls = names(g);
    REQUIRE(ls.size() >= 2);
    EvalContext ctx;
    ctx.seed = 5;
    ctx.workers = 2;
    const std::vector<Method> methods{Method::NB, Method::NL};
    const auto table = lift_heatmap(g, {{"Social", &g.edges}}, methods, ls, ctx);
    REQUIRE(table.columns.size() == 2);
    CHECK(table.row_order.size() == ls.size());
    for (std::size_t r = 1; r < table.row_order.size(); ++r) {
        const auto a = table.row_mean_ga.at(table.row_order[r - 1]);
        const auto b = table.row_mean_ga.at(table.row_order[r]);
        if (a && b) CHECK(*a >= *b);
    }
    for (const auto& name : ls) {
        const auto base = compute_baselines(g.attributes, g.labelsets.at(name), ctx);
        for (std::size_t c = 0; c < methods.size(); ++c) {
            MethodSpec spec{methods[c], ctx.params, ctx.seed};
            const auto r = run_oracle(g.attributes, g.edges, spec, g.labelsets.at(name), ctx);
            const auto& cell = table.cells.at(name)[c];
            CHECK(cell.result.n_correct == r.n_correct);
            REQUIRE(cell.lift_ga.has_value());
            CHECK(*cell.lift_ga == doctest::Approx(lift(r, base.ga_correct_for(methods[c]))));
            CHECK(*cell.lift_gl == doctest::Approx(lift(r, base.gl)));
        }
    }
    // Column means use only non-null cells.
    for (std::size_t c = 0; c < methods.size(); ++c) {
        double sum = 0;
        std::size_t n = 0;
        for (const auto& name : ls)
            if (auto v = table.cells.at(name)[c].lift_ga) {
                sum += *v;
                ++n;
            }
        CHECK(table.columns[c].n_cells + table.columns[c].n_null == ls.size());
        CHECK(table.columns[c].n_cells == n);
        CHECK(*table.columns[c].mean_lift_ga == doctest::Approx(sum / static_cast<double>(n)));
    }
}

TEST_CASE("baselines: CS and NL use the mean GA precision") {
    Baselines b;
    b.ga[Method::RF] = result("x", 10, 6);
    b.ga[Method::RF].precision = 0.6;
    b.ga[Method::NB] = result("x", 10, 8);
    b.ga[Method::NB].precision = 0.8;
    CHECK(b.ga_correct_for(Method::RF) == 6.0);
    CHECK(b.ga_correct_for(Method::CS) == doctest::Approx(7.0));
    CHECK(b.ga_correct_for(Method::LR) == doctest::Approx(7.0));
}

TEST_CASE("results do not depend on worker count") {
    const auto& g = small_graph();
    const auto ls = names(g);
    EvalContext one, four;
    one.seed = four.seed = 9;
    one.workers = 1;
    four.workers = 4;
    const std::vector<Method> methods{Method::RF, Method::LR};
    const auto a = lift_heatmap(g, {{"Social", &g.edges}}, methods, ls, one);
    const auto b = lift_heatmap(g, {{"Social", &g.edges}}, methods, ls, four);
    CHECK(a.row_order == b.row_order);
    for (const auto& name : ls)
        for (std::size_t c = 0; c < methods.size(); ++c) {
            CHECK(a.cells.at(name)[c].result.n_correct == b.cells.at(name)[c].result.n_correct);
            CHECK(a.cells.at(name)[c].lift_ga == b.cells.at(name)[c].lift_ga);
        }
    const auto s1 = bfs_sweep(g, {"Social", &g.edges}, {Method::NB}, ls, {1, 10}, one);
    const auto s4 = bfs_sweep(g, {"Social", &g.edges}, {Method::NB}, ls, {1, 10}, four);
    CHECK(s1.series[0].mean_lift_ga == s4.series[0].mean_lift_ga);
}

TEST_CASE("density sweep marks infeasible points") {
    const auto& g = small_graph();
    const auto ls = names(g);
    EvalContext ctx;
    const auto s = density_sweep(g, {ModelKind::knn, ModelKind::threshold}, {Method::NL}, ls, {1e-6, 1.0}, ctx);
    REQUIRE(s.series.size() == 2);
    CHECK(s.x == std::vector<double>{1e-6, 1.0});
    for (const auto& series : s.series) {
        CHECK_FALSE(series.mean_lift_ga[0].has_value());
        CHECK(series.mean_lift_ga[1].has_value());
    }
    CHECK(s.series[0].k[1].has_value());
    CHECK_THROWS_AS(density_sweep(g, {ModelKind::knn}, {Method::NL}, ls, {}, ctx), InputError);
}

TEST_CASE("bias-lift regression") {
    std::vector<BiasLiftPoint> pts{{"a", 0.1, 0.2, 0.0}, {"b", 0.2, 0.2, 0.1}, {"c", 0.3, 0.3, 0.2},
                                   {"d", std::nullopt, 0.1, 0.5}, {"e", 0.4, 0.1, std::nullopt}};
    const auto r = bias_lift_regression(pts);
    CHECK(r.n_used == 3);
    CHECK(*r.bias_vs_lift.slope == doctest::Approx(1.0));
    CHECK(*r.bias_vs_lift.intercept == doctest::Approx(0.1));
    CHECK(*r.bias_vs_lift.pearson_r == doctest::Approx(1.0));
    pts.resize(2);
    CHECK_THROWS_AS(bias_lift_regression(pts), InputError);
}
