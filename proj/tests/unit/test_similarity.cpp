#include <doctest.h>

#include <random>

#include "../support/oracles.hpp"
#include "nettask/network_models.hpp"
#include "nettask/similarity.hpp"

using namespace nettask;

TEST_CASE("intersection similarity examples") {
    const SparseCountVector a({0, 1, 2}, {3, 0 + 1, 5});
    const SparseCountVector b({0, 2, 4}, {1, 7, 9});
    CHECK(s_int(a, b) == 1 + 5);
    CHECK(s_int(a, a) == a.total());
    CHECK(s_int(a, SparseCountVector()) == 0);
}

TEST_CASE("cosine similarity") {
    const SparseCountVector a({0, 1}, {3, 4});
    const SparseCountVector b({0, 1}, {6, 8});
    CHECK(s_cos(a, b) == doctest::Approx(1.0));
    CHECK(s_cos(a, SparseCountVector({5}, {2})) == 0.0);
    CHECK(s_cos(a, SparseCountVector()) == 0.0);
    CHECK(s_cos(SparseCountVector({0}, {1}), SparseCountVector({0, 1}, {1, 1})) ==
          doctest::Approx(1.0 / std::sqrt(2.0)));
}

TEST_CASE("similarity properties on random vectors") {
    std::mt19937_64 gen(11);
    const auto rows = oracle::random_rows(30, 20, 0.3, 9, gen);
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows.size(); ++j) {
            CHECK(s_int(rows[i], rows[j]) == s_int(rows[j], rows[i]));
            CHECK(s_cos(rows[i], rows[j]) == s_cos(rows[j], rows[i]));
            CHECK(s_int(rows[i], rows[j]) <= std::min(rows[i].total(), rows[j].total()));
            const double c = s_cos(rows[i], rows[j]);
            CHECK(c >= 0.0);
            CHECK(c <= 1.0 + 1e-12);
        }
}

TEST_CASE("top-k per node matches brute force") {
    std::mt19937_64 gen(3);
    for (int rep = 0; rep < 10; ++rep) {
        const auto rows = oracle::random_rows(50, 15, 0.2, 4, gen);
        for (auto s : {Similarity::intersection, Similarity::cosine})
            for (std::size_t k : {1, 3, 10, 60}) {
                CHECK(topk_per_node(rows, s, k, 1) == oracle::topk_per_node(rows, 15, s, k));
                CHECK(topk_per_node(rows, s, k, 4) == oracle::topk_per_node(rows, 15, s, k));
            }
    }
}

TEST_CASE("top-lambda global matches brute force") {
    std::mt19937_64 gen(5);
    for (int rep = 0; rep < 10; ++rep) {
        const auto rows = oracle::random_rows(40, 12, 0.25, 3, gen);
        for (auto s : {Similarity::intersection, Similarity::cosine})
            for (std::size_t lambda : {1, 7, 50, 2000}) {
                CHECK(topk_global(rows, s, lambda, 1) == oracle::topk_global(rows, 12, s, lambda));
                CHECK(topk_global(rows, s, lambda, 3) == oracle::topk_global(rows, 12, s, lambda));
            }
    }
}

TEST_CASE("top-k rejects zero budgets and skips zero similarity") {
    const std::vector<SparseCountVector> rows{SparseCountVector({0}, {1}), SparseCountVector({1}, {1}),
                                              SparseCountVector({0}, {2})};
    CHECK_THROWS_AS(topk_per_node(rows, Similarity::intersection, 0), InputError);
    CHECK_THROWS_AS(topk_global(rows, Similarity::intersection, 0), InputError);
    const auto pairs = topk_global(rows, Similarity::intersection, 10);
    REQUIRE(pairs.size() == 1);
    CHECK(pairs[0] == ScoredPair{0, 2, 1.0});
    CHECK(count_nonzero_pairs(rows) == 1);
}

TEST_CASE("knn model structure") {
    std::mt19937_64 gen(9);
    const auto rows = oracle::random_rows(60, 25, 0.15, 5, gen);
    CHECK(knn_k(120, 60) == 2);
    CHECK(knn_k(59, 60) == 0);
    ModelSpec spec{ModelKind::knn, Similarity::intersection, 180, std::nullopt};
    const auto e = build_knn(rows, spec, 2);
    CHECK(e.provenance() == Provenance::knn);
    const auto dense = oracle::densify(rows, 25);
    for (NodeId i = 0; i < 60; ++i) {
        std::size_t peers = 0;
        for (NodeId j = 0; j < 60; ++j)
            if (j != i && oracle::score(Similarity::intersection, dense[i], dense[j]) > 0) ++peers;
        CHECK(e.out_degree(i) == std::min<std::size_t>(3, peers));
    }
    spec.lambda = 59;
    CHECK_THROWS_AS(build_knn(rows, spec), DensityTooLowError);
}

TEST_CASE("threshold model structure") {
    std::mt19937_64 gen(13);
    const auto rows = oracle::random_rows(60, 25, 0.1, 5, gen);
    const std::size_t nonzero = count_nonzero_pairs(rows);
    for (std::size_t lambda : {std::size_t{1}, std::size_t{40}, nonzero, nonzero + 100}) {
        const auto e = build_threshold(rows, {ModelKind::threshold, Similarity::cosine, lambda, std::nullopt});
        CHECK(e.is_symmetric());
        CHECK(e.num_pairs() == std::min(lambda, nonzero));
        CHECK(e.provenance() == Provenance::threshold);
    }
}

TEST_CASE("density matching") {
    const std::vector<Arc> pairs{{0, 1}, {1, 2}, {2, 3}, {3, 0}};
    const auto observed = EdgeSet::from_pairs(4, pairs, Provenance::observed);
    CHECK(match_density(observed, 1.0, ModelKind::threshold) == 4);
    CHECK(match_density(observed, 0.5, ModelKind::threshold) == 2);
    CHECK(match_density(observed, 1.0, ModelKind::knn) == 8);
    CHECK(match_density(observed, 1.0, ModelKind::knn, KnnBudget::pairs) == 4);
    CHECK_THROWS_AS(match_density(observed, 0.25, ModelKind::knn), DensityTooLowError);
    CHECK_THROWS_AS(match_density(observed, 0.1, ModelKind::threshold), DensityTooLowError);
    CHECK_THROWS_AS(match_density(observed, 0.0, ModelKind::threshold), InputError);
}

TEST_CASE("name parsing") {
    CHECK(similarity_from_string("cosine") == Similarity::cosine);
    CHECK(model_kind_from_string("th") == ModelKind::threshold);
    CHECK(knn_budget_from_string("pairs") == KnnBudget::pairs);
    CHECK_THROWS(similarity_from_string("jaccard"));
}
