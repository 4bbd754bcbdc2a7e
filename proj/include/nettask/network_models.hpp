#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>

#include "nettask/graph.hpp"
#include "nettask/similarity.hpp"

namespace nettask {

enum class ModelKind { knn, threshold };

std::string_view to_string(ModelKind m);
ModelKind model_kind_from_string(std::string_view s);

// How a KNN arc budget is derived from an observed edge set at a density
// factor: count directed arcs (2 per friendship) or unordered pairs.
enum class KnnBudget { arcs, pairs };

KnnBudget knn_budget_from_string(std::string_view s);

struct ModelSpec {
    ModelKind model = ModelKind::knn;
    Similarity similarity = Similarity::intersection;
    // Directed-arc budget for knn; unordered-pair budget for threshold.
    std::size_t lambda = 1;
    std::optional<double> density_factor;
};

// k = floor(lambda / |V|).
std::size_t knn_k(std::size_t lambda, std::size_t num_nodes);

// Each node links to its top-k nonzero-similarity peers.
// Throws DensityTooLowError when k < 1.
EdgeSet build_knn(std::span<const SparseCountVector> attributes, const ModelSpec& spec, unsigned workers = 1);

// The top-lambda nonzero-similarity pairs, stored as symmetric arcs.
EdgeSet build_threshold(std::span<const SparseCountVector> attributes, const ModelSpec& spec,
                        unsigned workers = 1);

EdgeSet build_model(std::span<const SparseCountVector> attributes, const ModelSpec& spec, unsigned workers = 1);

// Budget lambda for `model` at `factor` times the density of `observed`.
// Threshold: round(factor * pairs). KNN: round(factor * arcs) or
// round(factor * pairs) per `budget`; k must come out >= 1.
std::size_t match_density(const EdgeSet& observed, double factor, ModelKind model,
                          KnnBudget budget = KnnBudget::arcs);

}  // namespace nettask
