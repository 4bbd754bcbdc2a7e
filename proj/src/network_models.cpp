#include "nettask/network_models.hpp"

#include <cmath>
#include <string>

namespace nettask {

std::string_view to_string(ModelKind m) { return m == ModelKind::knn ? "knn" : "threshold"; }

ModelKind model_kind_from_string(std::string_view s) {
    if (s == "knn") return ModelKind::knn;
    if (s == "threshold" || s == "th") return ModelKind::threshold;
    throw InputError("unknown network model '" + std::string(s) + "' (expected knn|threshold)");
}

KnnBudget knn_budget_from_string(std::string_view s) {
    if (s == "arcs") return KnnBudget::arcs;
    if (s == "pairs") return KnnBudget::pairs;
    throw InputError("unknown knn budget '" + std::string(s) + "' (expected arcs|pairs)");
}

std::size_t knn_k(std::size_t lambda, std::size_t num_nodes) {
    return num_nodes == 0 ? 0 : lambda / num_nodes;
}

EdgeSet build_knn(std::span<const SparseCountVector> attributes, const ModelSpec& spec, unsigned workers) {
    if (spec.model != ModelKind::knn) throw InputError("build_knn: spec is not a knn model");
    const std::size_t k = knn_k(spec.lambda, attributes.size());
    if (k < 1)
        throw DensityTooLowError("knn: lambda " + std::to_string(spec.lambda) + " over " +
                                 std::to_string(attributes.size()) + " nodes gives k < 1");
    auto pairs = topk_per_node(attributes, spec.similarity, k, workers);
    std::vector<Arc> arcs;
    arcs.reserve(pairs.size());
    for (const auto& p : pairs) arcs.emplace_back(p.i, p.j);
    return EdgeSet::from_arcs(attributes.size(), std::move(arcs), Provenance::knn);
}

EdgeSet build_threshold(std::span<const SparseCountVector> attributes, const ModelSpec& spec,
                        unsigned workers) {
    if (spec.model != ModelKind::threshold) throw InputError("build_threshold: spec is not a threshold model");
    if (spec.lambda < 1) throw InputError("threshold: lambda must be at least 1");
    auto pairs = topk_global(attributes, spec.similarity, spec.lambda, workers);
    std::vector<Arc> und;
    und.reserve(pairs.size());
    for (const auto& p : pairs) und.emplace_back(p.i, p.j);
    return EdgeSet::from_pairs(attributes.size(), und, Provenance::threshold);
}

EdgeSet build_model(std::span<const SparseCountVector> attributes, const ModelSpec& spec, unsigned workers) {
    return spec.model == ModelKind::knn ? build_knn(attributes, spec, workers)
                                        : build_threshold(attributes, spec, workers);
}

std::size_t match_density(const EdgeSet& observed, double factor, ModelKind model, KnnBudget budget) {
    if (!(factor > 0.0)) throw InputError("density factor must be positive");
    const double base = (model == ModelKind::threshold || budget == KnnBudget::pairs)
                            ? static_cast<double>(observed.num_pairs())
                            : static_cast<double>(observed.num_arcs());
    const double lambda = std::round(factor * base);
    if (lambda < 1.0) throw DensityTooLowError("density factor " + std::to_string(factor) + " gives lambda < 1");
    const auto out = static_cast<std::size_t>(lambda);
    if (model == ModelKind::knn && knn_k(out, observed.num_nodes()) < 1)
        throw DensityTooLowError("density factor " + std::to_string(factor) + " gives knn k < 1");
    return out;
}

}  // namespace nettask
