#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "nettask/classifiers.hpp"
#include "nettask/io.hpp"
#include "nettask/network_models.hpp"
#include "nettask/synth.hpp"

namespace nettask {

inline constexpr int kSchemaVersion = 1;

// One network to evaluate: the observed edges, an inferred model at a
// density factor (or explicit lambda), or an edge file.
struct ModelEntry {
    enum class Kind { observed, knn, threshold, file } kind = Kind::observed;
    std::string name;
    Similarity similarity = Similarity::intersection;
    double density_factor = 1.0;
    std::optional<std::size_t> lambda;
    std::filesystem::path edges;
};

struct RunConfig {
    std::uint64_t seed = 0;
    // Exactly one input: a graph bundle on disk or a synthetic generator.
    std::optional<GraphPaths> graph;
    std::optional<SynthConfig> synth;

    std::vector<ModelEntry> models;
    std::vector<Method> methods;
    MethodParams params;
    // Empty means every labelset of the graph.
    std::vector<std::string> labelsets;
    KnnBudget knn_budget = KnnBudget::arcs;

    std::vector<ModelKind> density_models{ModelKind::knn, ModelKind::threshold};
    std::vector<Method> density_methods{Method::RF, Method::LR};
    std::vector<double> density_factors{0.125, 0.25, 0.5, 1.0, 2.0};

    std::vector<std::string> bfs_models{"Social"};
    std::vector<Method> bfs_methods{Method::RF};
    std::vector<std::size_t> bfs_sizes{1, 5, 10, 25, 45, 100, 200, 400};

    std::string bias_edges = "Social";
    std::string bias_lift_model = "KNN";
    Method bias_lift_method = Method::RF;
    // Network the bias-lift regression measures bias on; defaults to the
    // bias_lift model itself.
    std::string bias_lift_edges;

    std::filesystem::path output_dir = "out";
    unsigned workers = 1;

    // The config as loaded (after overrides), used for hashing.
    nlohmann::json source;

    // Hash of the config with run-environment keys (workers, output_dir)
    // removed, so reruns on any worker count share it.
    std::string config_hash() const;
};

// Parses and validates; relative paths resolve against `base_dir`.
// Throws ConfigError.
RunConfig run_config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
RunConfig load_run_config(const std::filesystem::path& path);

SynthConfig synth_config_from_json(const nlohmann::json& j);
SynthConfig load_synth_config(const std::filesystem::path& path);
nlohmann::json to_json(const SynthConfig& cfg);

}  // namespace nettask
