#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nettask/classifiers.hpp"
#include "nettask/graph.hpp"
#include "nettask/network_models.hpp"
#include "nettask/stats.hpp"

namespace nettask {

struct EvalContext {
    std::uint64_t seed = 0;
    unsigned workers = 1;
    MethodParams params;
    // Optional leakage instrumentation, called before each local fit.
    TrainingObserver observer;
};

// Training neighborhood for a test node: direct out-neighbors, or the first
// `size` nodes of a BFS ordering.
struct Neighborhood {
    enum class Kind { adjacency, bfs } kind = Kind::adjacency;
    std::size_t size = 0;

    static Neighborhood adjacency() { return {}; }
    static Neighborhood bfs(std::size_t size) { return {Kind::bfs, size}; }
};

struct OracleResult {
    std::string labelset;
    std::string model;
    std::string method;
    std::size_t n_tested = 0;
    std::size_t n_covered = 0;
    std::size_t n_correct = 0;
    // Null when no tested node was covered.
    std::optional<double> precision;
    double recall_coverage = 0.0;
};

// Tests every positive node of `labels` with a local method trained on its
// neighborhood in `edges`.
OracleResult run_oracle(std::span<const SparseCountVector> attributes, const EdgeSet& edges, const MethodSpec& spec,
                        const LabelSet& labels, const EvalContext& ctx, Neighborhood nb = Neighborhood::adjacency(),
                        std::string model_name = "");

// GA baseline for one base learner; covers every positive.
OracleResult run_oracle_ga(std::span<const SparseCountVector> attributes, const GaModels& ga, Method base,
                           const LabelSet& labels, const EvalContext& ctx);

// GL baseline; one keyed draw per (labelset, node), shared by all models.
OracleResult run_oracle_gl(const LabelSet& labels, const EvalContext& ctx);

// (n_correct - baseline_correct) / n_tested. Throws InputError when the two
// results refer to different labelsets or test populations.
double lift(const OracleResult& result, const OracleResult& baseline);
double lift(const OracleResult& result, double baseline_correct);

// Per-labelset GA/GL reference results.
struct Baselines {
    std::map<Method, OracleResult> ga;  // keyed by base learner
    OracleResult gl;

    // Baseline correct count matched to a local method: the same learner for
    // RF/LR/NB, the mean over available GA learners for CS/NL.
    double ga_correct_for(Method m) const;
    double gl_correct() const { return static_cast<double>(gl.n_correct); }
};

Baselines compute_baselines(std::span<const SparseCountVector> attributes, const LabelSet& labels,
                            const EvalContext& ctx);

using BaselineCache = std::map<std::string, Baselines>;

BaselineCache compute_baselines(const AttributedGraph& g, const std::vector<std::string>& labelsets,
                                const EvalContext& ctx);

struct NamedEdges {
    std::string name;
    const EdgeSet* edges = nullptr;
};

struct LiftCell {
    OracleResult result;
    std::optional<double> lift_ga;
    std::optional<double> lift_gl;
};

struct ColumnSummary {
    std::string model;
    std::string method;
    std::optional<double> mean_lift_ga;
    std::optional<double> mean_lift_gl;
    std::size_t n_cells = 0;
    std::size_t n_null = 0;
};

struct LiftTable {
    // Labelsets in descending order of row mean lift vs GA.
    std::vector<std::string> row_order;
    std::map<std::string, std::optional<double>> row_mean_ga;
    // cells[labelset][k] for column k of `columns`.
    std::map<std::string, std::vector<LiftCell>> cells;
    std::vector<ColumnSummary> columns;
};

LiftTable lift_heatmap(const AttributedGraph& g, const std::vector<NamedEdges>& models,
                       const std::vector<Method>& methods, const std::vector<std::string>& labelsets,
                       const EvalContext& ctx, const BaselineCache* baselines = nullptr);

struct SweepSeries {
    enum class Kind { density, bfs_size } kind = Kind::density;
    std::vector<double> x;

    struct Series {
        std::string model;
        std::string method;
        std::vector<std::optional<double>> mean_lift_ga;
        std::vector<std::optional<double>> mean_coverage;
        // KNN only: k at each density point.
        std::vector<std::optional<std::size_t>> k;
    };
    std::vector<Series> series;
};

struct DensitySweepOptions {
    Similarity similarity = Similarity::intersection;
    KnnBudget knn_budget = KnnBudget::arcs;
};

// Rebuilds each inferred model at factor * observed density and reruns the
// oracle. Points whose density is too low are null.
SweepSeries density_sweep(const AttributedGraph& g, const std::vector<ModelKind>& kinds,
                          const std::vector<Method>& methods, const std::vector<std::string>& labelsets,
                          const std::vector<double>& factors, const EvalContext& ctx,
                          const DensitySweepOptions& options = {}, const BaselineCache* baselines = nullptr);

SweepSeries bfs_sweep(const AttributedGraph& g, const NamedEdges& edges, const std::vector<Method>& methods,
                      const std::vector<std::string>& labelsets, const std::vector<std::size_t>& sizes,
                      const EvalContext& ctx, const BaselineCache* baselines = nullptr);

struct BiasLiftPoint {
    std::string labelset;
    std::optional<double> bias;
    double prevalence = 0.0;
    std::optional<double> lift;
};

struct BiasLiftRegression {
    std::vector<BiasLiftPoint> points;
    std::size_t n_used = 0;
    LinearFit bias_vs_lift;        // y = bias, x = lift
    LinearFit prevalence_vs_lift;  // y = prevalence, x = lift
};

// Throws InputError with fewer than three points having both values.
BiasLiftRegression bias_lift_regression(std::vector<BiasLiftPoint> points);

}  // namespace nettask
