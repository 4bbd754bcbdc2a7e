#pragma once

#include <Eigen/Core>

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "nettask/graph.hpp"
#include "nettask/rng.hpp"
#include "nettask/similarity.hpp"

namespace nettask {

enum class Method { RF, LR, NB, CS, NL, GA, GL };

std::string_view to_string(Method m);
Method method_from_string(std::string_view s);
bool is_local(Method m);

struct RfParams {
    int trees = 50;
    int max_depth = 8;
    // Training sets smaller than this use the neighborhood majority label.
    std::size_t min_rows = 5;
};

struct LrParams {
    double ridge = 1e-3;
    double threshold = 0.5;
};

struct NbParams {
    double alpha = 1.0;
};

struct CsParams {
    Similarity similarity = Similarity::cosine;
};

struct MethodParams {
    RfParams rf;
    LrParams lr;
    NbParams nb;
    CsParams cs;
};

struct MethodSpec {
    Method method = Method::NL;
    MethodParams params;
    std::uint64_t seed = 0;
};

enum class PredictionNote { none, empty_neighborhood, single_class };

std::string_view to_string(PredictionNote n);

struct Prediction {
    NodeId node = 0;
    // Empty when the method abstains.
    std::optional<std::uint8_t> label;
    Method method = Method::NL;
    PredictionNote note = PredictionNote::none;
};

// Sorted set of attribute dimensions a model is trained over. Dimensions
// outside the space read as zero.
class FeatureSpace {
  public:
    FeatureSpace() = default;
    static FeatureSpace from_rows(std::span<const SparseCountVector> attributes, std::span<const NodeId> rows,
                                  const SparseCountVector* extra = nullptr);

    std::size_t size() const { return dims_.size(); }
    std::span<const DimId> dims() const { return dims_; }
    std::optional<std::size_t> column(DimId d) const;

    Eigen::RowVectorXd dense(const SparseCountVector& a) const;
    Eigen::MatrixXd design(std::span<const SparseCountVector> attributes, std::span<const NodeId> rows) const;

  private:
    std::vector<DimId> dims_;
};

// Bagged CART ensemble with Gini splits and majority-vote leaves.
class RandomForest {
  public:
    static RandomForest fit(const Eigen::MatrixXd& x, std::span<const std::uint8_t> y, const RfParams& params,
                            Rng& rng);
    std::uint8_t predict(const Eigen::Ref<const Eigen::RowVectorXd>& x) const;
    std::size_t num_trees() const { return trees_.size(); }

  private:
    struct Node {
        int feature = -1;  // -1 marks a leaf
        double threshold = 0.0;
        int left = -1;
        int right = -1;
        std::uint8_t label = 0;
    };
    using Tree = std::vector<Node>;

    std::vector<Tree> trees_;
    std::optional<std::uint8_t> constant_;
};

// Ridge-penalized least squares on {0,1} targets with an intercept column;
// predicts 1 iff the fitted value exceeds the threshold.
class RidgeClassifier {
  public:
    static RidgeClassifier fit(const Eigen::MatrixXd& x, std::span<const std::uint8_t> y, const LrParams& params);
    double decision(const Eigen::Ref<const Eigen::RowVectorXd>& x) const;
    std::uint8_t predict(const Eigen::Ref<const Eigen::RowVectorXd>& x) const;

  private:
    Eigen::VectorXd weights_;  // last entry is the intercept
    double threshold_ = 0.5;
};

// Multinomial event model over raw counts with Laplace smoothing.
class MultinomialNB {
  public:
    static MultinomialNB fit(std::span<const SparseCountVector> attributes, std::span<const NodeId> rows,
                             std::span<const std::uint8_t> y, const FeatureSpace& space, const NbParams& params);
    std::array<double, 2> log_posterior(const SparseCountVector& a) const;
    std::uint8_t predict(const SparseCountVector& a) const;

  private:
    FeatureSpace space_;
    std::array<double, 2> log_prior_{};
    std::array<Eigen::VectorXd, 2> log_likelihood_;
    std::optional<std::uint8_t> constant_;
};

// Called with (test node, training rows) before every local fit.
using TrainingObserver = std::function<void(NodeId, std::span<const NodeId>)>;

// Trains `spec.method` (RF, LR, NB, CS or NL) on the given neighborhood and
// predicts node i. Abstains iff the neighborhood is empty; a single-class
// neighborhood returns that class without training.
Prediction classify_local(const MethodSpec& spec, std::span<const NodeId> neighbors,
                          std::span<const SparseCountVector> attributes, const LabelSet& labels, NodeId i,
                          const TrainingObserver& observer = {});

// Majority label, ties to 0.
std::uint8_t majority_label(std::span<const NodeId> rows, const LabelSet& labels);

// Label whose neighbors have the highest lower-median similarity to a_i;
// ties to 0.
std::uint8_t max_median_similarity(std::span<const NodeId> neighbors, std::span<const SparseCountVector> attributes,
                                   const LabelSet& labels, const SparseCountVector& a_i, Similarity s);

// A seeded two-way node split; half[i] is 0 or 1.
struct GaSplit {
    std::vector<std::uint8_t> half;
    std::array<std::vector<NodeId>, 2> members;
};

GaSplit ga_split(std::size_t num_nodes, std::uint64_t seed);

// A model trained on all nodes of one half.
class GlobalModel {
  public:
    static GlobalModel fit(Method base, std::span<const SparseCountVector> attributes, std::span<const NodeId> rows,
                           const LabelSet& labels, const MethodParams& params, Rng& rng);
    std::uint8_t predict(const SparseCountVector& a) const;

  private:
    Method base_ = Method::RF;
    FeatureSpace space_;
    std::optional<std::uint8_t> constant_;
    std::optional<RandomForest> rf_;
    std::optional<RidgeClassifier> lr_;
    std::optional<MultinomialNB> nb_;
};

struct GaModels {
    GaSplit split;
    std::map<Method, std::array<GlobalModel, 2>> models;
};

// Trains one global model per half for each base learner in `bases`
// (default RF, LR, NB). Requires at least two nodes per half.
GaModels ga_fit(std::span<const SparseCountVector> attributes, const LabelSet& labels, std::uint64_t seed,
                const MethodParams& params = {}, std::span<const Method> bases = {});

// Predicts with the model trained on the half not containing i.
Prediction ga_predict(const GaModels& ga, NodeId i, const SparseCountVector& a_i, Method base);

// Mean of the available GA base precisions.
double ga_surrogate_precision(const std::map<Method, double>& ga_precisions);

// Bernoulli(prevalence) draw keyed by (seed, labelset name, i).
Prediction gl_predict(const LabelSet& labels, NodeId i, std::uint64_t seed);

}  // namespace nettask
