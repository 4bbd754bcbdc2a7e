#include "nettask/classifiers.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "nettask/stats.hpp"

namespace nettask {

std::string_view to_string(Method m) {
    switch (m) {
        case Method::RF: return "RF";
        case Method::LR: return "LR";
        case Method::NB: return "NB";
        case Method::CS: return "CS";
        case Method::NL: return "NL";
        case Method::GA: return "GA";
        case Method::GL: return "GL";
    }
    return "NL";
}

Method method_from_string(std::string_view s) {
    for (Method m : {Method::RF, Method::LR, Method::NB, Method::CS, Method::NL, Method::GA, Method::GL})
        if (s == to_string(m)) return m;
    throw InputError("unknown method '" + std::string(s) + "' (expected RF|LR|NB|CS|NL|GA|GL)");
}

bool is_local(Method m) { return m != Method::GA && m != Method::GL; }

std::string_view to_string(PredictionNote n) {
    switch (n) {
        case PredictionNote::none: return "";
        case PredictionNote::empty_neighborhood: return "empty-neighborhood";
        case PredictionNote::single_class: return "single-class";
    }
    return "";
}

// ---------------------------------------------------------------------------
// FeatureSpace

FeatureSpace FeatureSpace::from_rows(std::span<const SparseCountVector> attributes, std::span<const NodeId> rows,
                                     const SparseCountVector* extra) {
    FeatureSpace fs;
    for (NodeId r : rows) {
        auto idx = attributes[r].indices();
        fs.dims_.insert(fs.dims_.end(), idx.begin(), idx.end());
    }
    if (extra) fs.dims_.insert(fs.dims_.end(), extra->indices().begin(), extra->indices().end());
    std::sort(fs.dims_.begin(), fs.dims_.end());
    fs.dims_.erase(std::unique(fs.dims_.begin(), fs.dims_.end()), fs.dims_.end());
    return fs;
}

std::optional<std::size_t> FeatureSpace::column(DimId d) const {
    auto it = std::lower_bound(dims_.begin(), dims_.end(), d);
    if (it == dims_.end() || *it != d) return std::nullopt;
    return static_cast<std::size_t>(it - dims_.begin());
}

Eigen::RowVectorXd FeatureSpace::dense(const SparseCountVector& a) const {
    Eigen::RowVectorXd v = Eigen::RowVectorXd::Zero(static_cast<Eigen::Index>(dims_.size()));
    auto idx = a.indices();
    auto val = a.values();
    // Merge walk; both sides are sorted.
    std::size_t c = 0;
    for (std::size_t k = 0; k < idx.size() && c < dims_.size(); ++k) {
        while (c < dims_.size() && dims_[c] < idx[k]) ++c;
        if (c < dims_.size() && dims_[c] == idx[k]) v[static_cast<Eigen::Index>(c)] = static_cast<double>(val[k]);
    }
    return v;
}

Eigen::MatrixXd FeatureSpace::design(std::span<const SparseCountVector> attributes, std::span<const NodeId> rows) const {
    Eigen::MatrixXd x = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(dims_.size()));
    for (std::size_t r = 0; r < rows.size(); ++r) x.row(static_cast<Eigen::Index>(r)) = dense(attributes[rows[r]]);
    return x;
}

namespace {

std::optional<std::uint8_t> single_class(std::span<const std::uint8_t> y) {
    if (y.empty()) return std::nullopt;
    for (auto v : y)
        if (v != y.front()) return std::nullopt;
    return y.front();
}

std::uint8_t majority(std::size_t positives, std::size_t total) { return positives * 2 > total ? 1 : 0; }

// ---------------------------------------------------------------------------
// CART tree growth over bootstrap samples. A bootstrap is held as the
// distinct drawn rows plus a multiplicity per row, which yields the same
// splits as growing on the expanded sample.

class TreeGrower {
  public:
    TreeGrower(const Eigen::MatrixXd& x, std::span<const std::uint8_t> y, const RfParams& params, Rng& rng)
        : x_(x), y_(y), params_(params), rng_(rng) {
        const auto d = static_cast<std::size_t>(x.cols());
        const auto n = static_cast<std::size_t>(x.rows());
        mtry_ = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(d)))));
        mtry_ = std::min(mtry_, d);
        features_.resize(d);
        std::iota(features_.begin(), features_.end(), 0);
        nonnegative_ = x.size() == 0 || x.minCoeff() >= 0.0;
        weight_.assign(n, 0);
        node_of_.assign(n, -1);
        if (nonnegative_) {
            // Per-feature nonzero entries in ascending value order.
            sorted_.resize(d);
            for (std::size_t f = 0; f < d; ++f) {
                auto& col = sorted_[f];
                for (std::size_t r = 0; r < n; ++r) {
                    const double v = x(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(f));
                    if (v != 0.0) col.push_back({v, static_cast<std::uint32_t>(r)});
                }
                std::sort(col.begin(), col.end(), [](const Entry& a, const Entry& b) {
                    return a.value != b.value ? a.value < b.value : a.row < b.row;
                });
            }
        }
    }

    // Grows one tree on a bootstrap of the training rows.
    template <typename Tree>
    void grow(Tree& tree) {
        const std::size_t n = y_.size();
        std::fill(weight_.begin(), weight_.end(), 0);
        std::fill(node_of_.begin(), node_of_.end(), -1);
        for (std::size_t k = 0; k < n; ++k) ++weight_[rng_.below(n)];
        rows_.clear();
        for (std::size_t r = 0; r < n; ++r)
            if (weight_[r] > 0) rows_.push_back(r);
        tree.clear();
        grow_node(tree, 0, rows_.size(), 0);
    }

  private:
    struct Entry {
        double value;
        std::uint32_t row;
    };
    struct Split {
        int feature = -1;
        double threshold = 0.0;
        double impurity = 0.0;
    };

    template <typename Tree>
    int grow_node(Tree& tree, std::size_t lo, std::size_t hi, int depth) {
        const int id = static_cast<int>(tree.size());
        tree.emplace_back();
        std::size_t pos = 0, n = 0;
        for (std::size_t s = lo; s < hi; ++s) {
            const auto r = rows_[s];
            n += weight_[r];
            pos += weight_[r] * y_[r];
            node_of_[r] = id;
        }
        tree[static_cast<std::size_t>(id)].label = majority(pos, n);
        if (depth >= params_.max_depth || pos == 0 || pos == n || n < 2) return id;

        const Split best = find_split(id, lo, hi, pos, n);
        if (best.feature < 0) return id;

        auto mid_it = std::partition(rows_.begin() + static_cast<std::ptrdiff_t>(lo),
                                     rows_.begin() + static_cast<std::ptrdiff_t>(hi), [&](std::size_t r) {
                                         return x_(static_cast<Eigen::Index>(r), best.feature) <= best.threshold;
                                     });
        const auto mid = static_cast<std::size_t>(mid_it - rows_.begin());
        tree[static_cast<std::size_t>(id)].feature = best.feature;
        tree[static_cast<std::size_t>(id)].threshold = best.threshold;
        const int left = grow_node(tree, lo, mid, depth + 1);
        const int right = grow_node(tree, mid, hi, depth + 1);
        tree[static_cast<std::size_t>(id)].left = left;
        tree[static_cast<std::size_t>(id)].right = right;
        return id;
    }

    // Sum over children of pos * neg / size, i.e. size-weighted Gini / 2.
    static double weighted_gini(double pos, double n) { return n > 0 ? pos * (n - pos) / n : 0.0; }

    Split find_split(int id, std::size_t lo, std::size_t hi, std::size_t pos_count, std::size_t n_count) {
        const auto n = static_cast<double>(n_count);
        const auto pos = static_cast<double>(pos_count);
        Split best;
        best.impurity = weighted_gini(pos, n) - 1e-12;
        auto consider = [&](double left_n, double left_pos, double threshold, std::size_t col) {
            const double g = weighted_gini(left_pos, left_n) + weighted_gini(pos - left_pos, n - left_n);
            if (g < best.impurity) {
                best.impurity = g;
                best.feature = static_cast<int>(col);
                best.threshold = threshold;
            }
        };
        // Partial Fisher-Yates draws mtry distinct features.
        for (std::size_t f = 0; f < mtry_; ++f) {
            const auto pick = f + rng_.below(features_.size() - f);
            std::swap(features_[f], features_[pick]);
            const auto col = features_[f];

            // Collect the node's nonzero values in ascending order, either by
            // filtering the presorted column or by gathering and sorting.
            values_.clear();
            double nz_n = 0, nz_pos = 0;
            if (nonnegative_ && sorted_[col].size() < 4 * (hi - lo)) {
                for (const auto& e : sorted_[col]) {
                    if (node_of_[e.row] != id) continue;
                    const double w = weight_[e.row];
                    values_.push_back({e.value, w, w * y_[e.row]});
                    nz_n += w;
                    nz_pos += w * y_[e.row];
                }
            } else {
                for (std::size_t s = lo; s < hi; ++s) {
                    const auto r = rows_[s];
                    const double v = x_(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(col));
                    if (v == 0.0 && nonnegative_) continue;
                    const double w = weight_[r];
                    values_.push_back({v, w, w * y_[r]});
                    nz_n += w;
                    nz_pos += w * y_[r];
                }
                std::sort(values_.begin(), values_.end(),
                          [](const Weighted& a, const Weighted& b) { return a.value < b.value; });
            }
            if (values_.empty()) continue;
            const double zero_n = n - nz_n;
            const double zero_pos = pos - nz_pos;

            double left_n = zero_n, left_pos = zero_pos;
            if (zero_n > 0) consider(left_n, left_pos, 0.5 * values_.front().value, col);
            for (std::size_t k = 0; k + 1 < values_.size(); ++k) {
                left_n += values_[k].w;
                left_pos += values_[k].wy;
                if (values_[k].value == values_[k + 1].value) continue;
                consider(left_n, left_pos, 0.5 * (values_[k].value + values_[k + 1].value), col);
            }
        }
        return best;
    }

    struct Weighted {
        double value;
        double w;
        double wy;
    };

    const Eigen::MatrixXd& x_;
    std::span<const std::uint8_t> y_;
    const RfParams& params_;
    Rng& rng_;
    std::size_t mtry_ = 1;
    bool nonnegative_ = true;
    std::vector<std::size_t> features_;
    std::vector<std::vector<Entry>> sorted_;
    std::vector<std::uint32_t> weight_;
    std::vector<int> node_of_;
    std::vector<std::size_t> rows_;
    std::vector<Weighted> values_;
};

}  // namespace

// ---------------------------------------------------------------------------
// RandomForest

RandomForest RandomForest::fit(const Eigen::MatrixXd& x, std::span<const std::uint8_t> y, const RfParams& params,
                               Rng& rng) {
    if (static_cast<std::size_t>(x.rows()) != y.size()) throw InputError("random forest: row/label mismatch");
    if (y.empty()) throw InputError("random forest: empty training set");
    RandomForest rf;
    if (auto c = single_class(y)) {
        rf.constant_ = *c;
        return rf;
    }
    if (y.size() < params.min_rows || x.cols() == 0) {
        rf.constant_ = majority(static_cast<std::size_t>(std::count(y.begin(), y.end(), 1)), y.size());
        return rf;
    }
    TreeGrower grower(x, y, params, rng);
    rf.trees_.resize(static_cast<std::size_t>(std::max(1, params.trees)));
    for (auto& tree : rf.trees_) grower.grow(tree);
    return rf;
}

std::uint8_t RandomForest::predict(const Eigen::Ref<const Eigen::RowVectorXd>& x) const {
    if (constant_) return *constant_;
    std::size_t votes = 0;
    for (const auto& tree : trees_) {
        std::size_t node = 0;
        while (tree[node].feature >= 0)
            node = static_cast<std::size_t>(x[tree[node].feature] <= tree[node].threshold ? tree[node].left
                                                                                          : tree[node].right);
        votes += tree[node].label;
    }
    return majority(votes, trees_.size());
}

// ---------------------------------------------------------------------------
// RidgeClassifier

RidgeClassifier RidgeClassifier::fit(const Eigen::MatrixXd& x, std::span<const std::uint8_t> y,
                                     const LrParams& params) {
    if (static_cast<std::size_t>(x.rows()) != y.size()) throw InputError("ridge: row/label mismatch");
    if (y.empty()) throw InputError("ridge: empty training set");
    const Eigen::Index n = x.rows();
    const Eigen::Index d = x.cols() + 1;
    Eigen::MatrixXd xa(n, d);
    xa.leftCols(x.cols()) = x;
    xa.col(d - 1).setOnes();
    Eigen::VectorXd target(n);
    for (Eigen::Index r = 0; r < n; ++r) target[r] = y[static_cast<std::size_t>(r)];

    RidgeClassifier m;
    m.threshold_ = params.threshold;
    // Primal and dual ridge solutions coincide; solve the smaller system.
    if (d <= n) {
        Eigen::MatrixXd gram = xa.transpose() * xa;
        gram.diagonal().array() += params.ridge;
        m.weights_ = gram.ldlt().solve(xa.transpose() * target);
    } else {
        Eigen::MatrixXd kernel = xa * xa.transpose();
        kernel.diagonal().array() += params.ridge;
        m.weights_ = xa.transpose() * kernel.ldlt().solve(target);
    }
    return m;
}

double RidgeClassifier::decision(const Eigen::Ref<const Eigen::RowVectorXd>& x) const {
    const Eigen::Index d = weights_.size() - 1;
    return x.dot(weights_.head(d)) + weights_[d];
}

std::uint8_t RidgeClassifier::predict(const Eigen::Ref<const Eigen::RowVectorXd>& x) const {
    return decision(x) > threshold_ ? 1 : 0;
}

// ---------------------------------------------------------------------------
// MultinomialNB

MultinomialNB MultinomialNB::fit(std::span<const SparseCountVector> attributes, std::span<const NodeId> rows,
                                 std::span<const std::uint8_t> y, const FeatureSpace& space, const NbParams& params) {
    if (rows.size() != y.size()) throw InputError("naive bayes: row/label mismatch");
    if (rows.empty()) throw InputError("naive bayes: empty training set");
    MultinomialNB nb;
    nb.space_ = space;
    if (auto c = single_class(y)) {
        nb.constant_ = *c;
        return nb;
    }
    const auto d = static_cast<Eigen::Index>(space.size());
    std::array<Eigen::VectorXd, 2> counts{Eigen::VectorXd::Zero(d), Eigen::VectorXd::Zero(d)};
    std::array<double, 2> docs{0.0, 0.0};
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const auto& a = attributes[rows[r]];
        auto idx = a.indices();
        auto val = a.values();
        docs[y[r]] += 1.0;
        for (std::size_t k = 0; k < idx.size(); ++k)
            if (auto c = space.column(idx[k])) counts[y[r]][static_cast<Eigen::Index>(*c)] += static_cast<double>(val[k]);
    }
    for (int c = 0; c < 2; ++c) {
        nb.log_prior_[c] = std::log(docs[c] / static_cast<double>(rows.size()));
        const double denom = counts[c].sum() + params.alpha * static_cast<double>(d);
        nb.log_likelihood_[c] = ((counts[c].array() + params.alpha) / denom).log().matrix();
    }
    return nb;
}

std::array<double, 2> MultinomialNB::log_posterior(const SparseCountVector& a) const {
    std::array<double, 2> lp = log_prior_;
    if (constant_) return lp;
    auto idx = a.indices();
    auto val = a.values();
    for (std::size_t k = 0; k < idx.size(); ++k) {
        if (auto c = space_.column(idx[k])) {
            const auto col = static_cast<Eigen::Index>(*c);
            for (int cls = 0; cls < 2; ++cls) lp[cls] += static_cast<double>(val[k]) * log_likelihood_[cls][col];
        }
    }
    return lp;
}

std::uint8_t MultinomialNB::predict(const SparseCountVector& a) const {
    if (constant_) return *constant_;
    auto lp = log_posterior(a);
    return lp[1] > lp[0] ? 1 : 0;
}

// ---------------------------------------------------------------------------
// Local methods

std::uint8_t majority_label(std::span<const NodeId> rows, const LabelSet& labels) {
    std::size_t pos = 0;
    for (NodeId r : rows) pos += labels.positive(r);
    return majority(pos, rows.size());
}

std::uint8_t max_median_similarity(std::span<const NodeId> neighbors, std::span<const SparseCountVector> attributes,
                                   const LabelSet& labels, const SparseCountVector& a_i, Similarity s) {
    std::array<std::vector<double>, 2> groups;
    for (NodeId j : neighbors) groups[labels.positive(j) ? 1 : 0].push_back(similarity(s, a_i, attributes[j]));
    if (groups[1].empty()) return 0;
    if (groups[0].empty()) return 1;
    const double m0 = lower_median(std::move(groups[0]));
    const double m1 = lower_median(std::move(groups[1]));
    return m1 > m0 ? 1 : 0;
}

namespace {

std::vector<std::uint8_t> labels_of(std::span<const NodeId> rows, const LabelSet& labels) {
    std::vector<std::uint8_t> y(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) y[r] = labels.positive(rows[r]) ? 1 : 0;
    return y;
}

}  // namespace

Prediction classify_local(const MethodSpec& spec, std::span<const NodeId> neighbors,
                          std::span<const SparseCountVector> attributes, const LabelSet& labels, NodeId i,
                          const TrainingObserver& observer) {
    if (i >= labels.size() || i >= attributes.size()) throw InputError("node " + std::to_string(i) + " out of range");
    if (!is_local(spec.method))
        throw InputError("classify_local: " + std::string(to_string(spec.method)) + " is not a local method");
    for (NodeId j : neighbors) {
        if (j == i) throw std::logic_error("classify_local: test node appears in its own training rows");
        if (j >= labels.size()) throw InputError("neighbor " + std::to_string(j) + " out of range");
    }

    Prediction p;
    p.node = i;
    p.method = spec.method;
    if (neighbors.empty()) {
        p.note = PredictionNote::empty_neighborhood;
        return p;
    }
    if (observer) observer(i, neighbors);

    const auto y = labels_of(neighbors, labels);
    if (auto c = single_class(y)) {
        p.label = *c;
        p.note = PredictionNote::single_class;
        return p;
    }

    const auto& a_i = attributes[i];
    switch (spec.method) {
        case Method::NL:
            p.label = majority_label(neighbors, labels);
            break;
        case Method::CS:
            p.label = max_median_similarity(neighbors, attributes, labels, a_i, spec.params.cs.similarity);
            break;
        case Method::NB: {
            auto space = FeatureSpace::from_rows(attributes, neighbors, &a_i);
            p.label = MultinomialNB::fit(attributes, neighbors, y, space, spec.params.nb).predict(a_i);
            break;
        }
        case Method::LR: {
            auto space = FeatureSpace::from_rows(attributes, neighbors, &a_i);
            p.label = RidgeClassifier::fit(space.design(attributes, neighbors), y, spec.params.lr).predict(space.dense(a_i));
            break;
        }
        case Method::RF: {
            if (neighbors.size() < spec.params.rf.min_rows) {
                p.label = majority_label(neighbors, labels);
                break;
            }
            auto space = FeatureSpace::from_rows(attributes, neighbors, &a_i);
            Rng rng(spec.seed, "rf-local", fnv1a(labels.name()), i);
            p.label = RandomForest::fit(space.design(attributes, neighbors), y, spec.params.rf, rng).predict(space.dense(a_i));
            break;
        }
        default:
            break;
    }
    return p;
}

// ---------------------------------------------------------------------------
// Global baselines

GaSplit ga_split(std::size_t num_nodes, std::uint64_t seed) {
    std::vector<NodeId> perm(num_nodes);
    std::iota(perm.begin(), perm.end(), 0);
    Rng rng(seed, "ga-split");
    shuffle(perm.begin(), perm.end(), rng);
    GaSplit split;
    split.half.assign(num_nodes, 0);
    const std::size_t first = num_nodes / 2;
    for (std::size_t k = 0; k < num_nodes; ++k) {
        const std::uint8_t h = k < first ? 0 : 1;
        split.half[perm[k]] = h;
        split.members[h].push_back(perm[k]);
    }
    for (auto& m : split.members) std::sort(m.begin(), m.end());
    return split;
}

GlobalModel GlobalModel::fit(Method base, std::span<const SparseCountVector> attributes, std::span<const NodeId> rows,
                             const LabelSet& labels, const MethodParams& params, Rng& rng) {
    GlobalModel g;
    g.base_ = base;
    const auto y = labels_of(rows, labels);
    if (auto c = single_class(y)) {
        g.constant_ = *c;
        return g;
    }
    g.space_ = FeatureSpace::from_rows(attributes, rows);
    switch (base) {
        case Method::RF: g.rf_ = RandomForest::fit(g.space_.design(attributes, rows), y, params.rf, rng); break;
        case Method::LR: g.lr_ = RidgeClassifier::fit(g.space_.design(attributes, rows), y, params.lr); break;
        case Method::NB: g.nb_ = MultinomialNB::fit(attributes, rows, y, g.space_, params.nb); break;
        default: throw InputError("GA base learner must be RF, LR or NB");
    }
    return g;
}

std::uint8_t GlobalModel::predict(const SparseCountVector& a) const {
    if (constant_) return *constant_;
    if (rf_) return rf_->predict(space_.dense(a));
    if (lr_) return lr_->predict(space_.dense(a));
    return nb_->predict(a);
}

GaModels ga_fit(std::span<const SparseCountVector> attributes, const LabelSet& labels, std::uint64_t seed,
                const MethodParams& params, std::span<const Method> bases) {
    if (labels.size() != attributes.size()) throw InputError("ga_fit: labelset does not match attributes");
    static constexpr std::array<Method, 3> default_bases{Method::RF, Method::LR, Method::NB};
    if (bases.empty()) bases = default_bases;

    GaModels ga;
    ga.split = ga_split(attributes.size(), seed);
    if (ga.split.members[0].size() < 2 || ga.split.members[1].size() < 2)
        throw InputError("ga_fit: need at least two nodes per half");
    for (Method base : bases) {
        std::array<GlobalModel, 2> pair;
        for (std::uint8_t h = 0; h < 2; ++h) {
            Rng rng(seed, "ga-fit", fnv1a(labels.name()) ^ static_cast<std::uint64_t>(base), h);
            pair[h] = GlobalModel::fit(base, attributes, ga.split.members[h], labels, params, rng);
        }
        ga.models[base] = std::move(pair);
    }
    return ga;
}

Prediction ga_predict(const GaModels& ga, NodeId i, const SparseCountVector& a_i, Method base) {
    if (i >= ga.split.half.size()) throw InputError("node " + std::to_string(i) + " not covered by the GA split");
    auto it = ga.models.find(base);
    if (it == ga.models.end()) throw InputError("GA model for " + std::string(to_string(base)) + " was not trained");
    Prediction p;
    p.node = i;
    p.method = Method::GA;
    p.label = it->second[1 - ga.split.half[i]].predict(a_i);
    return p;
}

double ga_surrogate_precision(const std::map<Method, double>& ga_precisions) {
    if (ga_precisions.empty()) throw InputError("GA surrogate needs at least one base precision");
    double sum = 0.0;
    for (const auto& [m, p] : ga_precisions) sum += p;
    return sum / static_cast<double>(ga_precisions.size());
}

Prediction gl_predict(const LabelSet& labels, NodeId i, std::uint64_t seed) {
    if (i >= labels.size()) throw InputError("node " + std::to_string(i) + " out of range");
    Prediction p;
    p.node = i;
    p.method = Method::GL;
    p.label = keyed_uniform(seed, "gl", fnv1a(labels.name()), i) < labels.prevalence() ? 1 : 0;
    return p;
}

}  // namespace nettask
