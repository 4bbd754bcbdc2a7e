#include "nettask/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <string>

#include "nettask/parallel.hpp"

namespace nettask {

namespace {

using Wide = unsigned __int128;

Wide dot_exact(const SparseCountVector& a, const SparseCountVector& b) {
    auto ai = a.indices(), bi = b.indices();
    auto av = a.values(), bv = b.values();
    Wide dot = 0;
    std::size_t p = 0, q = 0;
    while (p < ai.size() && q < bi.size()) {
        if (ai[p] < bi[q]) {
            ++p;
        } else if (bi[q] < ai[p]) {
            ++q;
        } else {
            dot += static_cast<Wide>(av[p]) * bv[q];
            ++p;
            ++q;
        }
    }
    return dot;
}

double l2norm(const SparseCountVector& a) {
    Wide sq = 0;
    for (Count v : a.values()) sq += static_cast<Wide>(v) * v;
    return std::sqrt(static_cast<double>(sq));
}

double cosine_from(Wide dot, double na, double nb) {
    if (dot == 0) return 0.0;
    return static_cast<double>(dot) / (na * nb);
}

struct Posting {
    NodeId node;
    Count count;
};

// dim -> nodes carrying it, ascending by node.
std::vector<std::vector<Posting>> inverted_index(std::span<const SparseCountVector> attributes) {
    DimId max_dim = 0;
    bool any = false;
    for (const auto& a : attributes) {
        if (!a.empty()) {
            max_dim = std::max(max_dim, a.indices().back());
            any = true;
        }
    }
    std::vector<std::vector<Posting>> index(any ? std::size_t{max_dim} + 1 : 0);
    for (NodeId i = 0; i < attributes.size(); ++i) {
        auto idx = attributes[i].indices();
        auto val = attributes[i].values();
        for (std::size_t k = 0; k < idx.size(); ++k) index[idx[k]].push_back({i, val[k]});
    }
    return index;
}

// Scores node i against every peer sharing at least one dimension. With
// `upper_only`, only peers j > i are visited.
class RowScorer {
  public:
    RowScorer(std::span<const SparseCountVector> attributes, Similarity s,
              const std::vector<std::vector<Posting>>& index, const std::vector<double>& norms)
        : attributes_(attributes), sim_(s), index_(index), norms_(norms), acc_(attributes.size(), 0) {}

    void score(NodeId i, bool upper_only, std::vector<ScoredPair>& out) {
        touched_.clear();
        auto idx = attributes_[i].indices();
        auto val = attributes_[i].values();
        for (std::size_t k = 0; k < idx.size(); ++k) {
            const Count ci = val[k];
            const auto& postings = index_[idx[k]];
            auto it = postings.begin();
            if (upper_only)
                it = std::upper_bound(postings.begin(), postings.end(), i,
                                      [](NodeId v, const Posting& p) { return v < p.node; });
            for (; it != postings.end(); ++it) {
                if (it->node == i) continue;
                Wide& slot = acc_[it->node];
                if (slot == 0) touched_.push_back(it->node);
                slot += sim_ == Similarity::intersection ? Wide{std::min(ci, it->count)}
                                                         : static_cast<Wide>(ci) * it->count;
            }
        }
        out.clear();
        out.reserve(touched_.size());
        for (NodeId j : touched_) {
            const double score = sim_ == Similarity::intersection
                                     ? static_cast<double>(acc_[j])
                                     : cosine_from(acc_[j], norms_[i], norms_[j]);
            acc_[j] = 0;
            if (score > 0.0) out.push_back({i, j, score});
        }
    }

  private:
    std::span<const SparseCountVector> attributes_;
    Similarity sim_;
    const std::vector<std::vector<Posting>>& index_;
    const std::vector<double>& norms_;
    std::vector<Wide> acc_;
    std::vector<NodeId> touched_;
};

bool per_node_order(const ScoredPair& a, const ScoredPair& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.j < b.j;
}

bool global_order(const ScoredPair& a, const ScoredPair& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.i != b.i) return a.i < b.i;
    return a.j < b.j;
}

void keep_top(std::vector<ScoredPair>& v, std::size_t k, bool (*cmp)(const ScoredPair&, const ScoredPair&)) {
    if (v.size() > k) {
        std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(k), v.end(), cmp);
        v.resize(k);
    }
    std::sort(v.begin(), v.end(), cmp);
}

std::vector<double> norms_of(std::span<const SparseCountVector> attributes, Similarity s) {
    std::vector<double> norms;
    if (s == Similarity::cosine) {
        norms.reserve(attributes.size());
        for (const auto& a : attributes) norms.push_back(l2norm(a));
    }
    return norms;
}

}  // namespace

std::string_view to_string(Similarity s) {
    return s == Similarity::intersection ? "intersection" : "cosine";
}

Similarity similarity_from_string(std::string_view s) {
    if (s == "intersection" || s == "int") return Similarity::intersection;
    if (s == "cosine" || s == "cos") return Similarity::cosine;
    throw InputError("unknown similarity '" + std::string(s) + "' (expected intersection|cosine)");
}

Count s_int(const SparseCountVector& a, const SparseCountVector& b) {
    auto ai = a.indices(), bi = b.indices();
    auto av = a.values(), bv = b.values();
    Count sum = 0;
    std::size_t p = 0, q = 0;
    while (p < ai.size() && q < bi.size()) {
        if (ai[p] < bi[q]) {
            ++p;
        } else if (bi[q] < ai[p]) {
            ++q;
        } else {
            sum += std::min(av[p], bv[q]);
            ++p;
            ++q;
        }
    }
    return sum;
}

double s_cos(const SparseCountVector& a, const SparseCountVector& b) {
    if (a.empty() || b.empty()) return 0.0;
    return cosine_from(dot_exact(a, b), l2norm(a), l2norm(b));
}

double similarity(Similarity s, const SparseCountVector& a, const SparseCountVector& b) {
    return s == Similarity::intersection ? static_cast<double>(s_int(a, b)) : s_cos(a, b);
}

std::vector<ScoredPair> topk_per_node(std::span<const SparseCountVector> attributes, Similarity s,
                                      std::size_t k, unsigned workers) {
    if (k == 0) throw InputError("topk_per_node: k must be at least 1");
    const auto index = inverted_index(attributes);
    const auto norms = norms_of(attributes, s);
    std::vector<std::vector<ScoredPair>> rows(attributes.size());

    parallel_for(attributes.size(), workers, [&](std::size_t begin, std::size_t end) {
        RowScorer scorer(attributes, s, index, norms);
        std::vector<ScoredPair> row;
        for (std::size_t i = begin; i < end; ++i) {
            scorer.score(static_cast<NodeId>(i), false, row);
            keep_top(row, k, per_node_order);
            rows[i] = row;
        }
    });

    std::vector<ScoredPair> out;
    for (auto& r : rows) out.insert(out.end(), r.begin(), r.end());
    return out;
}

std::vector<ScoredPair> topk_global(std::span<const SparseCountVector> attributes, Similarity s,
                                    std::size_t lambda, unsigned workers) {
    if (lambda == 0) throw InputError("topk_global: lambda must be at least 1");
    const auto index = inverted_index(attributes);
    const auto norms = norms_of(attributes, s);

    // Each chunk keeps a bounded candidate buffer; since selection is by a
    // strict total order, the final merge does not depend on chunking.
    std::mutex mu;
    std::vector<ScoredPair> merged;
    parallel_for(attributes.size(), workers, [&](std::size_t begin, std::size_t end) {
        RowScorer scorer(attributes, s, index, norms);
        std::vector<ScoredPair> row;
        std::vector<ScoredPair> buffer;
        for (std::size_t i = begin; i < end; ++i) {
            scorer.score(static_cast<NodeId>(i), true, row);
            if (row.size() > lambda) {
                std::nth_element(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(lambda), row.end(),
                                 global_order);
                row.resize(lambda);
            }
            buffer.insert(buffer.end(), row.begin(), row.end());
            if (buffer.size() > 2 * lambda) keep_top(buffer, lambda, global_order);
        }
        std::lock_guard lock(mu);
        merged.insert(merged.end(), buffer.begin(), buffer.end());
    });
    keep_top(merged, lambda, global_order);
    return merged;
}

std::size_t count_nonzero_pairs(std::span<const SparseCountVector> attributes) {
    const auto index = inverted_index(attributes);
    std::vector<std::uint8_t> hit(attributes.size(), 0);
    std::vector<NodeId> touched;
    std::size_t total = 0;
    for (NodeId i = 0; i < attributes.size(); ++i) {
        touched.clear();
        for (DimId d : attributes[i].indices()) {
            for (const auto& p : index[d]) {
                if (p.node > i && !hit[p.node]) {
                    hit[p.node] = 1;
                    touched.push_back(p.node);
                }
            }
        }
        total += touched.size();
        for (NodeId j : touched) hit[j] = 0;
    }
    return total;
}

}  // namespace nettask
