#include "nettask/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "nettask/stats.hpp"

namespace nettask {

SparseCountVector::SparseCountVector(std::vector<DimId> indices, std::vector<Count> values)
    : indices_(std::move(indices)), values_(std::move(values)) {
    if (indices_.size() != values_.size()) throw InputError("sparse vector: index/value length mismatch");
    for (std::size_t k = 0; k < indices_.size(); ++k) {
        if (values_[k] == 0) throw InputError("sparse vector: zero count stored");
        if (k > 0 && indices_[k] <= indices_[k - 1]) throw InputError("sparse vector: indices not strictly increasing");
    }
}

SparseCountVector SparseCountVector::from_entries(std::vector<std::pair<DimId, Count>> entries) {
    std::sort(entries.begin(), entries.end());
    std::vector<DimId> idx;
    std::vector<Count> val;
    for (const auto& [d, c] : entries) {
        if (c == 0) continue;
        if (!idx.empty() && idx.back() == d) {
            val.back() += c;
        } else {
            idx.push_back(d);
            val.push_back(c);
        }
    }
    return SparseCountVector(std::move(idx), std::move(val));
}

Count SparseCountVector::at(DimId d) const {
    auto it = std::lower_bound(indices_.begin(), indices_.end(), d);
    if (it == indices_.end() || *it != d) return 0;
    return values_[static_cast<std::size_t>(it - indices_.begin())];
}

Count SparseCountVector::total() const { return std::accumulate(values_.begin(), values_.end(), Count{0}); }

std::string_view to_string(Provenance p) {
    switch (p) {
        case Provenance::observed: return "observed";
        case Provenance::knn: return "knn";
        case Provenance::threshold: return "threshold";
    }
    return "observed";
}

Provenance provenance_from_string(std::string_view s) {
    if (s == "observed") return Provenance::observed;
    if (s == "knn") return Provenance::knn;
    if (s == "threshold") return Provenance::threshold;
    throw InputError("unknown provenance '" + std::string(s) + "'");
}

EdgeSet EdgeSet::from_arcs(std::size_t num_nodes, std::vector<Arc> arcs, Provenance provenance) {
    for (const auto& [u, v] : arcs) {
        if (u >= num_nodes || v >= num_nodes)
            throw InputError("edge (" + std::to_string(u) + ", " + std::to_string(v) + ") out of range for " +
                             std::to_string(num_nodes) + " nodes");
        if (u == v) throw InputError("self-loop on node " + std::to_string(u));
    }
    std::sort(arcs.begin(), arcs.end());
    auto dup = std::adjacent_find(arcs.begin(), arcs.end());
    if (dup != arcs.end())
        throw InputError("duplicate edge (" + std::to_string(dup->first) + ", " + std::to_string(dup->second) + ")");

    EdgeSet e;
    e.provenance_ = provenance;
    e.offsets_.assign(num_nodes + 1, 0);
    for (const auto& a : arcs) ++e.offsets_[a.first + 1];
    std::partial_sum(e.offsets_.begin(), e.offsets_.end(), e.offsets_.begin());
    e.targets_.reserve(arcs.size());
    for (const auto& a : arcs) e.targets_.push_back(a.second);
    return e;
}

EdgeSet EdgeSet::from_pairs(std::size_t num_nodes, std::span<const Arc> pairs, Provenance provenance) {
    std::vector<Arc> arcs;
    arcs.reserve(pairs.size() * 2);
    for (const auto& [u, v] : pairs) {
        arcs.emplace_back(u, v);
        arcs.emplace_back(v, u);
    }
    return from_arcs(num_nodes, std::move(arcs), provenance);
}

bool EdgeSet::has_arc(NodeId i, NodeId j) const {
    auto nb = out(i);
    return std::binary_search(nb.begin(), nb.end(), j);
}

bool EdgeSet::is_symmetric() const {
    for (NodeId i = 0; i < num_nodes(); ++i)
        for (NodeId j : out(i))
            if (!has_arc(j, i)) return false;
    return true;
}

std::size_t EdgeSet::num_pairs() const {
    std::size_t one_way = 0;
    std::size_t both = 0;
    for (NodeId i = 0; i < num_nodes(); ++i) {
        for (NodeId j : out(i)) {
            if (has_arc(j, i)) {
                ++both;
            } else {
                ++one_way;
            }
        }
    }
    return one_way + both / 2;
}

std::vector<Arc> EdgeSet::arcs() const {
    std::vector<Arc> out_arcs;
    out_arcs.reserve(num_arcs());
    for (NodeId i = 0; i < num_nodes(); ++i)
        for (NodeId j : out(i)) out_arcs.emplace_back(i, j);
    return out_arcs;
}

LabelSet::LabelSet(std::string name, std::vector<std::uint8_t> labels)
    : name_(std::move(name)), labels_(std::move(labels)) {
    for (auto l : labels_) {
        if (l > 1) throw InputError("labelset '" + name_ + "': label values must be 0 or 1");
        positives_ += l;
    }
}

std::vector<NodeId> LabelSet::positive_nodes() const {
    std::vector<NodeId> out;
    out.reserve(positives_);
    for (NodeId i = 0; i < labels_.size(); ++i)
        if (labels_[i]) out.push_back(i);
    return out;
}

void AttributedGraph::validate() const {
    if (edges.num_nodes() != num_nodes) throw InputError("edge set node count does not match graph");
    if (attributes.size() != num_nodes) throw InputError("attribute rows do not match node count");
    for (std::size_t i = 0; i < attributes.size(); ++i) {
        auto idx = attributes[i].indices();
        if (!idx.empty() && idx.back() >= num_dims)
            throw InputError("attribute dimension out of range on node " + std::to_string(i));
    }
    for (const auto& [name, ls] : labelsets) {
        if (ls.size() != num_nodes) throw InputError("labelset '" + name + "' has wrong length");
        if (ls.name() != name) throw InputError("labelset key '" + name + "' does not match its name");
    }
}

std::span<const NodeId> neighborhood(const EdgeSet& e, NodeId i) {
    if (i >= e.num_nodes()) throw InputError("node " + std::to_string(i) + " out of range");
    return e.out(i);
}

std::vector<NodeId> bfs_order(const EdgeSet& e, NodeId i, std::size_t k) {
    if (i >= e.num_nodes()) throw InputError("node " + std::to_string(i) + " out of range");
    if (k == 0) throw InputError("bfs_order: k must be at least 1");
    std::vector<NodeId> order;
    std::vector<std::uint8_t> seen(e.num_nodes(), 0);
    seen[i] = 1;
    std::vector<NodeId> frontier{i};
    std::vector<NodeId> next;
    while (!frontier.empty() && order.size() < k) {
        next.clear();
        for (NodeId u : frontier) {
            for (NodeId v : e.out(u)) {
                if (!seen[v]) {
                    seen[v] = 1;
                    next.push_back(v);
                }
            }
        }
        // Within a level, emit by ascending id.
        std::sort(next.begin(), next.end());
        for (NodeId v : next) {
            if (order.size() == k) break;
            order.push_back(v);
        }
        std::swap(frontier, next);
    }
    return order;
}

DegreeStats degree_stats(const EdgeSet& e) {
    if (e.num_arcs() == 0) throw InputError("degree_stats: empty edge set");
    std::vector<std::size_t> degrees(e.num_nodes());
    for (NodeId i = 0; i < e.num_nodes(); ++i) degrees[i] = e.out_degree(i);

    DegreeStats s;
    s.median_degree = lower_median(degrees);

    double log_sum = 0.0;
    std::size_t n = 0;
    for (auto d : degrees) {
        if (d >= 1) {
            log_sum += std::log(static_cast<double>(d));
            ++n;
        }
    }
    if (log_sum > 0.0) s.powerlaw_alpha = 1.0 + static_cast<double>(n) / log_sum;
    return s;
}

}  // namespace nettask
