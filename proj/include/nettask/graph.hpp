#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nettask/types.hpp"

namespace nettask {

enum class Provenance { observed, knn, threshold };

std::string_view to_string(Provenance p);
Provenance provenance_from_string(std::string_view s);

using Arc = std::pair<NodeId, NodeId>;

// Immutable directed adjacency in CSR form. Out-neighbor lists are sorted
// ascending and duplicate-free; self-loops are rejected.
class EdgeSet {
  public:
    EdgeSet() = default;

    // Throws InputError on out-of-range endpoints, self-loops or duplicate arcs.
    static EdgeSet from_arcs(std::size_t num_nodes, std::vector<Arc> arcs, Provenance provenance);

    // Each unordered pair becomes two arcs. Pairs are validated the same way,
    // so (u, v) together with (v, u) is a duplicate.
    static EdgeSet from_pairs(std::size_t num_nodes, std::span<const Arc> pairs, Provenance provenance);

    std::size_t num_nodes() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
    std::size_t num_arcs() const { return targets_.size(); }
    Provenance provenance() const { return provenance_; }

    std::span<const NodeId> out(NodeId i) const {
        return {targets_.data() + offsets_[i], targets_.data() + offsets_[i + 1]};
    }
    std::size_t out_degree(NodeId i) const { return offsets_[i + 1] - offsets_[i]; }
    bool has_arc(NodeId i, NodeId j) const;

    // True when every arc i->j has a reverse arc j->i.
    bool is_symmetric() const;

    // Number of distinct unordered pairs {i, j} joined by at least one arc.
    std::size_t num_pairs() const;

    // All arcs in (source, target) lexicographic order.
    std::vector<Arc> arcs() const;

    bool operator==(const EdgeSet&) const = default;

  private:
    std::vector<std::size_t> offsets_;
    std::vector<NodeId> targets_;
    Provenance provenance_ = Provenance::observed;
};

// Named binary label per node with its positive rate.
class LabelSet {
  public:
    LabelSet() = default;
    // Throws InputError when a label is not 0/1.
    LabelSet(std::string name, std::vector<std::uint8_t> labels);

    const std::string& name() const { return name_; }
    std::size_t size() const { return labels_.size(); }
    std::span<const std::uint8_t> labels() const { return labels_; }
    bool positive(NodeId i) const { return labels_[i] != 0; }
    std::size_t positive_count() const { return positives_; }
    double prevalence() const {
        return labels_.empty() ? 0.0 : static_cast<double>(positives_) / static_cast<double>(labels_.size());
    }
    std::vector<NodeId> positive_nodes() const;

    bool operator==(const LabelSet&) const = default;

  private:
    std::string name_;
    std::vector<std::uint8_t> labels_;
    std::size_t positives_ = 0;
};

using LabelSets = std::map<std::string, LabelSet>;

struct AttributedGraph {
    std::size_t num_nodes = 0;
    std::size_t num_dims = 0;
    EdgeSet edges;
    std::vector<SparseCountVector> attributes;
    LabelSets labelsets;

    // Throws InputError naming the first violated invariant.
    void validate() const;
};

// Out-neighbors of i, sorted ascending.
std::span<const NodeId> neighborhood(const EdgeSet& e, NodeId i);

// First k nodes (excluding i) met by breadth-first search from i, in
// non-decreasing hop distance; ties within a level go to the lower id.
std::vector<NodeId> bfs_order(const EdgeSet& e, NodeId i, std::size_t k);

struct DegreeStats {
    std::size_t median_degree = 0;
    // Continuous Hill estimate with xmin = 1 over degrees >= 1; undefined
    // when every such degree equals 1.
    std::optional<double> powerlaw_alpha;
};

DegreeStats degree_stats(const EdgeSet& e);

}  // namespace nettask
