#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "nettask/types.hpp"

namespace nettask {

enum class Similarity { intersection, cosine };

std::string_view to_string(Similarity s);
Similarity similarity_from_string(std::string_view s);

// Sum over dimensions of min(a_k, b_k). Exact.
Count s_int(const SparseCountVector& a, const SparseCountVector& b);

// dot(a, b) / (|a| |b|); 0 when either vector is empty.
double s_cos(const SparseCountVector& a, const SparseCountVector& b);

double similarity(Similarity s, const SparseCountVector& a, const SparseCountVector& b);

struct ScoredPair {
    NodeId i;
    NodeId j;
    double score;
    bool operator==(const ScoredPair&) const = default;
};

// For every node i, its k highest-scoring peers j != i with score > 0,
// ordered by (score desc, j asc). Output is grouped by ascending i.
std::vector<ScoredPair> topk_per_node(std::span<const SparseCountVector> attributes, Similarity s,
                                      std::size_t k, unsigned workers = 1);

// The lambda highest-scoring unordered pairs (i < j) with score > 0,
// ordered by (score desc, i asc, j asc).
std::vector<ScoredPair> topk_global(std::span<const SparseCountVector> attributes, Similarity s,
                                    std::size_t lambda, unsigned workers = 1);

// Number of unordered pairs with nonzero similarity (shared support).
std::size_t count_nonzero_pairs(std::span<const SparseCountVector> attributes);

}  // namespace nettask
