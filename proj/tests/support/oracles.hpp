#pragma once

// Brute-force reference implementations used only by tests. They work on
// dense copies and plain loops, sharing no code with the library beyond
// the data types.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <random>
#include <vector>

#include "nettask/graph.hpp"
#include "nettask/similarity.hpp"
#include "nettask/types.hpp"

namespace oracle {

using nettask::Count;
using nettask::NodeId;
using nettask::ScoredPair;
using nettask::Similarity;
using nettask::SparseCountVector;

inline std::vector<std::vector<Count>> densify(const std::vector<SparseCountVector>& rows, std::size_t dims) {
    std::vector<std::vector<Count>> out(rows.size(), std::vector<Count>(dims, 0));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t k = 0; k < rows[i].nnz(); ++k) out[i][rows[i].indices()[k]] = rows[i].values()[k];
    }
    return out;
}

inline double score(Similarity s, const std::vector<Count>& a, const std::vector<Count>& b) {
    if (s == Similarity::intersection) {
        Count sum = 0;
        for (std::size_t d = 0; d < a.size(); ++d) sum += std::min(a[d], b[d]);
        return static_cast<double>(sum);
    }
    Count dot = 0, aa = 0, bb = 0;
    for (std::size_t d = 0; d < a.size(); ++d) {
        dot += a[d] * b[d];
        aa += a[d] * a[d];
        bb += b[d] * b[d];
    }
    if (dot == 0) return 0.0;
    return static_cast<double>(dot) / (std::sqrt(static_cast<double>(aa)) * std::sqrt(static_cast<double>(bb)));
}

inline std::vector<ScoredPair> topk_per_node(const std::vector<SparseCountVector>& rows, std::size_t dims,
                                             Similarity s, std::size_t k) {
    const auto dense = densify(rows, dims);
    std::vector<ScoredPair> out;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        std::vector<ScoredPair> cand;
        for (std::size_t j = 0; j < rows.size(); ++j) {
            if (j == i) continue;
            const double v = score(s, dense[i], dense[j]);
            if (v > 0) cand.push_back({static_cast<NodeId>(i), static_cast<NodeId>(j), v});
        }
        std::sort(cand.begin(), cand.end(), [](const ScoredPair& a, const ScoredPair& b) {
            return a.score != b.score ? a.score > b.score : a.j < b.j;
        });
        if (cand.size() > k) cand.resize(k);
        out.insert(out.end(), cand.begin(), cand.end());
    }
    return out;
}

inline std::vector<ScoredPair> topk_global(const std::vector<SparseCountVector>& rows, std::size_t dims,
                                           Similarity s, std::size_t lambda) {
    const auto dense = densify(rows, dims);
    std::vector<ScoredPair> cand;
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = i + 1; j < rows.size(); ++j) {
            const double v = score(s, dense[i], dense[j]);
            if (v > 0) cand.push_back({static_cast<NodeId>(i), static_cast<NodeId>(j), v});
        }
    std::sort(cand.begin(), cand.end(), [](const ScoredPair& a, const ScoredPair& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.i != b.i ? a.i < b.i : a.j < b.j;
    });
    if (cand.size() > lambda) cand.resize(lambda);
    return cand;
}

// Hop distances from src over an adjacency matrix; -1 when unreachable.
inline std::vector<int> hop_distances(const nettask::EdgeSet& e, NodeId src) {
    const std::size_t n = e.num_nodes();
    std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
    for (const auto& [u, v] : e.arcs()) adj[u][v] = true;
    std::vector<int> dist(n, -1);
    dist[src] = 0;
    // Relax level by level until nothing changes.
    for (int level = 0;; ++level) {
        bool grew = false;
        for (std::size_t u = 0; u < n; ++u) {
            if (dist[u] != level) continue;
            for (std::size_t v = 0; v < n; ++v)
                if (adj[u][v] && dist[v] < 0) {
                    dist[v] = level + 1;
                    grew = true;
                }
        }
        if (!grew) break;
    }
    return dist;
}

// Median-based bias computed from scratch: fractions are kept as exact
// rationals until the final subtraction.
inline std::optional<double> bias(const nettask::EdgeSet& e, const std::vector<std::uint8_t>& labels) {
    std::size_t positives = 0;
    for (auto l : labels) positives += l;
    std::vector<std::pair<std::size_t, std::size_t>> fracs;  // (pos, deg)
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (!labels[i]) continue;
        std::size_t deg = 0, pos = 0;
        for (const auto& [u, v] : e.arcs())
            if (u == i) {
                ++deg;
                pos += labels[v];
            }
        if (deg > 0) fracs.emplace_back(pos, deg);
    }
    if (fracs.empty()) return std::nullopt;
    std::sort(fracs.begin(), fracs.end(), [](const auto& a, const auto& b) { return a.first * b.second < b.first * a.second; });
    const auto& m = fracs[(fracs.size() - 1) / 2];
    return static_cast<double>(m.first) / static_cast<double>(m.second) -
           static_cast<double>(positives) / static_cast<double>(labels.size());
}

inline std::vector<SparseCountVector> random_rows(std::size_t n, std::size_t dims, double density, Count max_count,
                                                  std::mt19937_64& gen) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_int_distribution<Count> c(1, max_count);
    std::vector<SparseCountVector> rows;
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<nettask::DimId> idx;
        std::vector<Count> val;
        for (std::size_t d = 0; d < dims; ++d)
            if (u(gen) < density) {
                idx.push_back(static_cast<nettask::DimId>(d));
                val.push_back(c(gen));
            }
        rows.emplace_back(std::move(idx), std::move(val));
    }
    return rows;
}

}  // namespace oracle
