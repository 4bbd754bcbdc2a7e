#include "nettask/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "nettask/parallel.hpp"
#include "nettask/rng.hpp"

namespace nettask {

namespace {

// Cumulative weights over a list of items, sampled by binary search.
class Discrete {
  public:
    Discrete() = default;
    Discrete(std::vector<DimId> items, const std::vector<double>& weights) : items_(std::move(items)) {
        cumulative_.resize(weights.size());
        std::partial_sum(weights.begin(), weights.end(), cumulative_.begin());
    }
    DimId sample(Rng& rng) const {
        const double u = rng.uniform() * cumulative_.back();
        auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
        if (it == cumulative_.end()) --it;
        return items_[static_cast<std::size_t>(it - cumulative_.begin())];
    }
    const std::vector<DimId>& items() const { return items_; }
    double weight(std::size_t k) const { return k == 0 ? cumulative_[0] : cumulative_[k] - cumulative_[k - 1]; }

  private:
    std::vector<DimId> items_;
    std::vector<double> cumulative_;
};

// Items in a random order; weight of position r is 1 / (r + 1)^s.
Discrete zipf_over(std::vector<DimId> items, double s, Rng& rng) {
    shuffle(items.begin(), items.end(), rng);
    std::vector<double> w(items.size());
    for (std::size_t r = 0; r < w.size(); ++r) w[r] = 1.0 / std::pow(static_cast<double>(r + 1), s);
    return Discrete(std::move(items), w);
}

// Weighted sampling without replacement (exponential keys), most likely first.
std::vector<DimId> weighted_order(const Discrete& d, Rng& rng) {
    std::vector<std::pair<double, DimId>> keyed;
    keyed.reserve(d.items().size());
    for (std::size_t k = 0; k < d.items().size(); ++k) {
        double u = rng.uniform();
        if (u <= 0.0) u = 0x1.0p-53;
        keyed.emplace_back(std::log(u) / d.weight(k), d.items()[k]);
    }
    std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) {
        return a.first != b.first ? a.first > b.first : a.second < b.second;
    });
    std::vector<DimId> out;
    out.reserve(keyed.size());
    for (const auto& [key, item] : keyed) out.push_back(item);
    return out;
}

std::size_t block_begin(std::size_t c, std::size_t dims, std::size_t communities) { return c * dims / communities; }

}  // namespace

void SynthConfig::validate() const {
    if (num_nodes < 2) throw ConfigError("synth: num_nodes must be at least 2");
    if (num_dimensions < 1) throw ConfigError("synth: num_dimensions must be at least 1");
    if (num_communities < 1 || num_communities > num_nodes) throw ConfigError("synth: num_communities out of range");
    if (num_communities > num_dimensions) throw ConfigError("synth: need at least one dimension per community");
    if (!(homophily >= 0.0 && homophily <= 1.0)) throw ConfigError("synth: homophily must lie in [0, 1]");
    if (!(concentration >= 0.0 && concentration <= 1.0)) throw ConfigError("synth: concentration must lie in [0, 1]");
    if (!(mean_plays >= 1.0)) throw ConfigError("synth: mean_plays must be at least 1");
    if (!(activity_sigma >= 0.0)) throw ConfigError("synth: activity_sigma must be non-negative");
    if (!(target_degree > 0.0)) throw ConfigError("synth: target_degree must be positive");
    if (target_degree >= static_cast<double>(num_nodes - 1))
        throw ConfigError("synth: target_degree must be below num_nodes - 1");
    if (min_plays < 1 || min_artists < 1) throw ConfigError("synth: listener thresholds must be at least 1");
    for (const auto& l : labelsets) {
        if (l.name.empty()) throw ConfigError("synth: labelset with empty name");
        if (l.home_community >= num_communities) throw ConfigError("synth: labelset '" + l.name + "' home community out of range");
        if (!(l.locality >= 0.0 && l.locality <= 1.0)) throw ConfigError("synth: labelset '" + l.name + "' locality must lie in [0, 1]");
        if (l.home_span < 1 || l.home_span > num_communities)
            throw ConfigError("synth: labelset '" + l.name + "' home_span out of range");
        if (l.genre_size < 1) throw ConfigError("synth: labelset '" + l.name + "' genre_size must be at least 1");
        if (l.target_prevalence && !(*l.target_prevalence > 0.0 && *l.target_prevalence < 1.0))
            throw ConfigError("synth: labelset '" + l.name + "' target prevalence must lie in (0, 1)");
    }
}

SynthResult generate_synthetic(const SynthConfig& cfg, unsigned workers) {
    cfg.validate();
    const std::size_t n = cfg.num_nodes;
    const std::size_t dims = cfg.num_dimensions;
    const std::size_t nc = cfg.num_communities;
    SynthResult out;

    // Balanced random community assignment.
    {
        std::vector<NodeId> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        Rng rng(cfg.seed, "communities");
        shuffle(perm.begin(), perm.end(), rng);
        out.community.resize(n);
        for (std::size_t k = 0; k < n; ++k) out.community[perm[k]] = static_cast<std::uint32_t>(k % nc);
    }

    // Artist catalogues: one block of dimensions per community, plus a global
    // popularity ranking over all dimensions.
    std::vector<Discrete> local(nc);
    for (std::size_t c = 0; c < nc; ++c) {
        std::vector<DimId> block;
        for (std::size_t d = block_begin(c, dims, nc); d < block_begin(c + 1, dims, nc); ++d) block.push_back(static_cast<DimId>(d));
        Rng rng(cfg.seed, "catalogue", c);
        local[c] = zipf_over(std::move(block), cfg.zipf_exponent, rng);
    }
    Discrete global;
    {
        std::vector<DimId> all(dims);
        std::iota(all.begin(), all.end(), 0);
        Rng rng(cfg.seed, "popularity");
        global = zipf_over(std::move(all), cfg.zipf_exponent, rng);
    }

    // Plays: log-normal activity, each play from the home catalogue with
    // probability `concentration`, else from the global ranking.
    const double mu = std::log(cfg.mean_plays) - 0.5 * cfg.activity_sigma * cfg.activity_sigma;
    std::vector<SparseCountVector> rows(n);
    parallel_for(n, workers, [&](std::size_t begin, std::size_t end) {
        std::vector<Count> counts(dims, 0);
        std::vector<DimId> touched;
        for (std::size_t u = begin; u < end; ++u) {
            Rng rng(cfg.seed, "plays", u);
            const double activity = std::exp(mu + cfg.activity_sigma * rng.normal());
            const auto total = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::llround(activity)));
            touched.clear();
            for (std::uint64_t p = 0; p < total; ++p) {
                const DimId d = rng.uniform() < cfg.concentration ? local[out.community[u]].sample(rng) : global.sample(rng);
                if (counts[d]++ == 0) touched.push_back(d);
            }
            std::sort(touched.begin(), touched.end());
            std::vector<Count> values;
            values.reserve(touched.size());
            for (DimId d : touched) {
                values.push_back(counts[d]);
                counts[d] = 0;
            }
            rows[u] = SparseCountVector(touched, std::move(values));
        }
    });

    std::vector<PlayRow> play_rows;
    for (NodeId u = 0; u < n; ++u) {
        auto idx = rows[u].indices();
        auto val = rows[u].values();
        for (std::size_t k = 0; k < idx.size(); ++k) play_rows.push_back({u, idx[k], val[k]});
    }
    out.plays = PlayLog::aggregate(n, dims, std::move(play_rows));
    const auto listeners = derive_artist_listeners(out.plays, cfg.min_plays);

    // Genres: a candidate artist order mixing the home catalogue and the
    // global ranking; the genre is a prefix of that order.
    for (const auto& rule : cfg.labelsets) {
        Rng rng(cfg.seed, "genre", fnv1a(rule.name));
        std::vector<std::vector<DimId>> homes;
        const std::size_t stride = nc / rule.home_span;
        for (std::size_t h = 0; h < rule.home_span; ++h)
            homes.push_back(weighted_order(local[(rule.home_community + h * stride) % nc], rng));
        const auto pool = weighted_order(global, rng);
        std::vector<DimId> order;
        std::vector<std::uint8_t> used(dims, 0);
        std::vector<std::size_t> next(homes.size(), 0);
        std::size_t home_left = 0, gi = 0, turn = 0;
        for (const auto& h : homes) home_left += h.size();
        const std::size_t limit = std::min<std::size_t>(1000, dims);
        while (order.size() < limit && (home_left > 0 || gi < pool.size())) {
            const bool from_home = gi >= pool.size() || (home_left > 0 && rng.uniform() < rule.locality);
            DimId d;
            if (from_home) {
                // Round-robin over home catalogues that still have artists.
                while (next[turn % homes.size()] >= homes[turn % homes.size()].size()) ++turn;
                const std::size_t h = turn % homes.size();
                d = homes[h][next[h]++];
                --home_left;
                ++turn;
            } else {
                d = pool[gi++];
            }
            if (!used[d]) {
                used[d] = 1;
                order.push_back(d);
            }
        }

        auto labels_for = [&](std::size_t m) {
            GenreMap one{{rule.name, std::vector<DimId>(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(m))}};
            return derive_genre_labels(listeners, one, cfg.min_artists).at(rule.name);
        };
        std::size_t size = std::min(rule.genre_size, order.size());
        if (rule.target_prevalence) {
            // Prevalence is non-decreasing in the prefix length.
            const double target = *rule.target_prevalence;
            std::size_t lo = 1, hi_m = order.size();
            while (lo < hi_m) {
                const std::size_t mid = lo + (hi_m - lo) / 2;
                if (labels_for(mid).prevalence() >= target) {
                    hi_m = mid;
                } else {
                    lo = mid + 1;
                }
            }
            size = lo;
            if (size > 1 && std::abs(labels_for(size - 1).prevalence() - target) <= std::abs(labels_for(size).prevalence() - target))
                --size;
        }
        out.genres[rule.name] = std::vector<DimId>(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(size));
    }
    for (auto& [name, set] : out.genres) std::sort(set.begin(), set.end());
    auto labelsets = derive_genre_labels(listeners, out.genres, cfg.min_artists);

    // Friendships: block model whose within-community share of ties moves
    // from the random-graph baseline (h = 0) to 1 (h = 1).
    std::vector<std::size_t> sizes(nc, 0);
    for (auto c : out.community) ++sizes[c];
    const double all_pairs = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
    double within_pairs = 0.0;
    for (auto s : sizes) within_pairs += 0.5 * static_cast<double>(s) * static_cast<double>(s > 0 ? s - 1 : 0);
    const double across_pairs = all_pairs - within_pairs;
    const double expected_edges = 0.5 * static_cast<double>(n) * cfg.target_degree;
    const double base_share = within_pairs / all_pairs;
    const double within_share = across_pairs > 0 ? base_share + cfg.homophily * (1.0 - base_share) : 1.0;
    if (within_pairs <= 0.0 && within_share > 0.0) throw ConfigError("synth: communities too small for within ties");
    out.p_within = within_pairs > 0 ? within_share * expected_edges / within_pairs : 0.0;
    out.p_across = across_pairs > 0 ? (1.0 - within_share) * expected_edges / across_pairs : 0.0;
    if (out.p_within > 1.0 || out.p_across > 1.0)
        throw ConfigError("synth: infeasible degree target (edge probability above 1)");
    out.within_pairs = static_cast<std::size_t>(within_pairs);
    out.across_pairs = static_cast<std::size_t>(across_pairs);

    std::vector<std::vector<Arc>> per_node(n);
    parallel_for(n, workers, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            // One uniform per pair, so graphs at different homophily share
            // their randomness and nest monotonically.
            Rng rng(cfg.seed, "social", i);
            for (std::size_t j = i + 1; j < n; ++j) {
                const double u = rng.uniform();
                const double p = out.community[i] == out.community[j] ? out.p_within : out.p_across;
                if (u < p) per_node[i].emplace_back(static_cast<NodeId>(i), static_cast<NodeId>(j));
            }
        }
    });
    std::vector<Arc> pairs;
    for (auto& v : per_node) {
        for (const auto& a : v) {
            if (out.community[a.first] == out.community[a.second]) {
                ++out.within_edges;
            } else {
                ++out.across_edges;
            }
        }
        pairs.insert(pairs.end(), v.begin(), v.end());
    }

    auto& g = out.graph;
    g.num_nodes = n;
    g.num_dims = dims;
    g.edges = EdgeSet::from_pairs(n, pairs, Provenance::observed);
    g.attributes = std::move(rows);
    g.labelsets = std::move(labelsets);
    g.validate();
    return out;
}

std::vector<SynthLabelRule> labelset_battery(std::size_t count, std::size_t num_communities, double lo, double hi,
                                             std::optional<double> prevalence, std::size_t genre_size,
                                             std::size_t home_span) {
    std::vector<SynthLabelRule> rules;
    for (std::size_t k = 0; k < count; ++k) {
        SynthLabelRule r;
        char name[32];
        std::snprintf(name, sizeof name, "genre%02zu", k);
        r.name = name;
        r.home_community = k % std::max<std::size_t>(1, num_communities);
        r.locality = count > 1 ? lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(count - 1) : lo;
        if (k + 1 == count && count > 1) r.locality = hi;
        r.genre_size = genre_size;
        r.home_span = home_span;
        r.target_prevalence = prevalence;
        rules.push_back(std::move(r));
    }
    return rules;
}

}  // namespace nettask
