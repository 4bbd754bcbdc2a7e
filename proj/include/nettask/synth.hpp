#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nettask/graph.hpp"
#include "nettask/listeners.hpp"

namespace nettask {

// A planted genre: its artist set leans toward one community's catalogue.
struct SynthLabelRule {
    std::string name;
    std::size_t home_community = 0;
    // Number of home catalogues (home_community, home_community + stride,
    // ...), stride = communities / span. The genre is a union of scenes.
    std::size_t home_span = 1;
    // Fraction of genre artists drawn from the home community's catalogue;
    // the rest come from the global popularity ranking.
    double locality = 0.8;
    std::size_t genre_size = 60;
    // When set, genre_size is calibrated (binary search over prefixes of the
    // genre's candidate artist order) to bring prevalence closest to this.
    std::optional<double> target_prevalence;
};

struct SynthConfig {
    std::size_t num_nodes = 2000;
    std::size_t num_dimensions = 600;
    std::size_t num_communities = 5;
    // 0: social ties ignore communities; 1: every tie is within a community.
    double homophily = 0.5;
    // Probability that a play goes to the listener's own community catalogue.
    double concentration = 0.7;
    double mean_plays = 400.0;
    // Log-normal spread of per-user activity.
    double activity_sigma = 0.8;
    double zipf_exponent = 1.0;
    double target_degree = 20.0;
    std::vector<SynthLabelRule> labelsets;
    Count min_plays = kDefaultMinPlays;
    std::size_t min_artists = kDefaultMinArtists;
    std::uint64_t seed = 1;

    // Throws ConfigError on invalid values.
    void validate() const;
};

struct SynthResult {
    AttributedGraph graph;
    PlayLog plays;
    GenreMap genres;
    std::vector<std::uint32_t> community;
    double p_within = 0.0;
    double p_across = 0.0;
    std::size_t within_edges = 0;
    std::size_t across_edges = 0;
    std::size_t within_pairs = 0;
    std::size_t across_pairs = 0;
};

// Communities, heavy-tailed community-skewed plays, block-model friendships
// steered by homophily, and genre labels derived through the listener rules.
SynthResult generate_synthetic(const SynthConfig& cfg, unsigned workers = 1);

// A battery of labelsets with locality spread evenly over [lo, hi], homes
// cycling through communities, each calibrated to `prevalence`.
std::vector<SynthLabelRule> labelset_battery(std::size_t count, std::size_t num_communities, double lo, double hi,
                                             std::optional<double> prevalence, std::size_t genre_size = 60,
                                             std::size_t home_span = 1);

}  // namespace nettask
