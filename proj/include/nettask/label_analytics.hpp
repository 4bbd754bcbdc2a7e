#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "nettask/graph.hpp"

namespace nettask {

struct BiasReport {
    std::string labelset;
    double prevalence = 0.0;
    // Null when the bias is undefined; `reason` then says why.
    std::optional<double> bias;
    std::size_t n_evaluated = 0;
    std::size_t n_positive = 0;
    std::string reason;
};

// Median over positive nodes with a non-empty out-neighborhood of
// (fraction of positive neighbors - prevalence). Lower-middle median.
// Throws UndefinedBiasError when there are no positives or all are isolated.
BiasReport network_label_bias(const EdgeSet& e, const LabelSet& labels);

// One row per labelset, sorted by name. Undefined biases become null rows.
std::vector<BiasReport> bias_scatter_table(const EdgeSet& e, const LabelSets& labelsets, unsigned workers = 1);

struct DeltaBiasSummary {
    std::string source;
    std::string target;
    // (labelset, other - base) for every labelset with a defined bias in both.
    std::vector<std::pair<std::string, double>> deltas;
    double mean = 0.0;
    double stddev = 0.0;
};

// Throws InputError when the two reports share no labelset with defined bias.
DeltaBiasSummary delta_bias(const std::vector<BiasReport>& base, const std::vector<BiasReport>& other,
                            std::string source = "base", std::string target = "other");

}  // namespace nettask
