#include "nettask/label_analytics.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <map>

#include "nettask/parallel.hpp"
#include "nettask/stats.hpp"

namespace nettask {

BiasReport network_label_bias(const EdgeSet& e, const LabelSet& labels) {
    if (labels.size() != e.num_nodes()) throw InputError("labelset '" + labels.name() + "' does not match edge set");
    if (labels.positive_count() == 0)
        throw UndefinedBiasError("labelset '" + labels.name() + "' has no positive nodes");

    const double prevalence = labels.prevalence();
    std::vector<double> offsets;
    offsets.reserve(labels.positive_count());
    for (NodeId i = 0; i < labels.size(); ++i) {
        if (!labels.positive(i)) continue;
        auto nb = e.out(i);
        if (nb.empty()) continue;
        std::size_t pos = 0;
        for (NodeId j : nb) pos += labels.positive(j);
        offsets.push_back(static_cast<double>(pos) / static_cast<double>(nb.size()) - prevalence);
    }
    if (offsets.empty())
        throw UndefinedBiasError("labelset '" + labels.name() + "': every positive node is isolated");

    BiasReport r;
    r.labelset = labels.name();
    r.prevalence = prevalence;
    r.n_positive = labels.positive_count();
    r.n_evaluated = offsets.size();
    r.bias = lower_median(std::move(offsets));
    return r;
}

std::vector<BiasReport> bias_scatter_table(const EdgeSet& e, const LabelSets& labelsets, unsigned workers) {
    if (labelsets.empty()) throw InputError("bias table needs at least one labelset");
    std::vector<const LabelSet*> sets;
    for (const auto& [name, ls] : labelsets) sets.push_back(&ls);
    std::vector<BiasReport> rows(sets.size());
    parallel_for(sets.size(), workers, [&](std::size_t begin, std::size_t end) {
        for (std::size_t s = begin; s < end; ++s) {
            try {
                rows[s] = network_label_bias(e, *sets[s]);
            } catch (const UndefinedBiasError& err) {
                rows[s].labelset = sets[s]->name();
                rows[s].prevalence = sets[s]->prevalence();
                rows[s].n_positive = sets[s]->positive_count();
                rows[s].reason = sets[s]->positive_count() == 0 ? "no-positives" : "all-positives-isolated";
            }
        }
    });
    return rows;
}

DeltaBiasSummary delta_bias(const std::vector<BiasReport>& base, const std::vector<BiasReport>& other,
                            std::string source, std::string target) {
    std::map<std::string, double> base_bias;
    for (const auto& r : base)
        if (r.bias) base_bias[r.labelset] = *r.bias;

    DeltaBiasSummary s;
    s.source = std::move(source);
    s.target = std::move(target);
    for (const auto& r : other) {
        auto it = base_bias.find(r.labelset);
        if (it != base_bias.end() && r.bias) s.deltas.emplace_back(r.labelset, *r.bias - it->second);
    }
    if (s.deltas.empty()) throw InputError("delta_bias: reports share no labelset with a defined bias");
    std::sort(s.deltas.begin(), s.deltas.end());

    Eigen::VectorXd d(static_cast<Eigen::Index>(s.deltas.size()));
    for (std::size_t k = 0; k < s.deltas.size(); ++k) d[static_cast<Eigen::Index>(k)] = s.deltas[k].second;
    s.mean = d.mean();
    s.stddev = population_stddev(d);
    return s;
}

}  // namespace nettask
