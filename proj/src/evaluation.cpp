#include "nettask/evaluation.hpp"

#include <algorithm>
#include <Eigen/Core>

#include "nettask/parallel.hpp"

namespace nettask {

namespace {

std::string model_label(ModelKind k) { return k == ModelKind::knn ? "KNN" : "TH"; }

const LabelSet& find_labelset(const AttributedGraph& g, const std::string& name) {
    auto it = g.labelsets.find(name);
    if (it == g.labelsets.end()) throw InputError("unknown labelset '" + name + "'");
    return it->second;
}

OracleResult tally(const LabelSet& labels, std::string model, std::string method,
                   const std::vector<std::optional<std::uint8_t>>& predictions) {
    OracleResult r;
    r.labelset = labels.name();
    r.model = std::move(model);
    r.method = std::move(method);
    r.n_tested = predictions.size();
    for (const auto& p : predictions) {
        if (!p) continue;
        ++r.n_covered;
        r.n_correct += *p;
    }
    if (r.n_covered > 0) r.precision = static_cast<double>(r.n_correct) / static_cast<double>(r.n_covered);
    r.recall_coverage = r.n_tested ? static_cast<double>(r.n_covered) / static_cast<double>(r.n_tested) : 0.0;
    return r;
}

std::optional<double> mean_of(const std::vector<double>& v) {
    if (v.empty()) return std::nullopt;
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size())).mean();
}

MethodSpec spec_for(Method m, const EvalContext& ctx) { return MethodSpec{m, ctx.params, ctx.seed}; }

const Baselines& baselines_for(const std::string& name, const AttributedGraph& g, const EvalContext& ctx,
                               const BaselineCache* cache, BaselineCache& local) {
    if (cache) {
        auto it = cache->find(name);
        if (it != cache->end()) return it->second;
    }
    auto it = local.find(name);
    if (it == local.end()) it = local.emplace(name, compute_baselines(g.attributes, find_labelset(g, name), ctx)).first;
    return it->second;
}

}  // namespace

OracleResult run_oracle(std::span<const SparseCountVector> attributes, const EdgeSet& edges, const MethodSpec& spec,
                        const LabelSet& labels, const EvalContext& ctx, Neighborhood nb, std::string model_name) {
    if (!is_local(spec.method)) throw InputError("run_oracle: use run_oracle_ga / run_oracle_gl for baselines");
    if (labels.size() != edges.num_nodes() || labels.size() != attributes.size())
        throw InputError("run_oracle: graph, attributes and labelset sizes differ");
    if (labels.positive_count() == 0) throw InputError("run_oracle: labelset '" + labels.name() + "' has no positives");

    const auto positives = labels.positive_nodes();
    std::vector<std::optional<std::uint8_t>> predictions(positives.size());
    parallel_for(positives.size(), ctx.workers, [&](std::size_t begin, std::size_t end) {
        std::vector<NodeId> bfs;
        for (std::size_t k = begin; k < end; ++k) {
            const NodeId i = positives[k];
            std::span<const NodeId> rows;
            if (nb.kind == Neighborhood::Kind::adjacency) {
                rows = neighborhood(edges, i);
            } else {
                bfs = bfs_order(edges, i, nb.size);
                rows = bfs;
            }
            predictions[k] = classify_local(spec, rows, attributes, labels, i, ctx.observer).label;
        }
    });
    return tally(labels, std::move(model_name), std::string(to_string(spec.method)), predictions);
}

OracleResult run_oracle_ga(std::span<const SparseCountVector> attributes, const GaModels& ga, Method base,
                           const LabelSet& labels, const EvalContext& ctx) {
    if (labels.positive_count() == 0) throw InputError("run_oracle: labelset '" + labels.name() + "' has no positives");
    const auto positives = labels.positive_nodes();
    std::vector<std::optional<std::uint8_t>> predictions(positives.size());
    parallel_for(positives.size(), ctx.workers, [&](std::size_t begin, std::size_t end) {
        for (std::size_t k = begin; k < end; ++k)
            predictions[k] = ga_predict(ga, positives[k], attributes[positives[k]], base).label;
    });
    return tally(labels, "global", "GA-" + std::string(to_string(base)), predictions);
}

OracleResult run_oracle_gl(const LabelSet& labels, const EvalContext& ctx) {
    if (labels.positive_count() == 0) throw InputError("run_oracle: labelset '" + labels.name() + "' has no positives");
    const auto positives = labels.positive_nodes();
    std::vector<std::optional<std::uint8_t>> predictions(positives.size());
    for (std::size_t k = 0; k < positives.size(); ++k) predictions[k] = gl_predict(labels, positives[k], ctx.seed).label;
    return tally(labels, "global", "GL", predictions);
}

double lift(const OracleResult& result, const OracleResult& baseline) {
    if (result.labelset != baseline.labelset)
        throw InputError("lift: labelsets differ ('" + result.labelset + "' vs '" + baseline.labelset + "')");
    if (result.n_tested != baseline.n_tested) throw InputError("lift: tested populations differ");
    return lift(result, static_cast<double>(baseline.n_correct));
}

double lift(const OracleResult& result, double baseline_correct) {
    if (result.n_tested == 0) throw InputError("lift: no tested nodes");
    return (static_cast<double>(result.n_correct) - baseline_correct) / static_cast<double>(result.n_tested);
}

double Baselines::ga_correct_for(Method m) const {
    if (auto it = ga.find(m); it != ga.end()) return static_cast<double>(it->second.n_correct);
    if (ga.empty()) throw InputError("no GA baselines available");
    // Surrogate: mean GA precision, expressed as a correct count over the same
    // tested population.
    std::map<Method, double> precisions;
    for (const auto& [base, r] : ga) precisions[base] = r.precision.value_or(0.0);
    return ga_surrogate_precision(precisions) * static_cast<double>(ga.begin()->second.n_tested);
}

Baselines compute_baselines(std::span<const SparseCountVector> attributes, const LabelSet& labels,
                            const EvalContext& ctx) {
    static constexpr std::array<Method, 3> bases{Method::RF, Method::LR, Method::NB};
    Baselines b;
    // Per-base fits are independent; run them across workers.
    std::array<std::optional<GaModels>, 3> fitted;
    parallel_for(bases.size(), ctx.workers, [&](std::size_t begin, std::size_t end) {
        for (std::size_t k = begin; k < end; ++k)
            fitted[k] = ga_fit(attributes, labels, ctx.seed, ctx.params, std::span<const Method>(&bases[k], 1));
    });
    for (std::size_t k = 0; k < bases.size(); ++k)
        b.ga[bases[k]] = run_oracle_ga(attributes, *fitted[k], bases[k], labels, ctx);
    b.gl = run_oracle_gl(labels, ctx);
    return b;
}

BaselineCache compute_baselines(const AttributedGraph& g, const std::vector<std::string>& labelsets,
                                const EvalContext& ctx) {
    BaselineCache cache;
    for (const auto& name : labelsets) cache.emplace(name, compute_baselines(g.attributes, find_labelset(g, name), ctx));
    return cache;
}

LiftTable lift_heatmap(const AttributedGraph& g, const std::vector<NamedEdges>& models,
                       const std::vector<Method>& methods, const std::vector<std::string>& labelsets,
                       const EvalContext& ctx, const BaselineCache* baselines) {
    if (models.empty() || methods.empty() || labelsets.empty())
        throw InputError("lift_heatmap needs at least one model, method and labelset");
    BaselineCache local;
    LiftTable table;
    for (const auto& m : models)
        for (Method meth : methods) table.columns.push_back({m.name, std::string(to_string(meth))});

    for (const auto& name : labelsets) {
        const LabelSet& ls = find_labelset(g, name);
        const Baselines& base = baselines_for(name, g, ctx, baselines, local);
        auto& row = table.cells[name];
        std::vector<double> row_lifts;
        for (const auto& m : models) {
            for (Method meth : methods) {
                LiftCell cell;
                cell.result = run_oracle(g.attributes, *m.edges, spec_for(meth, ctx), ls, ctx,
                                         Neighborhood::adjacency(), m.name);
                if (cell.result.precision) {
                    cell.lift_ga = lift(cell.result, base.ga_correct_for(meth));
                    cell.lift_gl = lift(cell.result, base.gl);
                    row_lifts.push_back(*cell.lift_ga);
                }
                row.push_back(std::move(cell));
            }
        }
        table.row_mean_ga[name] = mean_of(row_lifts);
    }

    for (std::size_t c = 0; c < table.columns.size(); ++c) {
        std::vector<double> ga, gl;
        auto& col = table.columns[c];
        for (const auto& name : labelsets) {
            const auto& cell = table.cells[name][c];
            ++col.n_cells;
            if (!cell.lift_ga) {
                ++col.n_null;
                continue;
            }
            ga.push_back(*cell.lift_ga);
            gl.push_back(*cell.lift_gl);
        }
        col.mean_lift_ga = mean_of(ga);
        col.mean_lift_gl = mean_of(gl);
    }

    table.row_order = labelsets;
    std::sort(table.row_order.begin(), table.row_order.end(), [&](const std::string& a, const std::string& b) {
        const auto& ma = table.row_mean_ga[a];
        const auto& mb = table.row_mean_ga[b];
        if (ma.has_value() != mb.has_value()) return ma.has_value();
        if (ma && *ma != *mb) return *ma > *mb;
        return a < b;
    });
    table.row_order.erase(std::unique(table.row_order.begin(), table.row_order.end()), table.row_order.end());
    return table;
}

namespace {

// Mean lift vs GA and mean coverage over labelsets for one edge set.
struct PointSummary {
    std::optional<double> mean_lift;
    std::optional<double> mean_coverage;
};

PointSummary evaluate_point(const AttributedGraph& g, const EdgeSet& edges, Method method,
                            const std::vector<std::string>& labelsets, const EvalContext& ctx, Neighborhood nb,
                            const std::string& model, const BaselineCache* cache, BaselineCache& local) {
    std::vector<double> lifts, coverage;
    for (const auto& name : labelsets) {
        const LabelSet& ls = find_labelset(g, name);
        const Baselines& base = baselines_for(name, g, ctx, cache, local);
        const auto r = run_oracle(g.attributes, edges, spec_for(method, ctx), ls, ctx, nb, model);
        coverage.push_back(r.recall_coverage);
        if (r.precision) lifts.push_back(lift(r, base.ga_correct_for(method)));
    }
    return {mean_of(lifts), mean_of(coverage)};
}

}  // namespace

SweepSeries density_sweep(const AttributedGraph& g, const std::vector<ModelKind>& kinds,
                          const std::vector<Method>& methods, const std::vector<std::string>& labelsets,
                          const std::vector<double>& factors, const EvalContext& ctx,
                          const DensitySweepOptions& options, const BaselineCache* baselines) {
    if (factors.empty()) throw InputError("density sweep needs at least one factor");
    for (double f : factors)
        if (!(f > 0.0)) throw InputError("density factors must be positive");
    BaselineCache local;
    SweepSeries out;
    out.kind = SweepSeries::Kind::density;
    out.x = factors;
    for (ModelKind kind : kinds) {
        std::vector<SweepSeries::Series> block;
        for (Method m : methods) block.push_back({model_label(kind), std::string(to_string(m)), {}, {}, {}});
        for (double f : factors) {
            std::optional<EdgeSet> edges;
            std::optional<std::size_t> k;
            try {
                ModelSpec spec{kind, options.similarity, match_density(g.edges, f, kind, options.knn_budget), f};
                edges = build_model(g.attributes, spec, ctx.workers);
                if (kind == ModelKind::knn) k = knn_k(spec.lambda, g.num_nodes);
            } catch (const DensityTooLowError&) {
            }
            for (std::size_t mi = 0; mi < methods.size(); ++mi) {
                auto& s = block[mi];
                s.k.push_back(k);
                if (!edges) {
                    s.mean_lift_ga.emplace_back();
                    s.mean_coverage.emplace_back();
                    continue;
                }
                auto p = evaluate_point(g, *edges, methods[mi], labelsets, ctx, Neighborhood::adjacency(),
                                        model_label(kind), baselines, local);
                s.mean_lift_ga.push_back(p.mean_lift);
                s.mean_coverage.push_back(p.mean_coverage);
            }
        }
        out.series.insert(out.series.end(), block.begin(), block.end());
    }
    return out;
}

SweepSeries bfs_sweep(const AttributedGraph& g, const NamedEdges& edges, const std::vector<Method>& methods,
                      const std::vector<std::string>& labelsets, const std::vector<std::size_t>& sizes,
                      const EvalContext& ctx, const BaselineCache* baselines) {
    if (sizes.empty()) throw InputError("bfs sweep needs at least one size");
    for (auto s : sizes)
        if (s < 1) throw InputError("bfs sizes must be at least 1");
    BaselineCache local;
    SweepSeries out;
    out.kind = SweepSeries::Kind::bfs_size;
    for (auto s : sizes) out.x.push_back(static_cast<double>(s));
    for (Method m : methods) {
        SweepSeries::Series series{edges.name, std::string(to_string(m)), {}, {}, {}};
        for (auto s : sizes) {
            auto p = evaluate_point(g, *edges.edges, m, labelsets, ctx, Neighborhood::bfs(s), edges.name, baselines,
                                    local);
            series.mean_lift_ga.push_back(p.mean_lift);
            series.mean_coverage.push_back(p.mean_coverage);
            series.k.emplace_back();
        }
        out.series.push_back(std::move(series));
    }
    return out;
}

BiasLiftRegression bias_lift_regression(std::vector<BiasLiftPoint> points) {
    BiasLiftRegression reg;
    std::vector<double> lifts, biases, prevalences;
    for (const auto& p : points) {
        if (!p.bias || !p.lift) continue;
        lifts.push_back(*p.lift);
        biases.push_back(*p.bias);
        prevalences.push_back(p.prevalence);
    }
    if (lifts.size() < 3) throw InputError("bias-lift regression needs at least three labelsets with values");
    reg.n_used = lifts.size();
    const auto n = static_cast<Eigen::Index>(lifts.size());
    Eigen::Map<const Eigen::VectorXd> x(lifts.data(), n), yb(biases.data(), n), yp(prevalences.data(), n);
    reg.bias_vs_lift = ols_fit(x, yb);
    reg.prevalence_vs_lift = ols_fit(x, yp);
    reg.points = std::move(points);
    return reg;
}

}  // namespace nettask
