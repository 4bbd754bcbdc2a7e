#include "nettask/pipeline.hpp"

#include <set>

#include "nettask/io.hpp"
#include "nettask/label_analytics.hpp"
#include "nettask/report.hpp"
#include "nettask/synth.hpp"

namespace nettask {

namespace {

template <typename Fn>
auto step(const char* name, Fn&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const StepError&) {
        throw;
    } catch (const std::exception& e) {
        throw StepError(name, e.what());
    }
}

LabelSets selected(const Workspace& ws) {
    LabelSets out;
    for (const auto& name : ws.labelsets) out.emplace(name, ws.graph.labelsets.at(name));
    return out;
}

std::vector<std::string> with_positives(const Workspace& ws) {
    std::vector<std::string> out;
    for (const auto& name : ws.labelsets)
        if (ws.graph.labelsets.at(name).positive_count() > 0) out.push_back(name);
    if (out.empty()) throw InputError("no selected labelset has a positive node");
    return out;
}

void add_lift_tables(ReportBundle& out, const Workspace& ws, const RunConfig& cfg, const EvalContext& ctx,
                     const std::vector<std::string>& labelsets, const BaselineCache& cache) {
    const auto table = step("lift-heatmap", [&] {
        return lift_heatmap(ws.graph, ws.named_models(), cfg.methods, labelsets, ctx, &cache);
    });
    out.add("lift_cells.csv", lift_cells_csv(table));
    out.add("lift_summary.csv", lift_summary_csv(table));
}

void add_density_sweep(ReportBundle& out, const Workspace& ws, const RunConfig& cfg, const EvalContext& ctx,
                       const std::vector<std::string>& labelsets, const BaselineCache& cache) {
    Similarity sim = Similarity::intersection;
    for (const auto& m : cfg.models)
        if (m.kind == ModelEntry::Kind::knn || m.kind == ModelEntry::Kind::threshold) {
            sim = m.similarity;
            break;
        }
    const auto sweep = step("sweep-density", [&] {
        return density_sweep(ws.graph, cfg.density_models, cfg.density_methods, labelsets, cfg.density_factors, ctx,
                             DensitySweepOptions{sim, cfg.knn_budget}, &cache);
    });
    out.add("sweep_density.csv", sweep_csv(sweep));
}

void add_bfs_sweep(ReportBundle& out, const Workspace& ws, const RunConfig& cfg, const EvalContext& ctx,
                   const std::vector<std::string>& labelsets, const BaselineCache& cache) {
    const auto sweep = step("sweep-bfs", [&] {
        SweepSeries all;
        for (const auto& name : cfg.bfs_models) {
            auto s = bfs_sweep(ws.graph, {name, &ws.model(name)}, cfg.bfs_methods, labelsets, cfg.bfs_sizes, ctx,
                               &cache);
            all.kind = s.kind;
            all.x = s.x;
            all.series.insert(all.series.end(), s.series.begin(), s.series.end());
        }
        return all;
    });
    out.add("sweep_bfs.csv", sweep_csv(sweep));
}

void add_bias_lift(ReportBundle& out, const Workspace& ws, const RunConfig& cfg, const EvalContext& ctx,
                   const std::vector<std::string>& labelsets, const BaselineCache& cache) {
    const auto reg = step("bias-lift", [&] {
        const auto biases = bias_scatter_table(ws.model(cfg.bias_lift_edges), selected(ws), ctx.workers);
        std::map<std::string, std::optional<double>> bias_of;
        for (const auto& r : biases) bias_of[r.labelset] = r.bias;
        const auto table = lift_heatmap(ws.graph, {{cfg.bias_lift_model, &ws.model(cfg.bias_lift_model)}},
                                        {cfg.bias_lift_method}, labelsets, ctx, &cache);
        std::vector<BiasLiftPoint> points;
        for (const auto& name : labelsets)
            points.push_back({name, bias_of[name], ws.graph.labelsets.at(name).prevalence(),
                              table.cells.at(name).front().lift_ga});
        return bias_lift_regression(std::move(points));
    });
    out.add("bias_lift.csv", bias_lift_csv(reg));
    out.add("bias_lift_fit.csv", bias_lift_fit_csv(reg));
}

BaselineCache baselines(const Workspace& ws, const EvalContext& ctx, const std::vector<std::string>& labelsets) {
    return step("baselines", [&] { return compute_baselines(ws.graph, labelsets, ctx); });
}

}  // namespace

const EdgeSet& Workspace::model(const std::string& name) const {
    auto it = models.find(name);
    if (it == models.end()) throw InputError("unknown model '" + name + "'");
    return it->second;
}

std::vector<NamedEdges> Workspace::named_models() const {
    std::vector<NamedEdges> out;
    for (const auto& name : model_order) out.push_back({name, &models.at(name)});
    return out;
}

Workspace prepare_workspace(const RunConfig& cfg) {
    Workspace ws;
    if (cfg.synth) {
        ws.graph = step("synth", [&] { return generate_synthetic(*cfg.synth, cfg.workers).graph; });
    } else if (cfg.graph) {
        ws.graph = parse_graph(*cfg.graph);
    } else {
        throw ConfigError("run config has no input");
    }

    if (cfg.labelsets.empty()) {
        for (const auto& [name, _] : ws.graph.labelsets) ws.labelsets.push_back(name);
    } else {
        std::set<std::string> seen;
        for (const auto& name : cfg.labelsets) {
            if (!ws.graph.labelsets.count(name)) throw ConfigError("selected labelset '" + name + "' not found");
            if (seen.insert(name).second) ws.labelsets.push_back(name);
        }
    }
    if (ws.labelsets.empty()) throw ConfigError("the graph has no labelsets");

    for (const auto& m : cfg.models) {
        EdgeSet edges;
        std::optional<std::size_t> k;
        switch (m.kind) {
            case ModelEntry::Kind::observed:
                edges = ws.graph.edges;
                break;
            case ModelEntry::Kind::file:
                edges = parse_edges(m.edges).edges;
                if (edges.num_nodes() != ws.graph.num_nodes)
                    throw InputError("edge file " + m.edges.string() + " has a different node count");
                break;
            case ModelEntry::Kind::knn:
            case ModelEntry::Kind::threshold: {
                const ModelKind kind = m.kind == ModelEntry::Kind::knn ? ModelKind::knn : ModelKind::threshold;
                edges = step(("infer " + m.name).c_str(), [&] {
                    ModelSpec spec{kind, m.similarity, 0, std::nullopt};
                    if (m.lambda) {
                        spec.lambda = *m.lambda;
                    } else {
                        spec.lambda = match_density(ws.graph.edges, m.density_factor, kind, cfg.knn_budget);
                        spec.density_factor = m.density_factor;
                    }
                    if (kind == ModelKind::knn) k = knn_k(spec.lambda, ws.graph.num_nodes);
                    return build_model(ws.graph.attributes, spec, cfg.workers);
                });
                break;
            }
        }
        ws.model_order.push_back(m.name);
        ws.models.emplace(m.name, std::move(edges));
        ws.knn_k[m.name] = k;
    }
    return ws;
}

EvalContext eval_context(const RunConfig& cfg) {
    EvalContext ctx;
    ctx.seed = cfg.seed;
    ctx.workers = cfg.workers;
    ctx.params = cfg.params;
    return ctx;
}

nlohmann::json ReportBundle::manifest(const RunConfig& cfg) const {
    nlohmann::json files_json = nlohmann::json::object();
    for (const auto& [name, contents] : files) files_json[name] = content_hash(contents);
    nlohmann::json j{{"schema_version", kSchemaVersion},
                     {"command", command},
                     {"config_hash", cfg.config_hash()},
                     {"seed", cfg.seed},
                     {"status", failed_step ? "partial" : "complete"},
                     {"files", files_json}};
    if (failed_step) j["failed_step"] = *failed_step;
    return j;
}

void write_bundle(const std::filesystem::path& dir, const ReportBundle& bundle, const RunConfig& cfg) {
    for (const auto& [name, contents] : bundle.files) write_file(dir / name, contents);
    write_file(dir / "manifest.json", bundle.manifest(cfg).dump(2) + "\n");
}

std::string graph_summary_csv(const Workspace& ws) {
    CsvTable t({"model", "provenance", "nodes", "arcs", "symmetric", "median_degree", "powerlaw_alpha", "k"});
    for (const auto& name : ws.model_order) {
        const auto& e = ws.models.at(name);
        std::optional<double> alpha;
        std::size_t median = 0;
        if (e.num_arcs() > 0) {
            const auto d = degree_stats(e);
            alpha = d.powerlaw_alpha;
            median = d.median_degree;
        }
        const auto k = ws.knn_k.at(name);
        t.add({name, std::string(to_string(e.provenance())), std::to_string(e.num_nodes()),
               std::to_string(e.num_arcs()), e.is_symmetric() ? "1" : "0", std::to_string(median),
               format_number(alpha), k ? std::to_string(*k) : "null"});
    }
    return t.str();
}

ReportBundle cmd_evaluate(const RunConfig& cfg) {
    ReportBundle out;
    out.command = "evaluate";
    const auto ws = prepare_workspace(cfg);
    const auto ctx = eval_context(cfg);
    const auto names = step("labelsets", [&] { return with_positives(ws); });
    const auto cache = baselines(ws, ctx, names);
    add_lift_tables(out, ws, cfg, ctx, names, cache);
    return out;
}

ReportBundle cmd_sweep_density(const RunConfig& cfg) {
    ReportBundle out;
    out.command = "sweep-density";
    const auto ws = prepare_workspace(cfg);
    const auto ctx = eval_context(cfg);
    const auto names = step("labelsets", [&] { return with_positives(ws); });
    const auto cache = baselines(ws, ctx, names);
    add_density_sweep(out, ws, cfg, ctx, names, cache);
    return out;
}

ReportBundle cmd_sweep_bfs(const RunConfig& cfg) {
    ReportBundle out;
    out.command = "sweep-bfs";
    const auto ws = prepare_workspace(cfg);
    const auto ctx = eval_context(cfg);
    const auto names = step("labelsets", [&] { return with_positives(ws); });
    const auto cache = baselines(ws, ctx, names);
    add_bfs_sweep(out, ws, cfg, ctx, names, cache);
    return out;
}

ReportBundle cmd_bias_lift(const RunConfig& cfg) {
    ReportBundle out;
    out.command = "bias-lift";
    const auto ws = prepare_workspace(cfg);
    const auto ctx = eval_context(cfg);
    const auto names = step("labelsets", [&] { return with_positives(ws); });
    const auto cache = baselines(ws, ctx, names);
    add_bias_lift(out, ws, cfg, ctx, names, cache);
    return out;
}

ReportBundle cmd_reproduce(const RunConfig& cfg) {
    ReportBundle out;
    out.command = "reproduce";
    try {
        const auto ws = prepare_workspace(cfg);
        const auto ctx = eval_context(cfg);
        out.add("graph_summary.csv", graph_summary_csv(ws));

        step("bias", [&] {
            const auto chosen = selected(ws);
            std::map<std::string, std::vector<BiasReport>> tables;
            for (const auto& name : ws.model_order) {
                tables[name] = bias_scatter_table(ws.model(name), chosen, ctx.workers);
                out.add("bias_" + name + ".csv", bias_csv(tables[name]));
            }
            std::vector<DeltaBiasSummary> deltas;
            for (const auto& name : ws.model_order) {
                if (name == cfg.bias_edges) continue;
                try {
                    deltas.push_back(delta_bias(tables.at(cfg.bias_edges), tables.at(name), cfg.bias_edges, name));
                } catch (const InputError&) {
                    // no shared defined biases: leave the pair out
                }
            }
            out.add("delta_bias.csv", delta_bias_csv(deltas));
        });

        const auto names = step("labelsets", [&] { return with_positives(ws); });
        const auto cache = baselines(ws, ctx, names);
        add_lift_tables(out, ws, cfg, ctx, names, cache);
        add_density_sweep(out, ws, cfg, ctx, names, cache);
        add_bfs_sweep(out, ws, cfg, ctx, names, cache);
        add_bias_lift(out, ws, cfg, ctx, names, cache);
    } catch (const StepError& e) {
        out.failed_step = e.step();
        out.failure = e.what();
    }
    return out;
}

}  // namespace nettask
