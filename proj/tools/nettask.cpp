// nettask: command-line front end.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "nettask/config.hpp"
#include "nettask/io.hpp"
#include "nettask/label_analytics.hpp"
#include "nettask/listeners.hpp"
#include "nettask/parallel.hpp"
#include "nettask/pipeline.hpp"
#include "nettask/report.hpp"
#include "nettask/synth.hpp"

namespace fs = std::filesystem;
using namespace nettask;

namespace {

enum Exit { kOk = 0, kUsage = 1, kConfig = 2, kParse = 3, kRuntime = 4 };

struct Globals {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> workers;
    std::string out;
};

unsigned workers_of(const Globals& g) { return g.workers ? std::max(1u, *g.workers) : default_workers(); }

RunConfig load_with_overrides(const Globals& g) {
    if (g.config.empty()) throw ConfigError("--config is required");
    std::ifstream in(g.config);
    if (!in) throw ConfigError("cannot open config " + g.config);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(g.config + ": " + e.what());
    }
    if (g.seed) j["seed"] = *g.seed;
    RunConfig cfg = run_config_from_json(j, fs::path(g.config).parent_path());
    if (g.workers) cfg.workers = std::max(1u, *g.workers);
    if (!g.out.empty()) cfg.output_dir = g.out;
    return cfg;
}

void emit(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
    } else {
        write_file(path, text);
    }
}

int run_synth(const Globals& g) {
    if (g.config.empty()) throw ConfigError("synth needs --config");
    if (g.out.empty()) throw ConfigError("synth needs --out");
    SynthConfig cfg = load_synth_config(g.config);
    if (g.seed) cfg.seed = *g.seed;
    const auto r = generate_synthetic(cfg, workers_of(g));
    const fs::path dir = g.out;
    write_graph(GraphPaths::in_dir(dir), r.graph);

    std::string plays = "# nettask-plays v1\n";
    for (const auto& p : r.plays.rows)
        plays += std::to_string(p.user) + "\t" + std::to_string(p.artist) + "\t" + std::to_string(p.plays) + "\n";
    write_file(dir / "plays.tsv", plays);
    std::string genres;
    for (const auto& [name, artists] : r.genres)
        for (DimId a : artists) genres += name + "\t" + std::to_string(a) + "\n";
    write_file(dir / "genres.tsv", genres);
    std::string users;
    for (std::size_t u = 0; u < r.graph.num_nodes; ++u) users += std::to_string(u) + "\n";
    write_file(dir / "users.txt", users);

    CsvTable truth({"node", "community"});
    for (std::size_t u = 0; u < r.community.size(); ++u) truth.add({std::to_string(u), std::to_string(r.community[u])});
    write_file(dir / "communities.csv", truth.str());

    nlohmann::json meta{{"schema_version", kSchemaVersion},
                        {"config", to_json(cfg)},
                        {"p_within", r.p_within},
                        {"p_across", r.p_across},
                        {"within_edges", r.within_edges},
                        {"across_edges", r.across_edges},
                        {"within_pairs", r.within_pairs},
                        {"across_pairs", r.across_pairs}};
    write_file(dir / "synth.json", meta.dump(2) + "\n");
    std::cerr << "synth: " << r.graph.num_nodes << " nodes, " << r.graph.edges.num_pairs() << " friendships, "
              << r.graph.labelsets.size() << " labelsets -> " << dir.string() << "\n";
    return kOk;
}

struct DeriveArgs {
    std::string plays, genres, users;
    Count min_plays = kDefaultMinPlays;
    std::size_t min_artists = kDefaultMinArtists;
};

int run_derive(const Globals& g, const DeriveArgs& a) {
    if (g.out.empty()) throw ConfigError("derive-labels needs --out");
    std::optional<std::vector<std::string>> order;
    if (!a.users.empty()) {
        std::istringstream in(read_file(a.users));
        order.emplace();
        for (std::string line; std::getline(in, line);)
            if (!line.empty()) order->push_back(line);
    }
    const auto log = parse_play_log(a.plays, order ? &*order : nullptr);
    std::vector<std::string> warnings;
    const auto genres = parse_genre_map(a.genres, log.artists, &warnings);
    const auto labels =
        derive_genre_labels(derive_artist_listeners(log.log, a.min_plays), genres, a.min_artists, &warnings);
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
    write_labelsets(g.out, labels);
    std::cerr << "derive-labels: " << labels.size() << " labelsets over " << log.log.num_users << " users\n";
    return kOk;
}

struct InferArgs {
    std::string attributes, observed, model = "knn", similarity = "intersection";
    double factor = 1.0;
    std::optional<std::size_t> lambda;
    std::string budget = "arcs";
};

int run_infer(const Globals& g, const InferArgs& a) {
    const auto attrs = parse_attributes(a.attributes);
    ModelSpec spec;
    spec.model = model_kind_from_string(a.model);
    spec.similarity = similarity_from_string(a.similarity);
    if (a.lambda) {
        spec.lambda = *a.lambda;
    } else {
        if (a.observed.empty()) throw ConfigError("infer needs --edges (for density matching) or --lambda");
        const auto observed = parse_edges(a.observed);
        if (observed.edges.num_nodes() != attrs.num_nodes)
            throw InputError("observed edges and attributes disagree on node count");
        spec.lambda = match_density(observed.edges, a.factor, spec.model, knn_budget_from_string(a.budget));
        spec.density_factor = a.factor;
    }
    EdgeFile file{build_model(attrs.rows, spec, workers_of(g)), spec.model == ModelKind::knn, {}};
    file.meta.emplace_back("similarity", std::string(to_string(spec.similarity)));
    file.meta.emplace_back("lambda", std::to_string(spec.lambda));
    if (spec.model == ModelKind::knn) file.meta.emplace_back("k", std::to_string(knn_k(spec.lambda, attrs.num_nodes)));
    if (spec.density_factor) file.meta.emplace_back("density_factor", format_number(*spec.density_factor));
    emit(g.out, format_edges(file));
    return kOk;
}

struct BiasArgs {
    std::string edges, labels, compare;
};

int run_bias(const Globals& g, const BiasArgs& a) {
    const auto base = parse_edges(a.edges);
    const auto labels = parse_labelsets(a.labels, base.edges.num_nodes());
    const unsigned w = workers_of(g);
    const auto rows = bias_scatter_table(base.edges, labels, w);
    if (a.compare.empty()) {
        emit(g.out, bias_csv(rows));
        return kOk;
    }
    const auto other = parse_edges(a.compare);
    if (other.edges.num_nodes() != base.edges.num_nodes())
        throw InputError("compared edge files disagree on node count");
    const auto other_rows = bias_scatter_table(other.edges, labels, w);
    emit(g.out, bias_csv(rows, &other_rows));
    return kOk;
}

int run_pipeline(const Globals& g, ReportBundle (*cmd)(const RunConfig&)) {
    const RunConfig cfg = load_with_overrides(g);
    const ReportBundle bundle = cmd(cfg);
    write_bundle(cfg.output_dir, bundle, cfg);
    if (bundle.failed_step) {
        std::cerr << "error: " << bundle.failure << " (partial outputs in " << cfg.output_dir.string() << ")\n";
        return kRuntime;
    }
    std::cerr << bundle.command << ": wrote " << bundle.files.size() << " files to " << cfg.output_dir.string()
              << "\n";
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Task-focused network inference and evaluation"};
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    app.add_option("--config", g.config, "Config file (JSON)");
    app.add_option("--seed", g.seed, "Override the run seed");
    app.add_option("--workers", g.workers, "Worker threads (default: NETTASK_WORKERS or all cores)");
    app.add_option("--out", g.out, "Output directory or file");

    auto* synth = app.add_subcommand("synth", "Generate a synthetic attributed graph");

    DeriveArgs derive;
    auto* derive_cmd = app.add_subcommand("derive-labels", "Derive genre labelsets from a play log");
    derive_cmd->add_option("--plays", derive.plays, "user<TAB>artist<TAB>plays file")->required();
    derive_cmd->add_option("--genres", derive.genres, "genre<TAB>artist file")->required();
    derive_cmd->add_option("--users", derive.users, "User order, one token per line");
    derive_cmd->add_option("--min-plays", derive.min_plays, "Plays to count as an artist listener");
    derive_cmd->add_option("--min-artists", derive.min_artists, "Genre artists to count as a genre listener");

    InferArgs infer;
    auto* infer_cmd = app.add_subcommand("infer", "Build a KNN or threshold network from attributes");
    infer_cmd->add_option("--attributes", infer.attributes, "Attribute file")->required();
    infer_cmd->add_option("--edges", infer.observed, "Observed edge file to match density against");
    infer_cmd->add_option("--model", infer.model, "knn | threshold")->check(CLI::IsMember({"knn", "threshold", "th"}));
    infer_cmd->add_option("--similarity", infer.similarity, "intersection | cosine")
        ->check(CLI::IsMember({"intersection", "cosine"}));
    infer_cmd->add_option("--density-factor", infer.factor, "Multiple of the observed density");
    infer_cmd->add_option("--lambda", infer.lambda, "Explicit edge budget");
    infer_cmd->add_option("--knn-budget", infer.budget, "arcs | pairs")->check(CLI::IsMember({"arcs", "pairs"}));

    BiasArgs bias;
    auto* bias_cmd = app.add_subcommand("bias", "Network-label bias per labelset");
    bias_cmd->add_option("--edges", bias.edges, "Edge file")->required();
    bias_cmd->add_option("--labels", bias.labels, "Labelset directory")->required();
    bias_cmd->add_option("--compare", bias.compare, "Second edge file; adds delta_bias");

    auto* evaluate = app.add_subcommand("evaluate", "Lift heat map over models and methods");
    auto* sweep_density = app.add_subcommand("sweep-density", "Lift as inferred-model density varies");
    auto* sweep_bfs = app.add_subcommand("sweep-bfs", "Lift as the BFS neighborhood grows");
    auto* bias_lift = app.add_subcommand("bias-lift", "Bias and prevalence against lift, with fits");
    auto* reproduce = app.add_subcommand("reproduce", "Every table of the evaluation");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfig;
    }

    try {
        if (synth->parsed()) return run_synth(g);
        if (derive_cmd->parsed()) return run_derive(g, derive);
        if (infer_cmd->parsed()) return run_infer(g, infer);
        if (bias_cmd->parsed()) return run_bias(g, bias);
        if (evaluate->parsed()) return run_pipeline(g, cmd_evaluate);
        if (sweep_density->parsed()) return run_pipeline(g, cmd_sweep_density);
        if (sweep_bfs->parsed()) return run_pipeline(g, cmd_sweep_bfs);
        if (bias_lift->parsed()) return run_pipeline(g, cmd_bias_lift);
        if (reproduce->parsed()) return run_pipeline(g, cmd_reproduce);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfig;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kParse;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kRuntime;
    }
    return kUsage;
}
