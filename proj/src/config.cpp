#include "nettask/config.hpp"

#include <fstream>
#include <set>

#include "nettask/parallel.hpp"
#include "nettask/report.hpp"

namespace nettask {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config key '") + key + "': " + e.what());
    }
}

fs::path resolve(const fs::path& base, const std::string& p) {
    fs::path path(p);
    return path.is_relative() && !base.empty() ? base / path : path;
}

void require_file(const fs::path& p, bool directory = false) {
    const bool ok = directory ? fs::is_directory(p) : fs::is_regular_file(p);
    if (!ok) throw ConfigError("referenced " + std::string(directory ? "directory" : "file") + " not found: " + p.string());
}

template <typename Fn>
auto wrap(Fn&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const ConfigError&) {
        throw;
    } catch (const InputError& e) {
        throw ConfigError(e.what());
    } catch (const json::exception& e) {
        throw ConfigError(e.what());
    }
}

std::vector<Method> methods_of(const json& j, const char* key, std::vector<Method> fallback) {
    if (!j.contains(key)) return fallback;
    std::vector<Method> out;
    for (const auto& m : j.at(key)) out.push_back(method_from_string(m.get<std::string>()));
    if (out.empty()) throw ConfigError(std::string("config key '") + key + "' must not be empty");
    return out;
}

}  // namespace

SynthConfig synth_config_from_json(const json& j) {
    return wrap([&] {
        SynthConfig c;
        c.num_nodes = get_or<std::size_t>(j, "num_nodes", c.num_nodes);
        c.num_dimensions = get_or<std::size_t>(j, "num_dimensions", c.num_dimensions);
        c.num_communities = get_or<std::size_t>(j, "num_communities", c.num_communities);
        c.homophily = get_or<double>(j, "homophily", c.homophily);
        c.concentration = get_or<double>(j, "concentration", c.concentration);
        c.mean_plays = get_or<double>(j, "mean_plays", c.mean_plays);
        c.activity_sigma = get_or<double>(j, "activity_sigma", c.activity_sigma);
        c.zipf_exponent = get_or<double>(j, "zipf_exponent", c.zipf_exponent);
        c.target_degree = get_or<double>(j, "target_degree", c.target_degree);
        c.min_plays = get_or<Count>(j, "min_plays", c.min_plays);
        c.min_artists = get_or<std::size_t>(j, "min_artists", c.min_artists);
        c.seed = get_or<std::uint64_t>(j, "seed", c.seed);
        if (j.contains("labelsets")) {
            for (const auto& l : j.at("labelsets")) {
                SynthLabelRule r;
                r.name = l.at("name").get<std::string>();
                r.home_community = get_or<std::size_t>(l, "home_community", r.home_community);
                r.locality = get_or<double>(l, "locality", r.locality);
                r.genre_size = get_or<std::size_t>(l, "genre_size", r.genre_size);
                r.home_span = get_or<std::size_t>(l, "home_span", r.home_span);
                if (l.contains("target_prevalence")) r.target_prevalence = l.at("target_prevalence").get<double>();
                c.labelsets.push_back(std::move(r));
            }
        }
        if (j.contains("battery")) {
            const auto& b = j.at("battery");
            std::optional<double> prev;
            if (b.contains("target_prevalence")) prev = b.at("target_prevalence").get<double>();
            auto rules = labelset_battery(get_or<std::size_t>(b, "count", 10), c.num_communities,
                                          get_or<double>(b, "locality_min", 0.0), get_or<double>(b, "locality_max", 1.0),
                                          prev, get_or<std::size_t>(b, "genre_size", 60),
                                          get_or<std::size_t>(b, "home_span", 1));
            c.labelsets.insert(c.labelsets.end(), rules.begin(), rules.end());
        }
        c.validate();
        return c;
    });
}

SynthConfig load_synth_config(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config " + path.string());
    try {
        return synth_config_from_json(json::parse(in));
    } catch (const json::parse_error& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

json to_json(const SynthConfig& c) {
    json j{{"num_nodes", c.num_nodes},         {"num_dimensions", c.num_dimensions},
           {"num_communities", c.num_communities}, {"homophily", c.homophily},
           {"concentration", c.concentration}, {"mean_plays", c.mean_plays},
           {"activity_sigma", c.activity_sigma}, {"zipf_exponent", c.zipf_exponent},
           {"target_degree", c.target_degree}, {"min_plays", c.min_plays},
           {"min_artists", c.min_artists},     {"seed", c.seed}};
    json ls = json::array();
    for (const auto& r : c.labelsets) {
        json l{{"name", r.name},         {"home_community", r.home_community}, {"home_span", r.home_span},
               {"locality", r.locality}, {"genre_size", r.genre_size}};
        if (r.target_prevalence) l["target_prevalence"] = *r.target_prevalence;
        ls.push_back(std::move(l));
    }
    j["labelsets"] = std::move(ls);
    return j;
}

RunConfig run_config_from_json(const json& j, const fs::path& base_dir) {
    return wrap([&] {
        if (!j.is_object()) throw ConfigError("run config must be a JSON object");
        const int version = get_or<int>(j, "schema_version", kSchemaVersion);
        if (version != kSchemaVersion) throw ConfigError("unsupported schema_version " + std::to_string(version));
        if (!j.contains("seed")) throw ConfigError("run config requires a 'seed'");

        RunConfig c;
        c.source = j;
        c.seed = j.at("seed").get<std::uint64_t>();

        if (!j.contains("input")) throw ConfigError("run config requires an 'input' section");
        const auto& in = j.at("input");
        if (in.contains("synth")) {
            auto sj = in.at("synth");
            if (!sj.contains("seed")) sj["seed"] = c.seed;
            c.synth = synth_config_from_json(sj);
        } else if (in.contains("graph_dir")) {
            const auto dir = resolve(base_dir, in.at("graph_dir").get<std::string>());
            require_file(dir, true);
            c.graph = GraphPaths::in_dir(dir);
        } else {
            c.graph = GraphPaths{resolve(base_dir, in.at("edges").get<std::string>()),
                                 resolve(base_dir, in.at("attributes").get<std::string>()),
                                 resolve(base_dir, in.at("labels").get<std::string>())};
        }
        if (c.graph) {
            require_file(c.graph->edges);
            require_file(c.graph->attributes);
            require_file(c.graph->labels, true);
        }

        if (j.contains("models")) {
            for (const auto& m : j.at("models")) {
                ModelEntry e;
                const auto kind = m.at("kind").get<std::string>();
                if (kind == "observed") {
                    e.kind = ModelEntry::Kind::observed;
                } else if (kind == "knn") {
                    e.kind = ModelEntry::Kind::knn;
                } else if (kind == "threshold") {
                    e.kind = ModelEntry::Kind::threshold;
                } else if (kind == "file") {
                    e.kind = ModelEntry::Kind::file;
                    e.edges = resolve(base_dir, m.at("edges").get<std::string>());
                    require_file(e.edges);
                } else {
                    throw ConfigError("unknown model kind '" + kind + "'");
                }
                e.name = get_or<std::string>(m, "name", kind);
                e.similarity = similarity_from_string(get_or<std::string>(m, "similarity", "intersection"));
                e.density_factor = get_or<double>(m, "density_factor", 1.0);
                if (m.contains("lambda")) e.lambda = m.at("lambda").get<std::size_t>();
                if (!(e.density_factor > 0.0)) throw ConfigError("model '" + e.name + "': density_factor must be positive");
                c.models.push_back(std::move(e));
            }
        } else {
            auto entry = [](ModelEntry::Kind k, const char* name) {
                ModelEntry e;
                e.kind = k;
                e.name = name;
                return e;
            };
            c.models = {entry(ModelEntry::Kind::observed, "Social"), entry(ModelEntry::Kind::knn, "KNN"),
                        entry(ModelEntry::Kind::threshold, "TH")};
        }
        if (c.models.empty()) throw ConfigError("run config needs at least one model");
        std::set<std::string> names;
        for (const auto& m : c.models)
            if (!names.insert(m.name).second) throw ConfigError("duplicate model name '" + m.name + "'");

        c.methods = methods_of(j, "methods", {Method::RF, Method::LR, Method::NB, Method::CS, Method::NL});
        for (Method m : c.methods)
            if (!is_local(m)) throw ConfigError("'methods' lists local methods only; GA and GL are always computed");

        if (j.contains("params")) {
            const auto& p = j.at("params");
            if (p.contains("rf")) {
                const auto& rf = p.at("rf");
                c.params.rf.trees = get_or<int>(rf, "trees", c.params.rf.trees);
                c.params.rf.max_depth = get_or<int>(rf, "max_depth", c.params.rf.max_depth);
                c.params.rf.min_rows = get_or<std::size_t>(rf, "min_rows", c.params.rf.min_rows);
                if (c.params.rf.trees < 1 || c.params.rf.max_depth < 1) throw ConfigError("rf: trees and max_depth must be >= 1");
            }
            if (p.contains("lr")) {
                c.params.lr.ridge = get_or<double>(p.at("lr"), "ridge", c.params.lr.ridge);
                c.params.lr.threshold = get_or<double>(p.at("lr"), "threshold", c.params.lr.threshold);
                if (!(c.params.lr.ridge > 0.0)) throw ConfigError("lr: ridge must be positive");
            }
            if (p.contains("nb")) {
                c.params.nb.alpha = get_or<double>(p.at("nb"), "alpha", c.params.nb.alpha);
                if (!(c.params.nb.alpha > 0.0)) throw ConfigError("nb: alpha must be positive");
            }
            if (p.contains("cs"))
                c.params.cs.similarity = similarity_from_string(get_or<std::string>(p.at("cs"), "similarity", "cosine"));
        }

        if (j.contains("labelsets")) {
            const auto& ls = j.at("labelsets");
            if (ls.is_string()) {
                if (ls.get<std::string>() != "all") throw ConfigError("'labelsets' must be \"all\" or a list of names");
            } else {
                c.labelsets = ls.get<std::vector<std::string>>();
                if (c.labelsets.empty()) throw ConfigError("'labelsets' selection is empty");
            }
        }
        c.knn_budget = knn_budget_from_string(get_or<std::string>(j, "knn_budget", "arcs"));

        if (j.contains("density_sweep")) {
            const auto& d = j.at("density_sweep");
            if (d.contains("models")) {
                c.density_models.clear();
                for (const auto& m : d.at("models")) c.density_models.push_back(model_kind_from_string(m.get<std::string>()));
            }
            c.density_methods = methods_of(d, "methods", c.density_methods);
            c.density_factors = get_or<std::vector<double>>(d, "factors", c.density_factors);
            if (c.density_factors.empty()) throw ConfigError("density_sweep.factors must not be empty");
            for (double f : c.density_factors)
                if (!(f > 0.0)) throw ConfigError("density factors must be positive");
        }
        if (j.contains("bfs_sweep")) {
            const auto& b = j.at("bfs_sweep");
            c.bfs_models = get_or<std::vector<std::string>>(b, "models", c.bfs_models);
            c.bfs_methods = methods_of(b, "methods", c.bfs_methods);
            c.bfs_sizes = get_or<std::vector<std::size_t>>(b, "sizes", c.bfs_sizes);
            if (c.bfs_sizes.empty()) throw ConfigError("bfs_sweep.sizes must not be empty");
            for (auto s : c.bfs_sizes)
                if (s < 1) throw ConfigError("bfs sizes must be at least 1");
        }
        if (j.contains("bias")) c.bias_edges = get_or<std::string>(j.at("bias"), "edges", c.bias_edges);
        if (j.contains("bias_lift")) {
            c.bias_lift_model = get_or<std::string>(j.at("bias_lift"), "model", c.bias_lift_model);
            c.bias_lift_method = method_from_string(get_or<std::string>(j.at("bias_lift"), "method", "RF"));
            c.bias_lift_edges = get_or<std::string>(j.at("bias_lift"), "bias_edges", "");
        }
        if (c.bias_lift_edges.empty()) c.bias_lift_edges = c.bias_lift_model;
        auto known = [&](const std::string& n) { return names.count(n) > 0; };
        for (const auto& m : c.bfs_models)
            if (!known(m)) throw ConfigError("bfs_sweep model '" + m + "' is not among 'models'");
        if (!known(c.bias_edges)) throw ConfigError("bias edges '" + c.bias_edges + "' is not among 'models'");
        if (!known(c.bias_lift_edges)) throw ConfigError("bias_lift bias_edges '" + c.bias_lift_edges + "' is not among 'models'");
        if (!known(c.bias_lift_model)) throw ConfigError("bias_lift model '" + c.bias_lift_model + "' is not among 'models'");

        if (j.contains("output_dir")) c.output_dir = resolve(base_dir, j.at("output_dir").get<std::string>());
        c.workers = get_or<unsigned>(j, "workers", default_workers());
        if (c.workers < 1) c.workers = 1;
        return c;
    });
}

RunConfig load_run_config(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config " + path.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
    return run_config_from_json(j, path.parent_path());
}

std::string RunConfig::config_hash() const {
    json canonical = source;
    canonical.erase("workers");
    canonical.erase("output_dir");
    canonical["seed"] = seed;
    return content_hash(canonical.dump());
}

}  // namespace nettask
