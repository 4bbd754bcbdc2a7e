#include <doctest.h>

#include "nettask/config.hpp"
#include "nettask/pipeline.hpp"
#include "tempdir.hpp"

using namespace nettask;
using nlohmann::json;

namespace {

json small_run() {
    return json::parse(R"({
        "schema_version": 1,
        "seed": 3,
        "input": {"synth": {"num_nodes": 120, "num_dimensions": 150, "num_communities": 3,
                            "mean_plays": 250, "target_degree": 6,
                            "battery": {"count": 3, "target_prevalence": 0.25}}},
        "methods": ["NB", "NL"],
        "density_sweep": {"methods": ["NL"], "factors": [0.5, 1.0]},
        "bfs_sweep": {"methods": ["NL"], "sizes": [1, 5]},
        "bias_lift": {"method": "NB"},
        "workers": 2
    })");
}

}  // namespace

TEST_CASE("run config validation") {
    auto j = small_run();
    const auto cfg = run_config_from_json(j);
    CHECK(cfg.seed == 3);
    REQUIRE(cfg.synth.has_value());
    CHECK(cfg.synth->seed == 3);
    CHECK(cfg.synth->labelsets.size() == 3);
    CHECK(cfg.models.size() == 3);
    CHECK(cfg.methods == std::vector<Method>{Method::NB, Method::NL});
    CHECK(cfg.workers == 2);

    auto bad = j;
    bad.erase("seed");
    CHECK_THROWS_AS(run_config_from_json(bad), ConfigError);
    bad = j;
    bad["labelsets"] = json::array();
    CHECK_THROWS_AS(run_config_from_json(bad), ConfigError);
    bad = j;
    bad["labelsets"] = "some";
    CHECK_THROWS_AS(run_config_from_json(bad), ConfigError);
    bad = j;
    bad["bias"] = {{"edges", "Nope"}};
    CHECK_THROWS_AS(run_config_from_json(bad), ConfigError);
    bad = j;
    bad["models"] = json::parse(R"([{"kind": "knn", "name": "A"}, {"kind": "threshold", "name": "A"}])");
    CHECK_THROWS_AS(run_config_from_json(bad), ConfigError);
    bad = j;
    bad["schema_version"] = 2;
    CHECK_THROWS_AS(run_config_from_json(bad), ConfigError);
    bad = j;
    bad["methods"] = json::array({"GA"});
    CHECK_THROWS_AS(run_config_from_json(bad), ConfigError);
    bad = j;
    bad["input"] = {{"graph_dir", "/definitely/not/here"}};
    CHECK_THROWS_AS(run_config_from_json(bad), ConfigError);
}

TEST_CASE("config hash ignores the run environment") {
    auto a = small_run();
    auto b = a;
    b["workers"] = 7;
    b["output_dir"] = "elsewhere";
    CHECK(run_config_from_json(a).config_hash() == run_config_from_json(b).config_hash());
    b["seed"] = 4;
    CHECK(run_config_from_json(a).config_hash() != run_config_from_json(b).config_hash());
}

TEST_CASE("unknown labelset selection fails at workspace time") {
    auto j = small_run();
    j["labelsets"] = json::array({"genre00", "missing"});
    CHECK_THROWS_AS(prepare_workspace(run_config_from_json(j)), ConfigError);
}

TEST_CASE("small reproduce run writes a complete bundle") {
    TempDir dir("pipeline");
    auto cfg = run_config_from_json(small_run());
    cfg.output_dir = dir.path();
    const auto bundle = cmd_reproduce(cfg);
    CHECK_FALSE(bundle.failed_step.has_value());
    std::vector<std::string> names;
    for (const auto& [name, _] : bundle.files) names.push_back(name);
    for (const char* want : {"graph_summary.csv", "bias_Social.csv", "bias_KNN.csv", "bias_TH.csv", "delta_bias.csv",
                             "lift_cells.csv", "lift_summary.csv", "sweep_density.csv", "sweep_bfs.csv",
                             "bias_lift.csv", "bias_lift_fit.csv"})
        CHECK(std::find(names.begin(), names.end(), want) != names.end());
    write_bundle(cfg.output_dir, bundle, cfg);
    const auto manifest = json::parse(read_file(dir / "manifest.json"));
    CHECK(manifest["status"] == "complete");
    CHECK(manifest["schema_version"] == kSchemaVersion);
    CHECK(manifest["config_hash"] == cfg.config_hash());
    CHECK(manifest["files"].size() == bundle.files.size());
    for (const auto& [name, contents] : bundle.files) CHECK(read_file(dir / name) == contents);
}

TEST_CASE("failed step leaves a partial bundle") {
    auto cfg = run_config_from_json(small_run());
    cfg.bfs_sizes = {0};
    const auto bundle = cmd_reproduce(cfg);
    REQUIRE(bundle.failed_step.has_value());
    CHECK(*bundle.failed_step == "sweep-bfs");
    CHECK(bundle.files.size() >= 7);
    CHECK(bundle.manifest(cfg)["status"] == "partial");
}
