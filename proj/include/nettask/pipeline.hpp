#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "nettask/config.hpp"
#include "nettask/evaluation.hpp"
#include "nettask/graph.hpp"

namespace nettask {

// A failure inside one step of a command; `step` names it.
class StepError : public Error {
  public:
    StepError(std::string step, const std::string& what)
        : Error("step '" + step + "' failed: " + what), step_(std::move(step)) {}
    const std::string& step() const { return step_; }

  private:
    std::string step_;
};

// The loaded graph plus every named network model of a run.
struct Workspace {
    AttributedGraph graph;
    std::vector<std::string> model_order;
    std::map<std::string, EdgeSet> models;
    std::map<std::string, std::optional<std::size_t>> knn_k;
    std::vector<std::string> labelsets;

    const EdgeSet& model(const std::string& name) const;
    std::vector<NamedEdges> named_models() const;
};

Workspace prepare_workspace(const RunConfig& cfg);

// In-memory output files in write order, plus the manifest.
struct ReportBundle {
    std::string command;
    std::vector<std::pair<std::string, std::string>> files;
    std::optional<std::string> failed_step;
    std::string failure;

    void add(std::string name, std::string contents) { files.emplace_back(std::move(name), std::move(contents)); }
    nlohmann::json manifest(const RunConfig& cfg) const;
};

// Writes every file and manifest.json into `dir`.
void write_bundle(const std::filesystem::path& dir, const ReportBundle& bundle, const RunConfig& cfg);

EvalContext eval_context(const RunConfig& cfg);

ReportBundle cmd_evaluate(const RunConfig& cfg);
ReportBundle cmd_sweep_density(const RunConfig& cfg);
ReportBundle cmd_sweep_bfs(const RunConfig& cfg);
ReportBundle cmd_bias_lift(const RunConfig& cfg);

// Runs everything; on a step failure the completed files are still returned
// with `failed_step` set, and the caller decides how to surface it.
ReportBundle cmd_reproduce(const RunConfig& cfg);

std::string graph_summary_csv(const Workspace& ws);

}  // namespace nettask
