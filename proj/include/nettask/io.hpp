#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "nettask/graph.hpp"

namespace nettask {

// On-disk formats. All files are UTF-8 text with LF endings, tab-separated,
// with `# key=value` header lines.
//
//   edges:      # nettask-edges v1 / provenance / directed / nodes, then `u<TAB>v`
//               (undirected files list each pair once with u < v)
//   attributes: # nettask-attributes v1 / nodes / dims, then `u<TAB>dim<TAB>count`
//   labels:     one file per labelset, # nettask-labels v1 / name, then `u<TAB>{0,1}`

struct EdgeFile {
    EdgeSet edges;
    bool directed = false;
    // Extra header keys (similarity, lambda, k, ...) in file order.
    std::vector<std::pair<std::string, std::string>> meta;
};

EdgeFile parse_edges(const std::filesystem::path& path);
std::string format_edges(const EdgeFile& file);
void write_edges(const std::filesystem::path& path, const EdgeFile& file);

struct AttributeFile {
    std::size_t num_nodes = 0;
    std::size_t num_dims = 0;
    std::vector<SparseCountVector> rows;
};

AttributeFile parse_attributes(const std::filesystem::path& path);
std::string format_attributes(const AttributeFile& file);
void write_attributes(const std::filesystem::path& path, const AttributeFile& file);

LabelSet parse_labelset(const std::filesystem::path& path, std::size_t num_nodes);
std::string format_labelset(const LabelSet& labels);

// Every *.tsv file in `dir`, keyed by the name in its header.
LabelSets parse_labelsets(const std::filesystem::path& dir, std::size_t num_nodes);
void write_labelsets(const std::filesystem::path& dir, const LabelSets& labelsets);

struct GraphPaths {
    std::filesystem::path edges;
    std::filesystem::path attributes;
    std::filesystem::path labels;

    // <dir>/edges.tsv, <dir>/attributes.tsv, <dir>/labels/
    static GraphPaths in_dir(const std::filesystem::path& dir);
};

AttributedGraph parse_graph(const GraphPaths& paths);
void write_graph(const GraphPaths& paths, const AttributedGraph& g);

// Whole-file helpers; throw InputError on I/O failure.
std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& contents);

}  // namespace nettask
