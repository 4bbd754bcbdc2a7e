#include "nettask/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

namespace nettask {

namespace fs = std::filesystem;

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path& path, const std::string& contents) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write " + path.string());
    out << contents;
    if (!out) throw InputError("write failed for " + path.string());
}

namespace {

// Splits a text file into lines, tracking 1-based line numbers, and
// separates `# key=value` headers from data rows.
class TableReader {
  public:
    TableReader(const fs::path& path, std::string_view magic) : where_(path.string()), text_(read_file(path)) {
        std::string_view rest = text_;
        std::size_t line_no = 0;
        bool saw_magic = false;
        while (!rest.empty()) {
            auto nl = rest.find('\n');
            std::string_view line = rest.substr(0, nl);
            rest = nl == std::string_view::npos ? std::string_view{} : rest.substr(nl + 1);
            ++line_no;
            if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
            if (line.empty()) continue;
            if (line.front() == '#') {
                std::string_view body = line.substr(1);
                while (!body.empty() && body.front() == ' ') body.remove_prefix(1);
                if (!saw_magic) {
                    if (body != magic) throw ParseError(where_, line_no, "expected header '# " + std::string(magic) + "'");
                    saw_magic = true;
                    continue;
                }
                auto eq = body.find('=');
                if (eq == std::string_view::npos) continue;  // free-form comment
                headers_.emplace_back(std::string(body.substr(0, eq)), std::string(body.substr(eq + 1)));
                continue;
            }
            if (!saw_magic) throw ParseError(where_, line_no, "missing '# " + std::string(magic) + "' header");
            rows_.push_back({line_no, line});
        }
        if (!saw_magic) throw ParseError(where_, 1, "empty file or missing header");
    }

    struct Row {
        std::size_t line;
        std::string_view text;
    };

    const std::vector<Row>& rows() const { return rows_; }
    const std::vector<std::pair<std::string, std::string>>& headers() const { return headers_; }
    const std::string& where() const { return where_; }

    const std::string* header(std::string_view key) const {
        for (const auto& [k, v] : headers_)
            if (k == key) return &v;
        return nullptr;
    }

    std::uint64_t required_uint(std::string_view key) const {
        const std::string* v = header(key);
        if (!v) throw ParseError(where_, 1, "missing header '" + std::string(key) + "'");
        return to_uint(*v, 1, key);
    }

    std::uint64_t to_uint(std::string_view field, std::size_t line, std::string_view what) const {
        std::uint64_t v = 0;
        auto [p, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
        if (ec != std::errc{} || p != field.data() + field.size() || field.empty())
            throw ParseError(where_, line, "invalid " + std::string(what) + " '" + std::string(field) + "'");
        return v;
    }

    std::vector<std::string_view> fields(const Row& row, std::size_t expected) const {
        std::vector<std::string_view> out;
        std::string_view rest = row.text;
        for (;;) {
            auto tab = rest.find('\t');
            out.push_back(rest.substr(0, tab));
            if (tab == std::string_view::npos) break;
            rest = rest.substr(tab + 1);
        }
        if (out.size() != expected)
            throw ParseError(where_, row.line,
                             "expected " + std::to_string(expected) + " tab-separated fields, got " +
                                 std::to_string(out.size()));
        return out;
    }

  private:
    std::string where_;
    std::string text_;
    std::vector<Row> rows_;
    std::vector<std::pair<std::string, std::string>> headers_;
};

bool parse_bool(const std::string& v, const std::string& where) {
    if (v == "1" || v == "true") return true;
    if (v == "0" || v == "false") return false;
    throw ParseError(where, 1, "invalid boolean '" + v + "'");
}

}  // namespace

EdgeFile parse_edges(const fs::path& path) {
    TableReader t(path, "nettask-edges v1");
    const auto n = t.required_uint("nodes");
    EdgeFile f;
    Provenance prov = Provenance::observed;
    for (const auto& [k, v] : t.headers()) {
        if (k == "nodes") continue;
        if (k == "provenance") {
            try {
                prov = provenance_from_string(v);
            } catch (const InputError& e) {
                throw ParseError(t.where(), 1, e.what());
            }
        } else if (k == "directed") {
            f.directed = parse_bool(v, t.where());
        } else {
            f.meta.emplace_back(k, v);
        }
    }

    std::vector<Arc> arcs;
    std::map<Arc, std::size_t> seen;
    for (const auto& row : t.rows()) {
        auto fl = t.fields(row, 2);
        const auto u = t.to_uint(fl[0], row.line, "node id");
        const auto v = t.to_uint(fl[1], row.line, "node id");
        if (u >= n || v >= n)
            throw ParseError(t.where(), row.line, "node id out of range (nodes=" + std::to_string(n) + ")");
        if (u == v) throw ParseError(t.where(), row.line, "self-loop on node " + std::to_string(u));
        Arc key = f.directed ? Arc{static_cast<NodeId>(u), static_cast<NodeId>(v)}
                             : Arc{static_cast<NodeId>(std::min(u, v)), static_cast<NodeId>(std::max(u, v))};
        if (auto [it, fresh] = seen.emplace(key, row.line); !fresh)
            throw ParseError(t.where(), row.line, "duplicate edge (first on line " + std::to_string(it->second) + ")");
        arcs.push_back(key);
    }
    f.edges = f.directed ? EdgeSet::from_arcs(n, std::move(arcs), prov) : EdgeSet::from_pairs(n, arcs, prov);
    return f;
}

std::string format_edges(const EdgeFile& file) {
    const auto& e = file.edges;
    if (!file.directed && !e.is_symmetric()) throw InputError("cannot write an asymmetric edge set as undirected");
    std::string out = "# nettask-edges v1\n";
    out += "# provenance=" + std::string(to_string(e.provenance())) + "\n";
    out += std::string("# directed=") + (file.directed ? "1" : "0") + "\n";
    out += "# nodes=" + std::to_string(e.num_nodes()) + "\n";
    for (const auto& [k, v] : file.meta) out += "# " + k + "=" + v + "\n";
    for (NodeId i = 0; i < e.num_nodes(); ++i) {
        for (NodeId j : e.out(i)) {
            if (!file.directed && j < i) continue;
            out += std::to_string(i);
            out += '\t';
            out += std::to_string(j);
            out += '\n';
        }
    }
    return out;
}

void write_edges(const fs::path& path, const EdgeFile& file) { write_file(path, format_edges(file)); }

AttributeFile parse_attributes(const fs::path& path) {
    TableReader t(path, "nettask-attributes v1");
    AttributeFile f;
    f.num_nodes = t.required_uint("nodes");
    f.num_dims = t.required_uint("dims");
    std::vector<std::vector<std::pair<DimId, Count>>> entries(f.num_nodes);
    std::vector<std::map<DimId, std::size_t>> seen(f.num_nodes);
    for (const auto& row : t.rows()) {
        auto fl = t.fields(row, 3);
        const auto u = t.to_uint(fl[0], row.line, "node id");
        const auto d = t.to_uint(fl[1], row.line, "dimension");
        const auto c = t.to_uint(fl[2], row.line, "count");
        if (u >= f.num_nodes) throw ParseError(t.where(), row.line, "node id out of range");
        if (d >= f.num_dims) throw ParseError(t.where(), row.line, "dimension out of range");
        if (c == 0) throw ParseError(t.where(), row.line, "zero counts must not be stored");
        if (auto [it, fresh] = seen[u].emplace(static_cast<DimId>(d), row.line); !fresh)
            throw ParseError(t.where(), row.line, "duplicate (node, dimension) entry");
        entries[u].emplace_back(static_cast<DimId>(d), c);
    }
    f.rows.reserve(f.num_nodes);
    for (auto& e : entries) f.rows.push_back(SparseCountVector::from_entries(std::move(e)));
    return f;
}

std::string format_attributes(const AttributeFile& file) {
    std::string out = "# nettask-attributes v1\n";
    out += "# nodes=" + std::to_string(file.num_nodes) + "\n";
    out += "# dims=" + std::to_string(file.num_dims) + "\n";
    for (std::size_t u = 0; u < file.rows.size(); ++u) {
        auto idx = file.rows[u].indices();
        auto val = file.rows[u].values();
        for (std::size_t k = 0; k < idx.size(); ++k) {
            out += std::to_string(u);
            out += '\t';
            out += std::to_string(idx[k]);
            out += '\t';
            out += std::to_string(val[k]);
            out += '\n';
        }
    }
    return out;
}

void write_attributes(const fs::path& path, const AttributeFile& file) { write_file(path, format_attributes(file)); }

LabelSet parse_labelset(const fs::path& path, std::size_t num_nodes) {
    TableReader t(path, "nettask-labels v1");
    const std::string* name = t.header("name");
    if (!name || name->empty()) throw ParseError(t.where(), 1, "missing header 'name'");
    std::vector<std::uint8_t> labels(num_nodes, 0);
    std::vector<std::size_t> line_of(num_nodes, 0);
    for (const auto& row : t.rows()) {
        auto fl = t.fields(row, 2);
        const auto u = t.to_uint(fl[0], row.line, "node id");
        const auto l = t.to_uint(fl[1], row.line, "label");
        if (u >= num_nodes) throw ParseError(t.where(), row.line, "node id out of range");
        if (l > 1) throw ParseError(t.where(), row.line, "label must be 0 or 1");
        if (line_of[u]) throw ParseError(t.where(), row.line, "duplicate node (first on line " + std::to_string(line_of[u]) + ")");
        line_of[u] = row.line;
        labels[u] = static_cast<std::uint8_t>(l);
    }
    for (std::size_t u = 0; u < num_nodes; ++u)
        if (!line_of[u]) throw ParseError(t.where(), 1, "missing label for node " + std::to_string(u));
    return LabelSet(*name, std::move(labels));
}

std::string format_labelset(const LabelSet& labels) {
    std::string out = "# nettask-labels v1\n# name=" + labels.name() + "\n";
    for (std::size_t u = 0; u < labels.size(); ++u) {
        out += std::to_string(u);
        out += '\t';
        out += labels.positive(static_cast<NodeId>(u)) ? '1' : '0';
        out += '\n';
    }
    return out;
}

LabelSets parse_labelsets(const fs::path& dir, std::size_t num_nodes) {
    if (!fs::is_directory(dir)) throw InputError("labels directory not found: " + dir.string());
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".tsv") files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    LabelSets out;
    for (const auto& p : files) {
        auto ls = parse_labelset(p, num_nodes);
        auto name = ls.name();
        if (!out.emplace(name, std::move(ls)).second) throw ParseError(p.string(), 1, "duplicate labelset '" + name + "'");
    }
    return out;
}

void write_labelsets(const fs::path& dir, const LabelSets& labelsets) {
    fs::create_directories(dir);
    for (const auto& [name, ls] : labelsets) {
        if (name.empty() || name.find_first_of("/\\\n\t") != std::string::npos || name == "." || name == "..")
            throw InputError("labelset name '" + name + "' is not usable as a file name");
        write_file(dir / (name + ".tsv"), format_labelset(ls));
    }
}

GraphPaths GraphPaths::in_dir(const fs::path& dir) {
    return {dir / "edges.tsv", dir / "attributes.tsv", dir / "labels"};
}

AttributedGraph parse_graph(const GraphPaths& paths) {
    auto edges = parse_edges(paths.edges);
    auto attrs = parse_attributes(paths.attributes);
    if (attrs.num_nodes != edges.edges.num_nodes())
        throw ParseError(paths.attributes.string(), 1, "node count differs from edge file");
    AttributedGraph g;
    g.num_nodes = attrs.num_nodes;
    g.num_dims = attrs.num_dims;
    g.edges = std::move(edges.edges);
    g.attributes = std::move(attrs.rows);
    g.labelsets = parse_labelsets(paths.labels, g.num_nodes);
    g.validate();
    return g;
}

void write_graph(const GraphPaths& paths, const AttributedGraph& g) {
    g.validate();
    write_edges(paths.edges, EdgeFile{g.edges, !g.edges.is_symmetric(), {}});
    write_attributes(paths.attributes, AttributeFile{g.num_nodes, g.num_dims, g.attributes});
    write_labelsets(paths.labels, g.labelsets);
}

}  // namespace nettask
