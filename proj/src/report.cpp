#include "nettask/report.hpp"

#include <cmath>
#include <cstdio>
#include <map>

#include "nettask/rng.hpp"

namespace nettask {

std::string format_number(std::optional<double> v) {
    if (!v || !std::isfinite(*v)) return "null";
    double x = *v;
    if (x == 0.0) x = 0.0;  // no "-0.000000"
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", x);
    std::string s = buf;
    if (s == "-0.000000") s = "0.000000";
    return s;
}

namespace {

std::string quote(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string join(const std::vector<std::string>& fields) {
    std::string line;
    for (std::size_t k = 0; k < fields.size(); ++k) {
        if (k) line += ',';
        line += quote(fields[k]);
    }
    return line + "\n";
}

std::string count_str(std::size_t v) { return std::to_string(v); }

}  // namespace

CsvTable::CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

CsvTable& CsvTable::add(std::vector<std::string> row) {
    if (row.size() != columns_.size()) throw InputError("csv row width does not match header");
    body_ += join(row);
    return *this;
}

std::string CsvTable::str() const { return join(columns_) + body_; }

std::string bias_csv(const std::vector<BiasReport>& rows, const std::vector<BiasReport>* compare) {
    std::vector<std::string> cols{"labelset", "prevalence", "bias", "n_evaluated"};
    if (compare) cols.push_back("delta_bias");
    CsvTable t(cols);
    std::map<std::string, const BiasReport*> other;
    if (compare)
        for (const auto& r : *compare) other[r.labelset] = &r;
    for (const auto& r : rows) {
        std::vector<std::string> row{r.labelset, format_number(r.prevalence), format_number(r.bias), count_str(r.n_evaluated)};
        if (compare) {
            std::optional<double> d;
            auto it = other.find(r.labelset);
            if (it != other.end() && it->second->bias && r.bias) d = *it->second->bias - *r.bias;
            row.push_back(format_number(d));
        }
        t.add(std::move(row));
    }
    return t.str();
}

std::string delta_bias_csv(const std::vector<DeltaBiasSummary>& summaries) {
    CsvTable t({"source", "target", "mean", "stddev", "n_labelsets"});
    for (const auto& s : summaries)
        t.add({s.source, s.target, format_number(s.mean), format_number(s.stddev), count_str(s.deltas.size())});
    return t.str();
}

std::string lift_cells_csv(const LiftTable& table) {
    CsvTable t({"labelset", "row_mean_lift_ga", "model", "method", "n_tested", "n_covered", "n_correct", "precision",
                "recall_coverage", "lift_ga", "lift_gl"});
    for (const auto& name : table.row_order) {
        const auto& row = table.cells.at(name);
        for (std::size_t c = 0; c < row.size(); ++c) {
            const auto& cell = row[c];
            t.add({name, format_number(table.row_mean_ga.at(name)), table.columns[c].model, table.columns[c].method,
                   count_str(cell.result.n_tested), count_str(cell.result.n_covered), count_str(cell.result.n_correct),
                   format_number(cell.result.precision), format_number(cell.result.recall_coverage),
                   format_number(cell.lift_ga), format_number(cell.lift_gl)});
        }
    }
    return t.str();
}

std::string lift_summary_csv(const LiftTable& table) {
    CsvTable t({"model", "method", "mean_lift_ga", "mean_lift_gl", "n_cells", "n_null"});
    for (const auto& c : table.columns)
        t.add({c.model, c.method, format_number(c.mean_lift_ga), format_number(c.mean_lift_gl), count_str(c.n_cells),
               count_str(c.n_null)});
    return t.str();
}

std::string sweep_csv(const SweepSeries& sweep) {
    const bool density = sweep.kind == SweepSeries::Kind::density;
    CsvTable t({"model", "method", density ? "factor" : "size", "k", "mean_lift_ga", "mean_coverage"});
    for (const auto& s : sweep.series) {
        for (std::size_t p = 0; p < sweep.x.size(); ++p) {
            std::string x = density ? format_number(sweep.x[p]) : count_str(static_cast<std::size_t>(sweep.x[p]));
            std::string k = s.k[p] ? count_str(*s.k[p]) : "null";
            t.add({s.model, s.method, x, k, format_number(s.mean_lift_ga[p]), format_number(s.mean_coverage[p])});
        }
    }
    return t.str();
}

std::string bias_lift_csv(const BiasLiftRegression& reg) {
    CsvTable t({"labelset", "prevalence", "bias", "lift"});
    for (const auto& p : reg.points) t.add({p.labelset, format_number(p.prevalence), format_number(p.bias), format_number(p.lift)});
    return t.str();
}

std::string bias_lift_fit_csv(const BiasLiftRegression& reg) {
    CsvTable t({"relation", "n", "slope", "intercept", "pearson_r"});
    auto add = [&](const char* name, const LinearFit& f) {
        t.add({name, count_str(reg.n_used), format_number(f.slope), format_number(f.intercept), format_number(f.pearson_r)});
    };
    add("bias_vs_lift", reg.bias_vs_lift);
    add("prevalence_vs_lift", reg.prevalence_vs_lift);
    return t.str();
}

std::string content_hash(const std::string& bytes) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(bytes)));
    return buf;
}

}  // namespace nettask
