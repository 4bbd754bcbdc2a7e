#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nettask/evaluation.hpp"
#include "nettask/label_analytics.hpp"

namespace nettask {

// Fixed six-decimal rendering; null for missing values.
std::string format_number(std::optional<double> v);

// Minimal CSV builder. Every table starts with a header row.
class CsvTable {
  public:
    explicit CsvTable(std::vector<std::string> columns);
    CsvTable& add(std::vector<std::string> row);
    std::string str() const;

  private:
    std::vector<std::string> columns_;
    std::string body_;
};

// labelset,prevalence,bias,n_evaluated[,delta_bias]
std::string bias_csv(const std::vector<BiasReport>& rows, const std::vector<BiasReport>* compare = nullptr);

// source,target,mean,stddev,n_labelsets
std::string delta_bias_csv(const std::vector<DeltaBiasSummary>& summaries);

// Long-format heat map in row-sort order.
std::string lift_cells_csv(const LiftTable& table);

// Column means (one row per model-method pair).
std::string lift_summary_csv(const LiftTable& table);

std::string sweep_csv(const SweepSeries& sweep);

std::string bias_lift_csv(const BiasLiftRegression& reg);
std::string bias_lift_fit_csv(const BiasLiftRegression& reg);

// 64-bit FNV-1a as 16 hex digits.
std::string content_hash(const std::string& bytes);

}  // namespace nettask
