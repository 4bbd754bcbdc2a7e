#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace nettask {

using NodeId = std::uint32_t;
using DimId = std::uint32_t;
using Count = std::uint64_t;

// Error taxonomy. The CLI maps each family onto a distinct exit code.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InputError : Error {
    using Error::Error;
};

struct ConfigError : Error {
    using Error::Error;
};

struct ParseError : Error {
    ParseError(const std::string& where, std::size_t line, const std::string& what)
        : Error(where + ":" + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const { return line_; }

  private:
    std::size_t line_;
};

struct DensityTooLowError : Error {
    using Error::Error;
};

struct UndefinedBiasError : Error {
    using Error::Error;
};

// One node's attribute row: dimension id -> positive count.
// Indices strictly increasing, zeros never stored.
class SparseCountVector {
  public:
    SparseCountVector() = default;
    SparseCountVector(std::vector<DimId> indices, std::vector<Count> values);

    // Builds from unsorted (dim, count) entries; duplicate dims are summed
    // and zero counts dropped.
    static SparseCountVector from_entries(std::vector<std::pair<DimId, Count>> entries);

    std::span<const DimId> indices() const { return indices_; }
    std::span<const Count> values() const { return values_; }
    std::size_t nnz() const { return indices_.size(); }
    bool empty() const { return indices_.empty(); }

    // Count at dimension d (0 when absent).
    Count at(DimId d) const;
    Count total() const;

    bool operator==(const SparseCountVector&) const = default;

  private:
    std::vector<DimId> indices_;
    std::vector<Count> values_;
};

}  // namespace nettask
