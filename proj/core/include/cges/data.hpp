#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cges/graph.hpp"

namespace cges {

using StateIndex = std::uint16_t;

struct Variable {
    std::string name;
    std::vector<std::string> states;

    std::size_t cardinality() const { return states.size(); }
    bool operator==(const Variable&) const = default;
};

/// Complete categorical data, stored column-major.
class Dataset {
public:
    Dataset() = default;
    /// Throws ValidationError if a column has the wrong length or an out-of-range state.
    Dataset(std::vector<Variable> variables, std::vector<std::vector<StateIndex>> columns);

    std::size_t num_variables() const { return variables_.size(); }
    std::size_t num_rows() const { return rows_; }

    const std::vector<Variable>& variables() const { return variables_; }
    const Variable& variable(VariableId v) const { return variables_[v]; }
    std::size_t cardinality(VariableId v) const { return variables_[v].cardinality(); }
    std::span<const StateIndex> column(VariableId v) const { return columns_[v]; }
    StateIndex at(std::size_t row, VariableId v) const { return columns_[v][row]; }

    /// Index of the variable with this name, if any.
    std::optional<VariableId> find(std::string_view name) const;

    bool operator==(const Dataset&) const = default;

private:
    std::vector<Variable> variables_;
    std::vector<std::vector<StateIndex>> columns_;
    std::size_t rows_ = 0;
};

/// P(X | parents). Rows are parent configurations with the last parent varying fastest;
/// each row holds one probability per child state.
struct Cpt {
    std::vector<VariableId> parents;
    std::vector<double> probabilities;

    std::size_t num_states = 0;
    std::size_t num_rows() const { return num_states == 0 ? 0 : probabilities.size() / num_states; }
    std::span<const double> row(std::size_t config) const {
        return std::span<const double>(probabilities).subspan(config * num_states, num_states);
    }
};

struct BayesianNetwork {
    std::string name;
    std::vector<Variable> variables;
    Dag dag;
    std::vector<Cpt> cpts;

    std::size_t size() const { return variables.size(); }
    std::optional<VariableId> find(std::string_view name) const;
    /// Row index of the parent configuration `states` (given in cpts[v].parents order).
    std::size_t config_index(VariableId v, std::span<const StateIndex> parent_states) const;
    /// Structural and normalization checks; throws ValidationError.
    void validate(double tolerance = 1e-9) const;
};

/// Messages produced while loading, e.g. renormalized CPT rows.
struct Diagnostics {
    std::vector<std::string> warnings;
};

/// Parses the BIF interchange format (network / variable / probability blocks).
/// Rows off by at most 1e-6 from summing to one are renormalized with a warning.
BayesianNetwork parse_bif(std::string_view text, Diagnostics* diagnostics = nullptr);
BayesianNetwork read_bif_file(const std::string& path, Diagnostics* diagnostics = nullptr);
std::string write_bif(const BayesianNetwork& bn);

/// Ancestral sampling in topological order, driven by std::mt19937_64 seeded with `seed`.
/// Uniform variates are built from the top 53 bits of each draw, so output is identical on
/// every conforming platform.
Dataset forward_sample(const BayesianNetwork& bn, std::size_t rows, std::uint64_t seed);

/// CSV with a header row. States of each column are the sorted set of observed values.
/// Throws RaggedRow, EmptyColumn, MissingValueFound or CardinalityError.
Dataset load_csv(std::string_view text);
/// CSV whose columns are matched by name to `schema`; cells must be states of that variable.
Dataset load_csv(std::string_view text, std::span<const Variable> schema);
Dataset read_csv_file(const std::string& path);
Dataset read_csv_file(const std::string& path, std::span<const Variable> schema);
std::string write_csv(const Dataset& data);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view text);

/// Random network over n variables for tests and benchmarks: each node draws up to
/// `max_parents` parents among lower-indexed nodes, cardinalities in [2, max_states],
/// CPT rows drawn from a flat Dirichlet. Deterministic in `seed`.
BayesianNetwork random_network(std::size_t n, std::size_t max_parents, std::size_t max_states, std::uint64_t seed);

}  // namespace cges
