#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cges/data.hpp"
#include "cges/graph.hpp"
#include "cges/scoring.hpp"

namespace cges {

/// One row of the results table. Mean rows have no seed; failed runs have no metrics.
struct EvalReport {
    std::string network;
    std::string algorithm;
    std::size_t k = 0;
    bool limit_enabled = false;
    std::optional<std::uint64_t> seed;
    std::optional<double> bdeu_normalized;
    std::optional<double> smhd;
    double seconds = 0.0;

    bool operator==(const EvalReport&) const = default;
};

struct RunMeta {
    std::string network;
    std::string algorithm;
    std::size_t k = 0;
    bool limit_enabled = false;
    std::uint64_t seed = 0;
    double seconds = 0.0;
};

/// Edges in exactly one of the two moral graphs.
std::size_t smhd(const Dag& g1, const Dag& g2);

/// Re-indexes `g` (over `from` variables) onto `to` variables by name. Throws
/// VariableMismatch unless both hold the same set of names.
Dag align_by_name(const Dag& g, const std::vector<Variable>& from, const std::vector<Variable>& to);

/// Scores the consistent extension of `learned` (indexed like `data`) on `data` and
/// measures SMHD against the reference structure.
EvalReport evaluate(const Pdag& learned, const BayesianNetwork& reference, const Dataset& data, const RunMeta& meta,
                    EssConfig ess = {});

inline constexpr std::string_view kResultsHeader = "network,algorithm,k,limit,seed,bdeu_normalized,smhd,seconds";

/// Sorts by (network, algorithm, k, limit, seed) with mean rows after their runs.
void sort_reports(std::vector<EvalReport>& reports);
std::string format_report(const EvalReport& report);
EvalReport parse_report(std::string_view line);
std::string write_results_csv(const std::vector<EvalReport>& reports);
/// Throws ParseError on a bad header or row.
std::vector<EvalReport> read_results_csv(std::string_view text);

}  // namespace cges
