#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "cges/ges.hpp"
#include "cges/partition.hpp"
#include "cges/scoring.hpp"

namespace cges {

struct RingConfig {
    std::size_t k = 4;
    bool limit_enabled = true;
    EssConfig ess;
    std::size_t max_rounds = 50;
    /// Keep the operator trace of every worker search and of the fine tuning.
    bool trace_operators = false;
    /// Carried into reports; the ring itself makes no random choices.
    std::uint64_t seed = 0;
};

struct RoundRecord {
    std::size_t round = 0;
    std::size_t worker = 0;
    double score = 0.0;
    std::size_t edges_added = 0;
    double seconds = 0.0;
    std::vector<TraceRecord> operators;
};

struct RingState {
    std::size_t round = 0;
    std::vector<Pdag> graphs;
    std::vector<double> scores;
    Pdag best;
    double best_score = 0.0;
    EdgePartition partition;
    bool hit_round_cap = false;
};

/// ceil((10 / k) * sqrt(n)).
std::size_t edge_limit(std::size_t n, std::size_t k);

/// k empty worker graphs; the incumbent is the empty graph with its score.
RingState initial_state(const BdeuScore& score, EdgePartition partition);

/// One synchronous round. Worker i starts from the fusion of its own graph with worker
/// i-1's (worker 0 reads worker k-1), both taken from the previous round; the first round
/// starts from empty graphs. All workers finish before any result is published.
std::vector<RoundRecord> run_round(RingState& state, const BdeuScore& score, const RingConfig& cfg);

/// Adopts the best worker that strictly beats the incumbent (lowest index on ties) and
/// returns true, or returns false when none does or the round cap is reached.
bool check_convergence(RingState& state, const RingConfig& cfg);

struct CgesResult {
    Pdag cpdag;
    double score = 0.0;
    std::size_t rounds = 0;
    /// Incumbent score when the learning stage stopped.
    double learning_score = 0.0;
    bool hit_round_cap = false;
    std::vector<RoundRecord> trace;
    GesResult fine_tune;
};

/// Partition, rounds until convergence, then unrestricted and unlimited GES from the incumbent.
CgesResult run_cges(const Dataset& data, const RingConfig& cfg, ScoreCache& cache);
CgesResult run_cges(const Dataset& data, const RingConfig& cfg);

/// One line per record: `round worker score edges_added seconds`. Operators are not written.
void write_round_trace(std::ostream& out, const std::vector<RoundRecord>& trace);

}  // namespace cges
