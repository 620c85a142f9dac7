#include "cges/ring.hpp"

#include <chrono>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <stdexcept>

#include <tbb/parallel_for.h>

#include "cges/fusion.hpp"

namespace cges {

std::size_t edge_limit(std::size_t n, std::size_t k) {
    if (n < 1 || k < 1) throw std::invalid_argument("edge_limit needs n >= 1 and k >= 1");
    const double raw = 10.0 / static_cast<double>(k) * std::sqrt(static_cast<double>(n));
    // Guard against the product landing a hair above an exact integer.
    const double nearest = std::round(raw);
    return static_cast<std::size_t>(std::abs(raw - nearest) < 1e-9 ? nearest : std::ceil(raw));
}

RingState initial_state(const BdeuScore& score, EdgePartition partition) {
    const std::size_t n = score.num_variables();
    RingState state;
    state.graphs.assign(partition.k(), Pdag(n));
    state.scores.assign(partition.k(), 0.0);
    state.best = Pdag(n);
    state.best_score = score.graph(Dag(n));
    state.partition = std::move(partition);
    return state;
}

std::vector<RoundRecord> run_round(RingState& state, const BdeuScore& score, const RingConfig& cfg) {
    const std::size_t k = state.graphs.size();
    const std::size_t n = score.num_variables();
    if (k == 0) throw std::invalid_argument("run_round: ring has no workers");
    const std::size_t round = state.round + 1;

    std::vector<Pdag> next(k);
    std::vector<double> next_scores(k);
    std::vector<RoundRecord> records(k);
    tbb::parallel_for(std::size_t{0}, k, [&](std::size_t i) {
        const auto start = std::chrono::steady_clock::now();
        Dag init(n);
        if (round > 1) {
            const std::size_t pred = (i + k - 1) % k;
            init = fuse(consistent_extension(state.graphs[i]), consistent_extension(state.graphs[pred]));
        }
        SearchConfig search;
        search.allowed = state.partition.subset_pairs(i);
        if (cfg.limit_enabled) search.insert_limit = edge_limit(n, k);
        search.trace = cfg.trace_operators;
        GesResult result = ges(init, score, search);
        next[i] = std::move(result.cpdag);
        next_scores[i] = result.score;
        records[i] = {round, i, result.score, result.inserts,
                      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(),
                      std::move(result.trace)};
    });
    state.graphs = std::move(next);
    state.scores = std::move(next_scores);
    state.round = round;
    return records;
}

bool check_convergence(RingState& state, const RingConfig& cfg) {
    std::optional<std::size_t> winner;
    for (std::size_t i = 0; i < state.scores.size(); ++i)
        if (state.scores[i] > state.best_score && (!winner || state.scores[i] > state.scores[*winner])) winner = i;
    if (!winner) return false;
    state.best = state.graphs[*winner];
    state.best_score = state.scores[*winner];
    if (state.round >= cfg.max_rounds) {
        state.hit_round_cap = true;
        return false;
    }
    return true;
}

CgesResult run_cges(const Dataset& data, const RingConfig& cfg, ScoreCache& cache) {
    if (cfg.k < 1) throw std::invalid_argument("cges needs k >= 1");
    if (cfg.max_rounds < 1) throw std::invalid_argument("cges needs max_rounds >= 1");
    if (data.num_variables() < 2) throw std::invalid_argument("cges needs at least two variables");
    const BdeuScore score(data, cfg.ess, cache);
    RingState state = initial_state(score, partition_edges(score, cfg.k));

    CgesResult result;
    do {
        auto records = run_round(state, score, cfg);
        result.trace.insert(result.trace.end(), records.begin(), records.end());
    } while (check_convergence(state, cfg));

    result.rounds = state.round;
    result.learning_score = state.best_score;
    result.hit_round_cap = state.hit_round_cap;
    SearchConfig unrestricted;
    unrestricted.trace = cfg.trace_operators;
    result.fine_tune = ges(state.best, score, unrestricted);
    result.cpdag = result.fine_tune.cpdag;
    result.score = result.fine_tune.score;
    return result;
}

CgesResult run_cges(const Dataset& data, const RingConfig& cfg) {
    ScoreCache cache;
    return run_cges(data, cfg, cache);
}

void write_round_trace(std::ostream& out, const std::vector<RoundRecord>& trace) {
    const auto precision = out.precision();
    for (const RoundRecord& r : trace)
        out << r.round << ' ' << r.worker << ' ' << std::setprecision(std::numeric_limits<double>::max_digits10) << r.score
            << std::setprecision(precision) << ' ' << r.edges_added << ' ' << r.seconds << '\n';
}

}  // namespace cges
