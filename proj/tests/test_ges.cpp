#include <doctest.h>

#include <map>
#include <random>
#include <set>
#include <sstream>

#include "cges/data.hpp"
#include "cges/errors.hpp"
#include "cges/ges.hpp"
#include "oracles/oracles.hpp"
#include "support.hpp"

using namespace cges;

namespace {

using Pattern = std::pair<std::set<std::pair<int, int>>, std::set<std::pair<int, int>>>;

Pattern key(const Pdag& p) {
    const auto e = oracle::pattern_of(p);
    return {e.arcs, e.edges};
}

std::vector<VariableId> subset_of(const std::vector<VariableId>& items, std::uint32_t mask) {
    std::vector<VariableId> out;
    for (std::size_t i = 0; i < items.size(); ++i)
        if (mask >> i & 1u) out.push_back(items[i]);
    return out;
}

Dataset noisy_copy(std::size_t rows, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution flip(0.1);
    std::vector<int> x(rows), y(rows);
    for (std::size_t i = 0; i < rows; ++i) {
        x[i] = static_cast<int>(rng() & 1u);
        y[i] = flip(rng) ? 1 - x[i] : x[i];
    }
    return test::make_dataset({x, y});
}

void check_trace(const GesResult& r, double start_score) {
    double previous = start_score;
    for (const TraceRecord& t : r.trace) {
        CHECK(t.delta > 0.0);
        CHECK(t.score > previous);
        CHECK(t.score - previous == doctest::Approx(t.delta).epsilon(1e-9));
        previous = t.score;
    }
}

}  // namespace

TEST_SUITE("ges") {

TEST_CASE("empty candidate set and zero budget leave the start unchanged") {
    const Dataset d = forward_sample(test::collider_network(), 2000, 1);
    ScoreCache cache;
    const BdeuScore score(d, {}, cache);
    SearchConfig none;
    none.allowed = PairSet(3);
    CHECK(fes(Pdag(3), score, none).cpdag == Pdag(3));
    CHECK(ges(Pdag(3), score, none).cpdag == Pdag(3));

    SearchConfig zero;
    zero.insert_limit = 0;
    CHECK(fes(Pdag(3), score, zero).applied == 0);
    CHECK(ges(Pdag(3), score, zero).cpdag == Pdag(3));
}

TEST_CASE("forward phase finds a noisy copy") {
    const Dataset d = noisy_copy(5000, 4);
    ScoreCache cache;
    const PhaseResult r = fes(Pdag(2), BdeuScore(d, {}, cache), {});
    CHECK(r.applied == 1);
    CHECK(r.cpdag.has_edge(0, 1));
}

TEST_CASE("backward phase empties a complete graph over independent variables") {
    std::mt19937_64 rng(12);
    std::vector<std::vector<int>> cols(3, std::vector<int>(10000));
    for (auto& c : cols)
        for (auto& v : c) v = static_cast<int>(rng() % 2);
    const Dataset d = test::make_dataset(cols);
    ScoreCache cache;
    const BdeuScore score(d, {}, cache);
    CHECK(bes(Pdag(3), score, {}).cpdag == Pdag(3));
    const Pdag complete = dag_to_cpdag(test::dag_of(3, {{0, 1}, {0, 2}, {1, 2}}));
    const PhaseResult r = bes(complete, score, {});
    CHECK(r.cpdag == Pdag(3));
    CHECK(r.applied == 3);
    CHECK(improving_deletes(r.cpdag, score).empty());
}

TEST_CASE("collider data yields the collider class") {
    const Dataset d = forward_sample(test::collider_network(), 10000, 7);
    ScoreCache cache;
    const BdeuScore score(d, {}, cache);
    SearchConfig cfg;
    cfg.trace = true;
    const GesResult r = ges(Dag(3), score, cfg);
    CHECK(r.cpdag == dag_to_cpdag(test::dag_of(3, {{0, 2}, {1, 2}})));
    CHECK(r.score == score.graph(consistent_extension(r.cpdag)));
    check_trace(r, score.graph(Dag(3)));

    const auto universe = oracle::all_dags(3);
    CHECK(r.score == doctest::Approx(oracle::best_dag(d, universe, EssConfig{}.eta).second).epsilon(1e-12));

    SearchConfig restricted;
    restricted.allowed = PairSet(3);
    restricted.allowed->insert(0, 1);
    const GesResult only = ges(Dag(3), score, restricted);
    CHECK(only.cpdag.adjacents(2).empty());
}

TEST_CASE("insert and delete outcomes match the equivalence-class oracle") {
    const auto universe = oracle::all_dags(4);
    const Dataset d = forward_sample(random_network(4, 3, 3, 2), 300, 5);
    ScoreCache cache;
    const BdeuScore score(d, {}, cache);

    std::map<Pattern, Pdag> classes;
    for (const Dag& g : universe) classes.emplace(key(dag_to_cpdag(g)), dag_to_cpdag(g));
    REQUIRE(classes.size() == 185);

    for (const auto& [k, cpdag] : classes) {
        std::vector<const Dag*> members;
        for (const Dag& g : universe)
            if (key(dag_to_cpdag(g)) == k) members.push_back(&g);
        const double base = score.graph(consistent_extension(cpdag));

        for (VariableId x = 0; x < 4; ++x)
            for (VariableId y = 0; y < 4; ++y) {
                if (x == y) continue;
                std::set<Pattern> expected, got;
                if (!cpdag.adjacent(x, y)) {
                    for (const Dag* g : members) {
                        Dag next = *g;
                        next.add_arc(x, y);
                        if (next.is_acyclic()) expected.insert(key(dag_to_cpdag(next)));
                    }
                    std::vector<VariableId> cand;
                    for (VariableId v : cpdag.neighbors(y))
                        if (!cpdag.adjacent(v, x)) cand.push_back(v);
                    for (std::uint32_t mask = 0; mask < (1u << cand.size()); ++mask) {
                        const auto t = subset_of(cand, mask);
                        if (!insert_valid(cpdag, x, y, t)) continue;
                        const Pdag next = apply_insert(cpdag, {x, y, t, 0.0});
                        got.insert(key(next));
                        REQUIRE(insert_delta(cpdag, score, x, y, t) ==
                                doctest::Approx(score.graph(consistent_extension(next)) - base).epsilon(1e-9));
                    }
                } else if (!cpdag.has_arc(y, x)) {
                    for (const Dag* g : members) {
                        if (!g->has_arc(x, y)) continue;
                        Dag next = *g;
                        next.remove_arc(x, y);
                        expected.insert(key(dag_to_cpdag(next)));
                    }
                    const auto na = neighbors_adjacent(cpdag, y, x);
                    for (std::uint32_t mask = 0; mask < (1u << na.size()); ++mask) {
                        const auto h = subset_of(na, mask);
                        if (!delete_valid(cpdag, x, y, h)) continue;
                        const Pdag next = apply_delete(cpdag, {x, y, h, 0.0});
                        got.insert(key(next));
                        REQUIRE(delete_delta(cpdag, score, x, y, h) ==
                                doctest::Approx(score.graph(consistent_extension(next)) - base).epsilon(1e-9));
                    }
                }
                REQUIRE(got == expected);
            }
    }
}

TEST_CASE("restriction, budget and local optimality on random networks") {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        const auto bn = random_network(9, 3, 3, 50 + seed);
        const Dataset d = forward_sample(bn, 2000, seed);
        ScoreCache cache;
        const BdeuScore score(d, {}, cache);

        std::mt19937_64 rng(seed);
        PairSet allowed(9);
        for (VariableId a = 0; a < 9; ++a)
            for (VariableId b = a + 1; b < 9; ++b)
                if (rng() % 2) allowed.insert(a, b);
        const Dag init = oracle::random_dag(9, 0.15, rng);

        SearchConfig cfg;
        cfg.allowed = allowed;
        cfg.insert_limit = 3;
        cfg.trace = true;
        const GesResult r = ges(init, score, cfg);
        CHECK(r.inserts <= 3);
        for (const VariablePair& e : r.cpdag.skeleton()) CHECK((allowed.contains(e.first, e.second) || init.adjacent(e.first, e.second)));
        for (auto [a, b] : oracle::skeleton(init))
            if (!allowed.contains(a, b)) CHECK(r.cpdag.adjacent(a, b));
        check_trace(r, score.graph(init));
        CHECK(r.score == score.graph(consistent_extension(r.cpdag)));

        SearchConfig full;
        full.trace = true;
        const GesResult free = ges(Dag(9), score, full);
        check_trace(free, score.graph(Dag(9)));
        CHECK(improving_inserts(free.cpdag, score).empty());
        CHECK(improving_deletes(free.cpdag, score).empty());
        CHECK(complete_to_cpdag(free.cpdag) == free.cpdag);
    }
}

TEST_CASE("best operators agree with exhaustive enumeration") {
    const auto bn = random_network(7, 3, 3, 9);
    const Dataset d = forward_sample(bn, 1500, 2);
    ScoreCache cache;
    const BdeuScore score(d, {}, cache);
    SearchConfig cfg;
    cfg.insert_limit = 4;
    const Pdag g = ges(Dag(7), score, cfg).cpdag;
    const auto inserts = improving_inserts(g, score);
    for (VariableId x = 0; x < 7; ++x)
        for (VariableId y = 0; y < 7; ++y) {
            double best = 0.0;
            for (const InsertOp& op : inserts)
                if (op.x == x && op.y == y) best = std::max(best, op.delta);
            const auto op = best_insert(g, score, x, y);
            if (best > 0.0) {
                REQUIRE(op.has_value());
                CHECK(op->delta == best);
                CHECK(insert_valid(g, x, y, op->t));
            }
        }
}

TEST_CASE("subset search refuses dense neighborhoods") {
    std::vector<std::vector<int>> cols(15, std::vector<int>{0, 1, 0, 1});
    const Dataset d = test::make_dataset(cols);
    ScoreCache cache;
    const BdeuScore score(d, {}, cache);
    Pdag star(15);
    for (VariableId v = 1; v <= 13; ++v) star.add_edge(0, v);
    CHECK_THROWS_AS(best_insert(star, score, 14, 0), DegreeCapExceeded);
    CHECK_NOTHROW(best_insert(star, score, 14, 1));
}

TEST_CASE("trace output") {
    std::ostringstream out;
    write_trace(out, {{TraceRecord::Phase::insert, 0, 2, {1}, 1.5, -10.0}, {TraceRecord::Phase::remove, 0, 1, {}, 0.25, -9.75}});
    CHECK(out.str() == "insert 0 2 {1} 1.5 -10\ndelete 0 1 {} 0.25 -9.75\n");
}

}  // TEST_SUITE
