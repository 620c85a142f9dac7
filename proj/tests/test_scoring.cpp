#include <doctest.h>

#include <cmath>
#include <random>
#include <thread>

#include "cges/data.hpp"
#include "cges/errors.hpp"
#include "cges/scoring.hpp"
#include "oracles/oracles.hpp"
#include "support.hpp"

using namespace cges;

namespace {

Dataset random_binary(std::size_t columns, std::size_t rows, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<std::vector<int>> cols(columns, std::vector<int>(rows));
    for (auto& c : cols)
        for (auto& v : c) v = static_cast<int>(rng() & 1u);
    return test::make_dataset(cols);
}

}  // namespace

TEST_SUITE("scoring") {

TEST_CASE("worked local score") {
    const Dataset d = test::make_dataset({{0, 1}});
    ScoreCache cache;
    // 2 ln(0.5) - ln 2 = -3 ln 2
    CHECK(local_bdeu(0, {}, d, EssConfig{1.0}, cache) == doctest::Approx(-3.0 * std::log(2.0)).epsilon(1e-12));
    CHECK(local_bdeu(0, {}, d, EssConfig{1.0}, cache) == doctest::Approx(-2.0794415416798357).epsilon(1e-12));
}

TEST_CASE("empty data scores zero") {
    const Dataset d = forward_sample(test::collider_network(), 0, 1);
    ScoreCache cache;
    const VariableId parents[] = {0, 1};
    CHECK(local_bdeu(2, parents, d, {}, cache) == 0.0);
    CHECK(similarity(0, 1, d, {}, cache) == 0.0);
    CHECK_THROWS_AS(normalized_bdeu(Dag(3), d, {}, cache), ZeroInstances);
}

TEST_CASE("child among its parents is rejected") {
    const Dataset d = random_binary(3, 10, 1);
    ScoreCache cache;
    const VariableId parents[] = {0, 1};
    CHECK_THROWS(local_bdeu(1, parents, d, {}, cache));
    CHECK_THROWS_AS(graph_bdeu(Dag(4), d, {}, cache), DimensionMismatch);
}

TEST_CASE("graph score equals the cache-free oracle on all 3-node DAGs") {
    const Dataset d = forward_sample(random_network(3, 2, 3, 5), 700, 12);
    const auto universe = oracle::all_dags(3);
    REQUIRE(universe.size() == 25);
    for (double eta : {1.0, 10.0}) {
        ScoreCache cache;
        for (const Dag& g : universe)
            CHECK(graph_bdeu(g, d, EssConfig{eta}, cache) == doctest::Approx(oracle::bdeu_graph(d, g, eta)).epsilon(1e-11));
    }
}

TEST_CASE("sparse counting agrees with the oracle on wide parent sets") {
    const auto alarm = read_bif_file(test::data_path("networks/alarm.bif"));
    const Dataset d = forward_sample(alarm, 3000, 4);
    ScoreCache cache;
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<int> pool(d.num_variables());
        for (std::size_t i = 0; i < pool.size(); ++i) pool[i] = static_cast<int>(i);
        std::shuffle(pool.begin(), pool.end(), rng);
        const int child = pool[0];
        std::vector<int> parents(pool.begin() + 1, pool.begin() + 1 + trial % 9);
        std::vector<VariableId> ps(parents.begin(), parents.end());
        CHECK(local_bdeu(child, ps, d, {}, cache) == doctest::Approx(oracle::bdeu_family(d, child, parents, EssConfig{}.eta)).epsilon(1e-11));
    }
}

TEST_CASE("score equivalence over every pair of equivalent 4-node DAGs") {
    const Dataset d = forward_sample(random_network(4, 3, 3, 21), 400, 6);
    const auto universe = oracle::all_dags(4);
    ScoreCache cache;
    const BdeuScore score(d, {}, cache);
    std::vector<double> scores;
    for (const Dag& g : universe) scores.push_back(score.graph(g));
    for (std::size_t i = 0; i < universe.size(); ++i)
        for (std::size_t j = i + 1; j < universe.size(); ++j)
            if (oracle::equivalent(universe[i], universe[j])) REQUIRE(std::abs(scores[i] - scores[j]) < 1e-9);
}

TEST_CASE("decomposability and cache transparency") {
    const Dataset d = forward_sample(random_network(5, 2, 3, 2), 1000, 3);
    ScoreCache warm;
    const BdeuScore score(d, {}, warm);
    Dag g = test::dag_of(5, {{0, 1}, {1, 2}, {3, 4}});
    const double before = score.graph(g);
    const VariableId old_parents[] = {1};
    const VariableId new_parents[] = {0, 1};
    g.add_arc(0, 2);
    CHECK(score.graph(g) - before == doctest::Approx(score.local(2, new_parents) - score.local(2, old_parents)).epsilon(1e-12));

    ScoreCache cold;
    CHECK(BdeuScore(d, {}, cold).graph(g) == score.graph(g));
    CHECK(warm.hits() > 0);
    CHECK(warm.size() > 0);
}

TEST_CASE("similarity signs") {
    std::vector<int> x(5000);
    std::mt19937_64 rng(1);
    for (auto& v : x) v = static_cast<int>(rng() & 1u);
    const Dataset copies = test::make_dataset({x, x});
    ScoreCache cache;
    CHECK(similarity(0, 1, copies, {}, cache) > 0.0);

    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const Dataset d = random_binary(2, 20000, 100 + seed);
        ScoreCache c;
        CHECK(similarity(0, 1, d, {}, c) < 0.0);
    }
}

TEST_CASE("normalized score with one row is the raw score") {
    const Dataset d = test::make_dataset({{1}, {0}});
    ScoreCache cache;
    const Dag g = test::dag_of(2, {{0, 1}});
    CHECK(normalized_bdeu(g, d, {}, cache) == graph_bdeu(g, d, {}, cache));
}

TEST_CASE("cache is safe under concurrent writers") {
    const Dataset d = forward_sample(random_network(8, 3, 3, 9), 500, 1);
    ScoreCache shared;
    const BdeuScore score(d, {}, shared);
    std::vector<std::vector<double>> results(4);
    std::vector<std::thread> threads;
    for (int t = 0; t < 4; ++t)
        threads.emplace_back([&, t] {
            for (VariableId c = 0; c < 8; ++c)
                for (VariableId p = 0; p < 8; ++p) {
                    if (p == c) continue;
                    const VariableId parents[] = {p};
                    results[t].push_back(score.local(c, parents));
                }
        });
    for (auto& th : threads) th.join();
    for (int t = 1; t < 4; ++t) CHECK(results[t] == results[0]);
    CHECK(shared.size() == 8 * 7);
}

}  // TEST_SUITE
