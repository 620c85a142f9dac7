#include <doctest.h>

#include <random>

#include "cges/data.hpp"
#include "cges/errors.hpp"
#include "cges/graph.hpp"
#include "oracles/oracles.hpp"
#include "support.hpp"

using namespace cges;

TEST_SUITE("graph") {

TEST_CASE("dag rejects self loops and two-cycles") {
    Dag g(3);
    CHECK(g.add_arc(0, 1));
    CHECK_FALSE(g.add_arc(0, 1));
    CHECK_THROWS(g.add_arc(1, 0));
    CHECK_THROWS(g.add_arc(2, 2));
    CHECK(g.remove_arc(0, 1));
    CHECK(g.num_arcs() == 0);
}

TEST_CASE("topological order") {
    CHECK(topological_order(Dag(3)) == std::vector<VariableId>{0, 1, 2});
    CHECK(topological_order(test::dag_of(3, {{0, 1}, {1, 2}})) == std::vector<VariableId>{0, 1, 2});
    CHECK(topological_order(test::dag_of(3, {{2, 1}, {1, 0}})) == std::vector<VariableId>{2, 1, 0});

    Dag cyclic = test::dag_of(3, {{0, 1}, {1, 2}});
    cyclic.add_arc(2, 0);  // add_arc only refuses direct two-cycles
    CHECK_FALSE(cyclic.is_acyclic());
    CHECK_THROWS_AS(topological_order(cyclic), CyclicGraph);
}

TEST_CASE("moralize marries co-parents") {
    const auto collider = moralize(test::dag_of(3, {{0, 2}, {1, 2}}));
    CHECK(collider.num_edges() == 3);
    CHECK(collider.has_edge(0, 1));
    const auto chain = moralize(test::dag_of(3, {{0, 1}, {1, 2}}));
    CHECK(chain.num_edges() == 2);
    CHECK_FALSE(chain.has_edge(0, 2));
}

TEST_CASE("moral graph matches the definition on random DAGs") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 100; ++trial) {
        const Dag g = oracle::random_dag(7, 0.4, rng);
        std::set<std::pair<int, int>> got;
        for (const VariablePair& e : moralize(g).edges()) got.emplace(e.first, e.second);
        CHECK(got == oracle::moral_edges(g));
    }
}

TEST_CASE("pigs moral graph has 806 edges") {
    const auto pigs = read_bif_file(test::data_path("networks/pigs.bif"));
    CHECK(moralize(pigs.dag).num_edges() == 806);
}

TEST_CASE("d-separation examples") {
    const Dag collider = test::dag_of(3, {{0, 2}, {1, 2}});
    CHECK(d_separated(collider, 0, 1, {}));
    const VariableId two[] = {2};
    CHECK_FALSE(d_separated(collider, 0, 1, two));

    const Dag chain = test::dag_of(3, {{0, 1}, {1, 2}});
    const VariableId one[] = {1};
    CHECK(d_separated(chain, 0, 2, one));
    CHECK_FALSE(d_separated(chain, 0, 2, {}));

    // Conditioning on a descendant of a collider opens it.
    const Dag desc = test::dag_of(4, {{0, 2}, {1, 2}, {2, 3}});
    const VariableId three[] = {3};
    CHECK_FALSE(d_separated(desc, 0, 1, three));
    CHECK_THROWS(d_separated(chain, 0, 0, {}));
}

TEST_CASE("d-separation agrees with path enumeration on random 6-node DAGs") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 60; ++trial) {
        const Dag g = oracle::random_dag(6, 0.35, rng);
        for (int x = 0; x < 6; ++x)
            for (int y = x + 1; y < 6; ++y)
                for (std::uint32_t mask = 0; mask < 64; ++mask) {
                    if (mask >> x & 1u || mask >> y & 1u) continue;
                    std::vector<VariableId> z;
                    std::set<int> zs;
                    for (int v = 0; v < 6; ++v)
                        if (mask >> v & 1u) {
                            z.push_back(v);
                            zs.insert(v);
                        }
                    const bool expected = oracle::d_separated_by_paths(g, x, y, zs);
                    REQUIRE(d_separated(g, x, y, z) == expected);
                    REQUIRE(d_separated(g, y, x, z) == expected);
                }
    }
}

TEST_CASE("cpdag examples") {
    const Pdag chain = dag_to_cpdag(test::dag_of(3, {{0, 1}, {1, 2}}));
    CHECK(chain.num_arcs() == 0);
    CHECK(chain.has_edge(0, 1));
    CHECK(chain.has_edge(1, 2));

    const Pdag collider = dag_to_cpdag(test::dag_of(3, {{0, 2}, {1, 2}}));
    CHECK(collider.num_edges() == 0);
    CHECK(collider.has_arc(0, 2));
    CHECK(collider.has_arc(1, 2));
}

TEST_CASE("cpdag equals the equivalence-class oracle on every 4-node DAG") {
    const auto universe = oracle::all_dags(4);
    REQUIRE(universe.size() == 543);
    for (const Dag& g : universe) {
        const Pdag cpdag = dag_to_cpdag(g);
        REQUIRE(oracle::pattern_of(cpdag) == oracle::pattern_by_enumeration(g, universe));
        REQUIRE(complete_to_cpdag(cpdag) == cpdag);
        REQUIRE(complete_to_cpdag(Pdag::from_dag(g)) == cpdag);
        const Dag ext = consistent_extension(cpdag);
        REQUIRE(oracle::equivalent(ext, g));
    }
}

TEST_CASE("cpdag and extension on random 5-node DAGs") {
    const auto universe = oracle::all_dags(5);
    CHECK(universe.size() == 29281);
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 40; ++trial) {
        const Dag g = oracle::random_dag(5, 0.5, rng);
        const Pdag cpdag = dag_to_cpdag(g);
        CHECK(oracle::pattern_of(cpdag) == oracle::pattern_by_enumeration(g, universe));
        CHECK(oracle::equivalent(consistent_extension(cpdag), g));
    }
}

TEST_CASE("consistent extension examples") {
    Pdag single(2);
    single.add_edge(0, 1);
    CHECK(consistent_extension(single) == test::dag_of(2, {{0, 1}}));

    const Dag directed = test::dag_of(4, {{0, 2}, {1, 2}, {2, 3}});
    CHECK(consistent_extension(Pdag::from_dag(directed)) == directed);

    // A chordless undirected 4-cycle has no extension without a new v-structure.
    Pdag cycle(4);
    cycle.add_edge(0, 1);
    cycle.add_edge(1, 2);
    cycle.add_edge(2, 3);
    cycle.add_edge(3, 0);
    CHECK_THROWS_AS(consistent_extension(cycle), NoConsistentExtension);
}

TEST_CASE("pdag bookkeeping") {
    Pdag p(4);
    p.add_arc(0, 1);
    p.add_edge(1, 2);
    CHECK_THROWS(p.add_edge(0, 1));
    CHECK(p.adjacent(1, 0));
    p.orient(2, 1);
    CHECK(p.has_arc(2, 1));
    CHECK(p.num_edges() == 0);
    CHECK(p.disconnect(0, 1));
    CHECK_FALSE(p.adjacent(0, 1));
    CHECK(p.skeleton() == std::vector<VariablePair>{{1, 2}});
}

}  // TEST_SUITE
