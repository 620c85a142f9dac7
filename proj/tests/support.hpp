#pragma once

#include <initializer_list>
#include <string>
#include <vector>

#include "cges/data.hpp"
#include "cges/graph.hpp"

namespace test {

inline std::string data_path(const std::string& relative) { return std::string(CGES_TEST_DATA_DIR) + "/" + relative; }

/// Dataset over integer-coded columns; each column gets max+1 (at least two) states.
inline cges::Dataset make_dataset(const std::vector<std::vector<int>>& columns) {
    std::vector<cges::Variable> vars;
    std::vector<std::vector<cges::StateIndex>> cols;
    for (std::size_t c = 0; c < columns.size(); ++c) {
        int top = 1;
        for (int v : columns[c]) top = std::max(top, v);
        cges::Variable var{"V" + std::to_string(c), {}};
        for (int s = 0; s <= top; ++s) var.states.push_back("s" + std::to_string(s));
        vars.push_back(var);
        cols.emplace_back(columns[c].begin(), columns[c].end());
    }
    return cges::Dataset(std::move(vars), std::move(cols));
}

inline cges::Dag dag_of(std::size_t n, std::initializer_list<std::pair<int, int>> arcs) {
    cges::Dag g(n);
    for (auto [a, b] : arcs) g.add_arc(a, b);
    return g;
}

inline cges::Variable binary(const std::string& name) { return {name, {"a", "b"}}; }

/// Binary network from parent lists and CPT tables (last parent fastest).
inline cges::BayesianNetwork binary_network(const std::vector<std::vector<cges::VariableId>>& parents,
                                            const std::vector<std::vector<double>>& tables) {
    cges::BayesianNetwork bn;
    bn.name = "handmade";
    bn.dag = cges::Dag(parents.size());
    for (std::size_t v = 0; v < parents.size(); ++v) {
        bn.variables.push_back(binary("X" + std::to_string(v)));
        for (cges::VariableId p : parents[v]) bn.dag.add_arc(p, static_cast<cges::VariableId>(v));
        bn.cpts.push_back({parents[v], tables[v], 2});
    }
    bn.validate();
    return bn;
}

/// 0 -> 2 <- 1 with strongly dependent child.
inline cges::BayesianNetwork collider_network() {
    return binary_network({{}, {}, {0, 1}}, {{0.5, 0.5}, {0.5, 0.5}, {0.95, 0.05, 0.2, 0.8, 0.2, 0.8, 0.05, 0.95}});
}

}  // namespace test
