#include "cges/fusion.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "cges/errors.hpp"

namespace cges {

namespace {

void check_same_size(const Dag& g1, const Dag& g2) {
    if (g1.size() != g2.size()) throw DimensionMismatch("fusion inputs have different variable counts");
}

/// Drops every arc into a sink so it no longer constrains the remaining nodes.
void detach_sink(Dag& g, VariableId v) {
    const std::vector<VariableId> parents(g.parents(v).begin(), g.parents(v).end());
    for (VariableId p : parents) g.remove_arc(p, v);
}

}  // namespace

SigmaOrder::SigmaOrder(std::vector<VariableId> order) : order_(std::move(order)), position_(order_.size(), order_.size()) {
    for (std::size_t i = 0; i < order_.size(); ++i) {
        const VariableId v = order_[i];
        if (v < 0 || static_cast<std::size_t>(v) >= order_.size() || position_[v] != order_.size())
            throw std::invalid_argument("sigma order is not a permutation");
        position_[v] = i;
    }
}

bool SigmaOrder::consistent(const Dag& g) const {
    if (g.size() != size()) return false;
    for (const Arc& a : g.arcs())
        if (position_[a.from] >= position_[a.to]) return false;
    return true;
}

std::size_t reverse_arc(Dag& g, VariableId u, VariableId v) {
    const std::vector<VariableId> pa_u(g.parents(u).begin(), g.parents(u).end());
    std::vector<VariableId> pa_v;
    for (VariableId p : g.parents(v))
        if (p != u) pa_v.push_back(p);

    g.remove_arc(u, v);
    g.add_arc(v, u);
    std::size_t added = 0;
    for (VariableId p : pa_u)
        if (g.add_arc(p, v)) ++added;
    for (VariableId p : pa_v)
        if (g.add_arc(p, u)) ++added;
    return added;
}

std::size_t make_sink(Dag& g, VariableId v) {
    std::size_t cost = 0;
    while (!g.children(v).empty()) {
        // A child with no other directed path from v; the topologically earliest child qualifies.
        const std::vector<VariableId> children(g.children(v).begin(), g.children(v).end());
        VariableId pick = children.front();
        for (VariableId c : children) {
            const bool alternative = std::any_of(children.begin(), children.end(),
                                                 [&](VariableId o) { return o != c && g.has_directed_path(o, c); });
            if (!alternative) {
                pick = c;
                break;
            }
        }
        cost += 1 + reverse_arc(g, v, pick);
    }
    return cost;
}

std::size_t sink_cost(const Dag& g, VariableId v) {
    Dag scratch = g;
    return make_sink(scratch, v);
}

SigmaOrder gho_order(const Dag& g1, const Dag& g2) {
    check_same_size(g1, g2);
    const std::size_t n = g1.size();
    Dag w1 = g1, w2 = g2;
    std::vector<char> placed(n, 0);
    std::vector<VariableId> order(n);
    for (std::size_t slot = n; slot-- > 0;) {
        VariableId best = -1;
        std::size_t best_cost = std::numeric_limits<std::size_t>::max();
        for (auto v = static_cast<VariableId>(n); v-- > 0;) {
            if (placed[v]) continue;
            const std::size_t cost = sink_cost(w1, v) + sink_cost(w2, v);
            if (cost < best_cost) {
                best_cost = cost;
                best = v;
                if (cost == 0) break;
            }
        }
        make_sink(w1, best);
        make_sink(w2, best);
        detach_sink(w1, best);
        detach_sink(w2, best);
        placed[best] = 1;
        order[slot] = best;
    }
    return SigmaOrder(std::move(order));
}

Dag sigma_transform(const Dag& g, const SigmaOrder& sigma) {
    if (g.size() != sigma.size()) throw DimensionMismatch("graph and order have different variable counts");
    Dag work = g;
    Dag out(g.size());
    for (std::size_t slot = sigma.size(); slot-- > 0;) {
        const VariableId v = sigma.order()[slot];
        make_sink(work, v);
        for (VariableId p : work.parents(v)) out.add_arc(p, v);
        detach_sink(work, v);
    }
    return out;
}

Dag fuse(const Dag& g1, const Dag& g2) {
    check_same_size(g1, g2);
    const SigmaOrder sigma = gho_order(g1, g2);
    Dag out = sigma_transform(g1, sigma);
    for (const Arc& a : sigma_transform(g2, sigma).arcs()) out.add_arc(a.from, a.to);
    return out;
}

}  // namespace cges
