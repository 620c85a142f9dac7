#include "cges/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "cges/errors.hpp"

namespace cges {

LocalScoreKey::LocalScoreKey(VariableId c, std::span<const VariableId> ps) : child(c), parents(ps.begin(), ps.end()) {
    std::sort(parents.begin(), parents.end());
}

std::size_t LocalScoreKeyHash::operator()(const LocalScoreKey& key) const noexcept {
    // FNV-1a over the child and parent indices.
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&h](std::uint64_t x) {
        for (int i = 0; i < 4; ++i) {
            h ^= (x >> (8 * i)) & 0xffu;
            h *= 1099511628211ull;
        }
    };
    mix(static_cast<std::uint64_t>(key.child));
    for (VariableId p : key.parents) mix(static_cast<std::uint64_t>(p));
    return static_cast<std::size_t>(h);
}

std::optional<double> ScoreCache::find(const LocalScoreKey& key) const {
    auto it = map_.find(key);
    if (it == map_.end()) {
        misses_.fetch_add(1, std::memory_order_relaxed);
        return std::nullopt;
    }
    hits_.fetch_add(1, std::memory_order_relaxed);
    return it->second;
}

double ScoreCache::insert(const LocalScoreKey& key, double value) {
    auto [it, inserted] = map_.insert({key, value});
    return it->second;
}

double log_gamma(double x) {
    int sign = 0;
    return ::lgamma_r(x, &sign);
}

ContingencyTable count_family(const Dataset& data, VariableId child, std::span<const VariableId> parents) {
    const std::size_t m = data.num_rows();
    ContingencyTable table;
    table.child_states = data.cardinality(child);
    for (VariableId p : parents) table.parent_configurations *= static_cast<double>(data.cardinality(p));
    if (m == 0) return table;

    // Mixed-radix parent configuration per row, re-densified whenever it would overflow.
    constexpr std::uint64_t kDensifyAbove = std::uint64_t{1} << 40;
    std::vector<std::uint64_t> keys(m, 0);
    std::uint64_t range = 1;
    std::vector<std::uint64_t> scratch;
    for (VariableId p : parents) {
        const std::uint64_t card = data.cardinality(p);
        if (range > kDensifyAbove / card) {
            scratch = keys;
            std::sort(scratch.begin(), scratch.end());
            scratch.erase(std::unique(scratch.begin(), scratch.end()), scratch.end());
            for (auto& k : keys) k = static_cast<std::uint64_t>(std::lower_bound(scratch.begin(), scratch.end(), k) - scratch.begin());
            range = scratch.size();
        }
        auto column = data.column(p);
        for (std::size_t i = 0; i < m; ++i) keys[i] = keys[i] * card + column[i];
        range *= card;
    }
    const std::uint64_t r = table.child_states;
    auto child_column = data.column(child);

    // Small configuration spaces: count into a dense table, then drop empty rows.
    if (range * r <= std::max<std::uint64_t>(std::uint64_t{1} << 16, 2 * m)) {
        std::vector<std::uint32_t> dense(range * r, 0);
        for (std::size_t i = 0; i < m; ++i) ++dense[keys[i] * r + child_column[i]];
        for (std::uint64_t j = 0; j < range; ++j) {
            auto first = dense.begin() + static_cast<std::ptrdiff_t>(j * r);
            if (std::any_of(first, first + static_cast<std::ptrdiff_t>(r), [](std::uint32_t c) { return c != 0; }))
                table.counts.insert(table.counts.end(), first, first + static_cast<std::ptrdiff_t>(r));
        }
        return table;
    }

    for (std::size_t i = 0; i < m; ++i) keys[i] = keys[i] * r + child_column[i];
    std::sort(keys.begin(), keys.end());

    std::uint64_t current_config = keys.front() / r;
    table.counts.assign(r, 0);
    std::size_t row = 0;
    for (std::uint64_t key : keys) {
        const std::uint64_t config = key / r;
        if (config != current_config) {
            current_config = config;
            table.counts.resize(table.counts.size() + r, 0);
            ++row;
        }
        ++table.counts[row * r + key % r];
    }
    return table;
}

double bdeu_from_counts(const ContingencyTable& table, EssConfig ess) {
    const double q = table.parent_configurations;
    const double r = static_cast<double>(table.child_states);
    const double alpha_j = ess.eta / q;
    const double alpha_jk = ess.eta / (r * q);
    const double lg_alpha_j = log_gamma(alpha_j);
    const double lg_alpha_jk = log_gamma(alpha_jk);
    double score = 0.0;
    for (std::size_t j = 0; j < table.observed_configurations(); ++j) {
        std::uint64_t n_ij = 0;
        double inner = 0.0;
        for (std::size_t k = 0; k < table.child_states; ++k) {
            const std::uint32_t n_ijk = table.counts[j * table.child_states + k];
            n_ij += n_ijk;
            if (n_ijk > 0) inner += log_gamma(n_ijk + alpha_jk) - lg_alpha_jk;
        }
        if (n_ij == 0) continue;
        score += lg_alpha_j - log_gamma(static_cast<double>(n_ij) + alpha_j) + inner;
    }
    return score;
}

BdeuScore::BdeuScore(const Dataset& data, EssConfig ess, ScoreCache& cache) : data_(&data), ess_(ess), cache_(&cache) {
    if (!(ess.eta > 0.0)) throw std::invalid_argument("equivalent sample size must be positive");
}

double BdeuScore::local(VariableId child, std::span<const VariableId> parents) const {
    LocalScoreKey key(child, parents);
    if (std::binary_search(key.parents.begin(), key.parents.end(), child))
        throw std::invalid_argument("local score: child " + std::to_string(child) + " listed among its parents");
    if (auto hit = cache_->find(key)) return *hit;
    const double value = bdeu_from_counts(count_family(*data_, child, key.parents), ess_);
    return cache_->insert(key, value);
}

double BdeuScore::graph(const Dag& g) const {
    if (g.size() != num_variables()) throw DimensionMismatch("graph and dataset have different variable counts");
    double total = 0.0;
    for (VariableId v = 0; v < static_cast<VariableId>(g.size()); ++v) total += local(v, g.parents(v));
    return total;
}

double BdeuScore::similarity(VariableId xi, VariableId xj) const {
    if (xi == xj) throw std::invalid_argument("similarity needs two distinct variables");
    const VariableId parent[] = {xj};
    return local(xi, parent) - local(xi, {});
}

double BdeuScore::normalized(const Dag& g) const {
    if (data_->num_rows() == 0) throw ZeroInstances();
    return graph(g) / static_cast<double>(data_->num_rows());
}

double local_bdeu(VariableId child, std::span<const VariableId> parents, const Dataset& data, EssConfig ess, ScoreCache& cache) {
    return BdeuScore(data, ess, cache).local(child, parents);
}

double graph_bdeu(const Dag& g, const Dataset& data, EssConfig ess, ScoreCache& cache) {
    return BdeuScore(data, ess, cache).graph(g);
}

double similarity(VariableId xi, VariableId xj, const Dataset& data, EssConfig ess, ScoreCache& cache) {
    return BdeuScore(data, ess, cache).similarity(xi, xj);
}

double normalized_bdeu(const Dag& g, const Dataset& data, EssConfig ess, ScoreCache& cache) {
    return BdeuScore(data, ess, cache).normalized(g);
}

}  // namespace cges
