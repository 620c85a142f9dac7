#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "cges/graph.hpp"

namespace cges {

/// Set of unordered variable pairs over n variables, O(1) membership.
class PairSet {
public:
    explicit PairSet(std::size_t n = 0) : n_(n), bits_((n * n + 63) / 64, 0) {}

    static PairSet all(std::size_t n) {
        PairSet s(n);
        for (VariableId a = 0; a < static_cast<VariableId>(n); ++a)
            for (VariableId b = a + 1; b < static_cast<VariableId>(n); ++b) s.insert(a, b);
        return s;
    }

    std::size_t num_variables() const { return n_; }
    std::size_t size() const { return size_; }

    bool insert(VariableId a, VariableId b) {
        const auto p = VariablePair::of(a, b);
        const std::size_t bit = index(p);
        if (bits_[bit / 64] >> (bit % 64) & 1u) return false;
        bits_[bit / 64] |= std::uint64_t{1} << (bit % 64);
        ++size_;
        return true;
    }

    bool contains(VariableId a, VariableId b) const {
        if (a == b) return false;
        const std::size_t bit = index(VariablePair::of(a, b));
        return bits_[bit / 64] >> (bit % 64) & 1u;
    }

    /// Pairs in lexicographic order.
    std::vector<VariablePair> pairs() const {
        std::vector<VariablePair> out;
        out.reserve(size_);
        for (VariableId a = 0; a < static_cast<VariableId>(n_); ++a)
            for (VariableId b = a + 1; b < static_cast<VariableId>(n_); ++b)
                if (contains(a, b)) out.push_back({a, b});
        return out;
    }

    bool operator==(const PairSet&) const = default;

private:
    std::size_t index(VariablePair p) const {
        return static_cast<std::size_t>(p.first) * n_ + static_cast<std::size_t>(p.second);
    }

    std::size_t n_;
    std::vector<std::uint64_t> bits_;
    std::size_t size_ = 0;
};

}  // namespace cges
