#pragma once

#include <algorithm>
#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lep/errors.hpp"

namespace lep {

/// Strict partial order on {0, ..., size-1}. Built from any generating set of
/// relations a < b; stores the transitive closure and the cover relation
/// (transitive reduction).
class PartialOrder {
public:
    PartialOrder() = default;

    PartialOrder(std::size_t size, const std::vector<std::pair<int, int>>& relations)
        : size_(size), reach_(size, std::vector<char>(size, 0)) {
        for (auto [a, b] : relations) {
            if (a < 0 || b < 0 || static_cast<std::size_t>(a) >= size || static_cast<std::size_t>(b) >= size)
                throw InputError("relation (" + std::to_string(a) + "," + std::to_string(b) + ") out of range");
            if (a == b) throw CyclicRefinement("reflexive relation on element " + std::to_string(a));
            reach_[a][b] = 1;
        }
        for (std::size_t c = 0; c < size; ++c)
            for (std::size_t a = 0; a < size; ++a)
                if (reach_[a][c])
                    for (std::size_t b = 0; b < size; ++b)
                        if (reach_[c][b]) reach_[a][b] = 1;
        for (std::size_t a = 0; a < size; ++a)
            if (reach_[a][a]) throw CyclicRefinement("relations contain a cycle through " + std::to_string(a));

        predecessors_.assign(size, {});
        for (std::size_t a = 0; a < size; ++a) {
            for (std::size_t b = 0; b < size; ++b) {
                if (!reach_[a][b]) continue;
                bool implied = false;
                for (std::size_t c = 0; c < size && !implied; ++c) implied = reach_[a][c] && reach_[c][b];
                if (!implied) {
                    covers_.emplace_back(static_cast<int>(a), static_cast<int>(b));
                    predecessors_[b].push_back(static_cast<int>(a));
                }
            }
        }
    }

    /// The order with no relations.
    static PartialOrder antichain(std::size_t size) { return PartialOrder(size, {}); }

    static PartialOrder chain(const std::vector<int>& order) {
        std::vector<std::pair<int, int>> rel;
        for (std::size_t k = 1; k < order.size(); ++k) rel.emplace_back(order[k - 1], order[k]);
        return PartialOrder(order.size(), rel);
    }

    std::size_t size() const { return size_; }
    /// Cover pairs (a, b), a < b, sorted lexicographically.
    const std::vector<std::pair<int, int>>& covers() const { return covers_; }
    const std::vector<int>& coverPredecessors(int b) const { return predecessors_[b]; }
    bool less(int a, int b) const { return reach_[a][b] != 0; }

    friend bool operator==(const PartialOrder& x, const PartialOrder& y) {
        return x.size_ == y.size_ && x.covers_ == y.covers_;
    }

private:
    std::size_t size_ = 0;
    std::vector<std::vector<char>> reach_;
    std::vector<std::pair<int, int>> covers_;
    std::vector<std::vector<int>> predecessors_;
};

/// A total order sigma(0) < sigma(1) < ... stored as the permutation word.
class LinearExtension {
public:
    LinearExtension() = default;
    explicit LinearExtension(std::vector<int> perm) : perm_(std::move(perm)) {
        std::vector<char> seen(perm_.size(), 0);
        for (int x : perm_) {
            if (x < 0 || static_cast<std::size_t>(x) >= perm_.size() || seen[x])
                throw InputError("not a permutation of 0.." + std::to_string(perm_.size() - 1));
            seen[x] = 1;
        }
    }

    std::size_t size() const { return perm_.size(); }
    int operator[](std::size_t k) const { return perm_[k]; }
    const std::vector<int>& word() const { return perm_; }

    /// position()[e] is the rank of element e.
    std::vector<int> positions() const {
        std::vector<int> pos(perm_.size());
        for (std::size_t k = 0; k < perm_.size(); ++k) pos[perm_[k]] = static_cast<int>(k);
        return pos;
    }

    friend auto operator<=>(const LinearExtension&, const LinearExtension&) = default;

private:
    std::vector<int> perm_;
};

inline std::ostream& operator<<(std::ostream& os, const LinearExtension& s) {
    os << '(';
    for (std::size_t k = 0; k < s.size(); ++k) os << (k ? ", " : "") << s[k];
    return os << ')';
}

/// Boolean function on {1..n} stored as an n-bit word whose binary digit for
/// variable d has weight 2^(n-d).
class BooleanIndex {
public:
    BooleanIndex(std::uint64_t bits, int n) : bits_(bits), n_(n) {
        if (n < 0 || n > 62) throw InputError("boolean index width out of range");
        if (n < 62 && bits >= (std::uint64_t{1} << n)) throw InputError("boolean index exceeds 2^n");
    }

    /// From the values alpha(1), ..., alpha(n).
    static BooleanIndex fromValues(std::span<const int> alpha) {
        std::uint64_t bits = 0;
        const int n = static_cast<int>(alpha.size());
        for (int d = 1; d <= n; ++d) {
            const int a = alpha[d - 1];
            if (a != 0 && a != 1) throw InputError("boolean values must be 0 or 1");
            if (a) bits |= std::uint64_t{1} << (n - d);
        }
        return BooleanIndex(bits, n);
    }

    int width() const { return n_; }
    std::uint64_t linear() const { return bits_; }
    int value(int d) const { return static_cast<int>((bits_ >> (n_ - d)) & 1u); }

    /// Restrictions (alpha_1, ..., alpha_q) to consecutive blocks of the given
    /// sizes, each as a block-local index with the same digit convention.
    std::vector<std::uint64_t> factorView(std::span<const int> blockSizes) const {
        std::vector<std::uint64_t> out;
        int consumed = 0;
        for (int s : blockSizes) {
            consumed += s;
            const int shift = n_ - consumed;
            if (shift < 0) throw InputError("block sizes exceed index width");
            out.push_back((bits_ >> shift) & ((std::uint64_t{1} << s) - 1));
        }
        if (consumed != n_) throw InputError("block sizes do not sum to index width");
        return out;
    }

private:
    std::uint64_t bits_;
    int n_;
};

inline std::uint64_t booleanIndexOf(std::span<const int> alpha) { return BooleanIndex::fromValues(alpha).linear(); }

/// The n-cube lattice on {0..2^n-1}: i < j covers exactly when j sets one
/// more bit than i.
inline PartialOrder oneBitCovers(int n) {
    if (n < 0 || n > 16) throw InputError("lattice dimension out of range");
    const int size = 1 << n;
    std::vector<std::pair<int, int>> rel;
    for (int i = 0; i < size; ++i)
        for (int b = 0; b < n; ++b)
            if (!(i & (1 << b))) rel.emplace_back(i, i | (1 << b));
    return PartialOrder(size, rel);
}

/// Exact number of linear extensions by dynamic programming over downsets.
inline std::uint64_t countLinearExtensions(const PartialOrder& po) {
    constexpr std::size_t kLimit = 12;
    if (po.size() > kLimit) throw TooLarge("linear extension counting supports at most 12 elements");
    const std::size_t n = po.size();
    std::vector<std::uint32_t> predMask(n, 0);
    for (auto [a, b] : po.covers()) predMask[b] |= 1u << a;
    std::vector<std::uint64_t> ways(std::size_t{1} << n, 0);
    ways[0] = 1;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        if (!ways[mask]) continue;
        for (std::size_t e = 0; e < n; ++e)
            if (!(mask & (1u << e)) && (predMask[e] & ~mask) == 0) ways[mask | (1u << e)] += ways[mask];
    }
    return ways[(std::size_t{1} << n) - 1];
}

inline bool isLinearExtension(const LinearExtension& sigma, const PartialOrder& po) {
    if (sigma.size() != po.size()) throw DimensionMismatch("order size differs from extension size");
    const auto pos = sigma.positions();
    for (auto [a, b] : po.covers())
        if (pos[a] >= pos[b]) return false;
    return true;
}

/// A total order imposed on a subset: subset[order[0]] < subset[order[1]] < ...
struct InducedOrder {
    std::vector<int> subset;
    LinearExtension order;

    std::vector<int> chain() const {
        std::vector<int> c;
        c.reserve(order.size());
        for (std::size_t k = 0; k < order.size(); ++k) c.push_back(subset[order[k]]);
        return c;
    }
};

/// Union of `base` with every induced chain, transitively reduced.
inline PartialOrder refineOrder(const PartialOrder& base, const std::vector<InducedOrder>& induced) {
    std::vector<std::pair<int, int>> rel = base.covers();
    for (const auto& ind : induced) {
        if (ind.subset.size() != ind.order.size()) throw DimensionMismatch("induced order size differs from subset");
        const auto c = ind.chain();
        for (std::size_t k = 1; k < c.size(); ++k) rel.emplace_back(c[k - 1], c[k]);
    }
    return PartialOrder(base.size(), rel);
}

}  // namespace lep
