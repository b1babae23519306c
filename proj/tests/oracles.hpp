#pragma once

// Brute-force reference implementations used by the tests. They share no
// code with the solver beyond the rational types.

#include <algorithm>
#include <functional>
#include <optional>
#include <random>
#include <vector>

#include "lep/lep.hpp"

namespace oracle {

using lep::Rational;
using lep::RationalVector;

/// Solves A x = b for the given columns by Gaussian elimination. Returns the
/// solution only when the columns are linearly independent and the system is
/// consistent.
inline std::optional<std::vector<Rational>> solveIndependent(const std::vector<RationalVector>& cols,
                                                             const RationalVector& b) {
    const std::size_t rows = b.dim(), k = cols.size();
    std::vector<std::vector<Rational>> m(rows, std::vector<Rational>(k + 1));
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < k; ++j) m[i][j] = cols[j][i];
        m[i][k] = b[i];
    }
    std::size_t r = 0;
    std::vector<std::size_t> pivotCol;
    for (std::size_t c = 0; c < k; ++c) {
        std::size_t p = r;
        while (p < rows && m[p][c] == 0) ++p;
        if (p == rows) return std::nullopt;  // dependent columns
        std::swap(m[p], m[r]);
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || m[i][c] == 0) continue;
            const Rational f = m[i][c] / m[r][c];
            for (std::size_t j = c; j <= k; ++j) m[i][j] -= f * m[r][j];
        }
        pivotCol.push_back(c);
        ++r;
    }
    for (std::size_t i = r; i < rows; ++i)
        if (m[i][k] != 0) return std::nullopt;
    std::vector<Rational> x(k);
    for (std::size_t i = 0; i < r; ++i) x[pivotCol[i]] = m[i][k] / m[i][pivotCol[i]];
    return x;
}

/// target in cone(cols), by enumeration of basic solutions (Caratheodory).
inline bool member(const RationalVector& target, const std::vector<RationalVector>& cols) {
    if (target.isZero()) return true;
    const std::size_t k = cols.size(), d = target.dim();
    const std::size_t maxSize = std::min(k, d);
    std::vector<std::size_t> idx;
    bool found = false;
    std::function<void(std::size_t)> rec = [&](std::size_t start) {
        if (found) return;
        if (!idx.empty()) {
            std::vector<RationalVector> sub;
            for (auto i : idx) sub.push_back(cols[i]);
            if (auto x = solveIndependent(sub, target)) {
                if (std::all_of(x->begin(), x->end(), [](const Rational& v) { return sgn(v) >= 0; })) {
                    found = true;
                    return;
                }
            }
        }
        if (idx.size() == maxSize) return;
        for (std::size_t i = start; i < k && !found; ++i) {
            idx.push_back(i);
            rec(i + 1);
            idx.pop_back();
        }
    };
    rec(0);
    return found;
}

/// Gordan: some xi is strictly positive on every nonzero generator iff 0 is
/// not a convex combination of them.
inline bool pointed(const std::vector<RationalVector>& gens, std::size_t d) {
    std::vector<RationalVector> lifted;
    for (const auto& g : gens) {
        if (g.isZero()) continue;
        RationalVector l(d + 1);
        for (std::size_t i = 0; i < d; ++i) l[i] = g[i];
        l[d] = 1;
        lifted.push_back(l);
    }
    RationalVector target(d + 1);
    target[d] = 1;
    return !member(target, lifted);
}

/// Every permutation, checked independently.
inline std::vector<lep::LinearExtension> bruteSolve(const lep::LCLEPInstance& inst) {
    std::vector<int> perm(inst.forms.size());
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<int>(i);
    std::vector<lep::LinearExtension> out;
    do {
        lep::LinearExtension s(perm);
        if (lep::checkSigma(inst, s).admissible) out.push_back(s);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
}

inline RationalVector randomVector(std::mt19937_64& rng, std::size_t d, int lo, int hi) {
    std::uniform_int_distribution<int> dist(lo, hi);
    RationalVector v(d);
    for (std::size_t i = 0; i < d; ++i) v[i] = dist(rng);
    return v;
}

}  // namespace oracle
