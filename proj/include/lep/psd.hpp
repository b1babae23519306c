#pragma once

// Parameter space decomposition for interaction functions of type
// (n_1, ..., n_q): the 2^n product polynomials
//   p_alpha = prod_j ( sum_{k in I_j} l_k + alpha(k) d_k ),
// ordered by the Boolean lattice, and their linearization
//   p'_alpha = sum_j x_{j, alpha_j}   on R^m, m = sum_j 2^{n_j}.

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "lep/lclep.hpp"

namespace lep {

class InteractionType {
public:
    InteractionType() = default;
    explicit InteractionType(std::vector<int> parts) : parts_(std::move(parts)) { validate(); }

    /// Accepts "2,1", "(2,1)", "[2, 1]" or "2 1".
    static InteractionType parse(const std::string& text) {
        std::vector<int> parts;
        std::string cur;
        auto flush = [&] {
            if (cur.empty()) return;
            try {
                std::size_t used = 0;
                const int v = std::stoi(cur, &used);
                if (used != cur.size()) throw InputError("bad interaction type '" + text + "'");
                parts.push_back(v);
            } catch (const std::logic_error&) {
                throw InputError("bad interaction type '" + text + "'");
            }
            cur.clear();
        };
        for (char c : text) {
            if (c == '(' || c == ')' || c == '[' || c == ']' || c == ',' || c == ' ') flush();
            else cur.push_back(c);
        }
        flush();
        return InteractionType(parts);
    }

    const std::vector<int>& parts() const { return parts_; }
    int n() const { return n_; }
    int q() const { return static_cast<int>(parts_.size()); }
    std::size_t size() const { return std::size_t{1} << n_; }
    /// First variable (1-based) of block j (0-based).
    int blockStart(int j) const { return starts_[j]; }
    int blockOf(int var) const {
        for (int j = q() - 1; j >= 0; --j)
            if (var >= starts_[j]) return j;
        throw InputError("variable out of range");
    }
    /// Bit shift of the low digit of block j inside a global linear index.
    int blockShift(int j) const { return n_ - (starts_[j] + parts_[j] - 1); }
    std::uint64_t localIndex(std::uint64_t global, int j) const {
        return (global >> blockShift(j)) & ((std::uint64_t{1} << parts_[j]) - 1);
    }

    bool isSingleBlock() const { return q() == 1; }
    bool isAllOnes() const { return parts_.front() == 1; }
    /// (2,1,...,1), including (2).
    bool isTwoThenOnes() const {
        if (parts_.front() != 2) return false;
        for (int j = 1; j < q(); ++j)
            if (parts_[j] != 1) return false;
        return true;
    }

    std::string str() const {
        std::string s;
        for (int j = 0; j < q(); ++j) s += (j ? "," : "") + std::to_string(parts_[j]);
        return s;
    }

    friend bool operator==(const InteractionType& a, const InteractionType& b) { return a.parts_ == b.parts_; }
    friend bool operator<(const InteractionType& a, const InteractionType& b) { return a.parts_ < b.parts_; }

private:
    void validate() {
        if (parts_.empty()) throw InputError("interaction type has no parts");
        n_ = 0;
        starts_.clear();
        for (std::size_t j = 0; j < parts_.size(); ++j) {
            if (parts_[j] < 1) throw InputError("interaction type parts must be positive");
            if (j && parts_[j] > parts_[j - 1]) throw InputError("interaction type parts must be non-increasing");
            starts_.push_back(n_ + 1);
            n_ += parts_[j];
        }
        if (n_ > 10) throw TooLarge("interaction types with more than 10 inputs are not supported");
    }

    std::vector<int> parts_;
    std::vector<int> starts_;
    int n_ = 0;
};

/// xi = (l_1..l_n, d_1..d_n).
struct ParameterPoint {
    RationalVector ell;
    RationalVector delta;

    friend bool operator==(const ParameterPoint&, const ParameterPoint&) = default;
};

/// Symbolic p_alpha: one delta subset (1-based variables) per block; block j
/// also carries the sum of its l_k.
struct ProductPolynomial {
    std::vector<std::vector<int>> deltaSubsets;
};

struct PSDInstance {
    InteractionType itype;
    std::vector<ProductPolynomial> polynomials;
    PartialOrder lattice;

    std::string describe(std::size_t i) const {
        std::string s;
        const auto& p = polynomials[i];
        for (int j = 0; j < itype.q(); ++j) {
            std::string f;
            for (int k = itype.blockStart(j); k < itype.blockStart(j) + itype.parts()[j]; ++k)
                f += (f.empty() ? "" : " + ") + std::string("l") + std::to_string(k);
            for (int k : p.deltaSubsets[j]) f += " + d" + std::to_string(k);
            s += itype.q() == 1 ? f : "(" + f + ")";
        }
        return s;
    }
};

inline PSDInstance buildPSD(const InteractionType& itype) {
    PSDInstance inst;
    inst.itype = itype;
    const int n = itype.n();
    for (std::uint64_t i = 0; i < itype.size(); ++i) {
        ProductPolynomial p;
        for (int j = 0; j < itype.q(); ++j) {
            std::vector<int> subset;
            for (int k = itype.blockStart(j); k < itype.blockStart(j) + itype.parts()[j]; ++k)
                if ((i >> (n - k)) & 1u) subset.push_back(k);
            p.deltaSubsets.push_back(std::move(subset));
        }
        inst.polynomials.push_back(std::move(p));
    }
    inst.lattice = oneBitCovers(n);
    return inst;
}

namespace detail {

inline void checkPoint(const InteractionType& itype, const ParameterPoint& xi) {
    if (xi.ell.dim() != static_cast<std::size_t>(itype.n()) || xi.delta.dim() != static_cast<std::size_t>(itype.n()))
        throw DimensionMismatch("parameter point has wrong length for the interaction type");
    for (const auto& x : xi.ell)
        if (sgn(x) <= 0) throw NonPositiveParameter();
    for (const auto& x : xi.delta)
        if (sgn(x) <= 0) throw NonPositiveParameter();
}

}  // namespace detail

/// Block values per factor: out[j][a] for block-local index a.
inline std::vector<std::vector<Rational>> factorValues(const InteractionType& itype, const ParameterPoint& xi) {
    detail::checkPoint(itype, xi);
    std::vector<std::vector<Rational>> out(itype.q());
    for (int j = 0; j < itype.q(); ++j) {
        const int s = itype.blockStart(j);
        const int nj = itype.parts()[j];
        Rational lsum = 0;
        for (int k = s; k < s + nj; ++k) lsum += xi.ell[k - 1];
        out[j].resize(std::size_t{1} << nj);
        for (std::uint64_t a = 0; a < out[j].size(); ++a) {
            Rational v = lsum;
            for (int k = s; k < s + nj; ++k)
                if ((a >> (s + nj - 1 - k)) & 1u) v += xi.delta[k - 1];
            out[j][a] = v;
        }
    }
    return out;
}

inline RationalVector evaluate(const PSDInstance& inst, const ParameterPoint& xi) {
    const auto& it = inst.itype;
    const auto fv = factorValues(it, xi);
    RationalVector out(it.size());
    for (std::uint64_t i = 0; i < it.size(); ++i) {
        Rational v = 1;
        for (int j = 0; j < it.q(); ++j) v *= fv[j][it.localIndex(i, j)];
        out[i] = v;
    }
    return out;
}

/// True iff the values at xi are strictly increasing along sigma.
inline bool realizes(const PSDInstance& inst, const ParameterPoint& xi, const LinearExtension& sigma) {
    const auto v = evaluate(inst, xi);
    for (std::size_t k = 1; k < sigma.size(); ++k)
        if (!(v[sigma[k - 1]] < v[sigma[k]])) return false;
    return true;
}

struct LinearizedInstance {
    InteractionType itype;
    std::size_t m = 0;
    std::vector<std::size_t> offsets;  // first coordinate of each block
    std::vector<LinearForm> forms;
    PartialOrder lattice;
    std::vector<LinearForm> extraDomain;

    std::size_t coordinate(int j, std::uint64_t local) const { return offsets[j] + local; }
};

inline LinearizedInstance linearize(const PSDInstance& inst) {
    LinearizedInstance lin;
    lin.itype = inst.itype;
    const auto& it = inst.itype;
    for (int j = 0; j < it.q(); ++j) {
        lin.offsets.push_back(lin.m);
        lin.m += std::size_t{1} << it.parts()[j];
    }
    for (std::uint64_t i = 0; i < it.size(); ++i) {
        RationalVector u(lin.m);
        for (int j = 0; j < it.q(); ++j) u[lin.coordinate(j, it.localIndex(i, j))] = 1;
        lin.forms.push_back({std::move(u)});
    }
    lin.lattice = inst.lattice;
    return lin;
}

inline LCLEPInstance linearInstance(const LinearizedInstance& lin) {
    LCLEPInstance inst;
    inst.dimension = lin.m;
    inst.forms = lin.forms;
    inst.po = lin.lattice;
    inst.domainForms = lin.extraDomain;
    return inst;
}

/// The polynomials of a single-block type are already linear: forms over
/// (l_1..l_n, d_1..d_n) on the open positive orthant.
inline LCLEPInstance directInstance(const PSDInstance& inst) {
    const auto& it = inst.itype;
    if (!it.isSingleBlock()) throw WrongType("only single-block types are linear in the parameters");
    const int n = it.n();
    LCLEPInstance out;
    out.dimension = 2 * n;
    for (std::uint64_t i = 0; i < it.size(); ++i) {
        RationalVector u(2 * n);
        for (int k = 0; k < n; ++k) u[k] = 1;
        for (int k : inst.polynomials[i].deltaSubsets[0]) u[n + k - 1] = 1;
        out.forms.push_back({std::move(u)});
    }
    for (int k = 0; k < 2 * n; ++k) {
        RationalVector e(2 * n);
        e[k] = 1;
        out.domainForms.push_back({std::move(e)});
    }
    out.po = inst.lattice;
    return out;
}

namespace detail {

/// Exact binary value of a finite long double.
inline Rational fromLongDouble(long double x) {
    if (!std::isfinite(x)) throw RealizationFailed("non-finite value in floating-point stage");
    int e = 0;
    const long double mant = std::frexp(x, &e);
    const long double scaled = std::ldexp(mant, 64);
    const bool neg = scaled < 0;
    const unsigned long long bits = static_cast<unsigned long long>(neg ? -scaled : scaled);
    mpz_class num;
    mpz_import(num.get_mpz_t(), 1, 1, sizeof(bits), 0, 0, &bits);
    if (neg) num = -num;
    Rational r(num);
    const int shift = e - 64;
    if (shift >= 0) r *= Rational(mpz_class(1) << shift);
    else r /= Rational(mpz_class(1) << (-shift));
    r.canonicalize();
    return r;
}

inline long double toLongDouble(const Rational& r) {
    // Splits off powers of two so that large numerators stay in range.
    const long sn = static_cast<long>(mpz_sizeinbase(r.get_num_mpz_t(), 2));
    const long sd = static_cast<long>(mpz_sizeinbase(r.get_den_mpz_t(), 2));
    const long keep = 60;
    mpz_class num = r.get_num(), den = r.get_den();
    long e = 0;
    if (sn > keep) {
        mpz_fdiv_q_2exp(num.get_mpz_t(), num.get_mpz_t(), sn - keep);
        e += sn - keep;
    }
    if (sd > keep) {
        mpz_fdiv_q_2exp(den.get_mpz_t(), den.get_mpz_t(), sd - keep);
        e -= sd - keep;
    }
    return std::ldexp(static_cast<long double>(num.get_si()) / static_cast<long double>(den.get_si()),
                      static_cast<int>(e));
}

}  // namespace detail

/// T(xi): x_{j,a} = log of the block-j factor value at local index a,
/// rounded from extended precision.
inline RationalVector logTransferMap(const ParameterPoint& xi, const InteractionType& itype) {
    const auto fv = factorValues(itype, xi);
    std::size_t m = 0;
    for (const auto& f : fv) m += f.size();
    RationalVector out(m);
    std::size_t c = 0;
    for (const auto& f : fv)
        for (const auto& v : f) out[c++] = detail::fromLongDouble(std::log(detail::toLongDouble(v)));
    return out;
}

enum class QuadFamily {
    /// Splits of A'\A into two nonempty parts for every interval A < A' with
    /// at least two free coordinates.
    AllSplits,
    /// Only the two-dimensional faces of each block cube.
    Faces,
};

namespace detail {

/// The quadruples (alpha, beta, beta', alpha') of block-local indices whose
/// delta subsets satisfy 1_alpha + 1_alpha' = 1_beta + 1_beta', alpha below
/// beta and beta' below alpha'. One representative per beta/beta' swap.
inline std::vector<std::array<std::uint64_t, 4>> blockQuads(int nj, QuadFamily family) {
    std::vector<std::array<std::uint64_t, 4>> out;
    const std::uint64_t size = std::uint64_t{1} << nj;
    for (std::uint64_t a = 0; a < size; ++a) {
        for (std::uint64_t top = 0; top < size; ++top) {
            if ((a & top) != a || a == top) continue;
            const std::uint64_t free = top & ~a;
            const int k = std::popcount(free);
            if (k < 2 || (family == QuadFamily::Faces && k != 2)) continue;
            // Proper nonempty subsets X of free with X < free\X numerically.
            for (std::uint64_t x = (free - 1) & free; x != 0; x = (x - 1) & free) {
                const std::uint64_t y = free & ~x;
                if (x > y) continue;
                const std::uint64_t beta = a | x, betaPrime = a | y;
                // Multiset identity of delta subsets, checked bit by bit.
                for (int b = 0; b < nj; ++b) {
                    const int lhs = static_cast<int>((a >> b) & 1u) + static_cast<int>((top >> b) & 1u);
                    const int rhs = static_cast<int>((beta >> b) & 1u) + static_cast<int>((betaPrime >> b) & 1u);
                    if (lhs != rhs) throw std::logic_error("quadruple violates the subset identity");
                }
                out.push_back({a, beta, betaPrime, top});
            }
        }
    }
    return out;
}

}  // namespace detail

/// Forms x_{j,beta} + x_{j,beta'} - x_{j,alpha} - x_{j,alpha'} on R^m, strictly
/// positive at T(xi) for every positive xi.
inline std::vector<LinearForm> quadConstraints(const InteractionType& itype,
                                               QuadFamily family = QuadFamily::AllSplits) {
    const auto lin = linearize(buildPSD(itype));
    std::vector<LinearForm> out;
    for (int j = 0; j < itype.q(); ++j) {
        for (const auto& qd : detail::blockQuads(itype.parts()[j], family)) {
            RationalVector u(lin.m);
            u[lin.coordinate(j, qd[0])] -= 1;
            u[lin.coordinate(j, qd[1])] += 1;
            u[lin.coordinate(j, qd[2])] += 1;
            u[lin.coordinate(j, qd[3])] -= 1;
            out.push_back({std::move(u)});
        }
    }
    return out;
}

/// The single domain form -x_{1,0} + x_{1,1} + x_{1,2} - x_{1,3} of the
/// (2,1,...,1) case.
inline std::vector<LinearForm> specialCaseDomain(const InteractionType& itype) {
    if (!itype.isTwoThenOnes()) throw WrongType("special-case domain requires type (2,1,...,1), got (" + itype.str() + ")");
    const auto lin = linearize(buildPSD(itype));
    RationalVector u(lin.m);
    u[0] = -1;
    u[1] = 1;
    u[2] = 1;
    u[3] = -1;
    return {{std::move(u)}};
}

/// Lifts a point of the linearized (2,1,...,1) chamber of sigma back to a
/// positive parameter point realizing sigma, confirmed by exact evaluation.
inline ParameterPoint realizeParameter(const InteractionType& itype, const RationalVector& xiPrime,
                                       const LinearExtension& sigma) {
    if (!itype.isTwoThenOnes()) throw WrongType("realization requires type (2,1,...,1), got (" + itype.str() + ")");
    const PSDInstance psd = buildPSD(itype);
    const LinearizedInstance lin = linearize(psd);
    if (xiPrime.dim() != lin.m) throw DimensionMismatch("linearized point has wrong length");
    if (sigma.size() != itype.size()) throw DimensionMismatch("extension has wrong length");

    // Adding a constant to all coordinates of one block shifts every form by
    // the same amount, so each block is normalized to start at 0; the largest
    // magnitude sets the scale.
    std::vector<long double> x(lin.m);
    std::vector<Rational> shifted(lin.m);
    for (int j = 0; j < itype.q(); ++j) {
        const std::size_t o = lin.offsets[j];
        const std::size_t w = std::size_t{1} << itype.parts()[j];
        for (std::size_t a = 0; a < w; ++a) shifted[o + a] = xiPrime[o + a] - xiPrime[o];
    }
    Rational maxAbs = 0;
    for (const auto& v : shifted)
        if (abs(v) > maxAbs) maxAbs = abs(v);
    if (sgn(maxAbs) == 0) throw RealizationFailed("linearized point is constant on every block");
    for (std::size_t c = 0; c < lin.m; ++c) x[c] = detail::toLongDouble(shifted[c] / maxAbs);

    const long double x1 = x[1], x2 = x[2], x3 = x[3];
    if (!(x1 > 0 && x2 > 0 && x3 > x1 && x3 > x2)) throw RealizationFailed("point violates the lattice on block 1");
    if (!(x1 + x2 - x3 > 0)) throw RealizationFailed("point violates the block-1 domain constraint");
    // h(t) = g(t) e^{-t x3} = e^{-t x3} - e^{t(x1-x3)} - e^{t(x2-x3)} + 1,
    // negative just right of 0 and tending to 1.
    auto h = [&](long double t) {
        return std::exp(-t * x3) - std::exp(t * (x1 - x3)) - std::exp(t * (x2 - x3)) + 1.0L;
    };
    long double lo = 0, hi = 1;
    while (h(hi) <= 0) {
        lo = hi;
        hi *= 2;
        if (hi > 1e300L) throw RealizationFailed("no positive root located");
    }
    // lo may still be 0; find a point with h < 0.
    if (lo == 0) {
        long double t = hi;
        for (int k = 0; k < 4000 && h(t) >= 0; ++k) t /= 2;
        if (h(t) >= 0) throw RealizationFailed("no sign change located");
        lo = t;
    }

    const auto tryAt = [&](long double t) -> std::optional<ParameterPoint> {
        const int n = itype.n();
        ParameterPoint p{RationalVector(n), RationalVector(n)};
        // Block values E_a = exp(t x_a); E_3 is implied by the identity.
        const Rational e0 = 1;
        const Rational e1 = detail::fromLongDouble(std::exp(t * x1));
        const Rational e2 = detail::fromLongDouble(std::exp(t * x2));
        p.ell[0] = e0 / 2;
        p.ell[1] = e0 / 2;
        p.delta[0] = e2 - e0;
        p.delta[1] = e1 - e0;
        for (int j = 1; j < itype.q(); ++j) {
            const std::size_t o = lin.offsets[j];
            const int var = itype.blockStart(j) - 1;
            const Rational f0 = detail::fromLongDouble(std::exp(t * x[o]));
            const Rational f1 = detail::fromLongDouble(std::exp(t * x[o + 1]));
            p.ell[var] = f0;
            p.delta[var] = f1 - f0;
        }
        for (const auto& v : p.ell)
            if (sgn(v) <= 0) return std::nullopt;
        for (const auto& v : p.delta)
            if (sgn(v) <= 0) return std::nullopt;
        if (!realizes(psd, p, sigma)) return std::nullopt;
        return p;
    };

    constexpr int kBudget = 200;
    for (int it = 0; it < kBudget; ++it) {
        const long double mid = lo + (hi - lo) / 2;
        if (mid == lo || mid == hi) break;
        (h(mid) < 0 ? lo : hi) = mid;
        if (it >= 20 && it % 4 == 0)
            if (auto p = tryAt(lo + (hi - lo) / 2)) return *p;
    }
    if (auto p = tryAt(lo + (hi - lo) / 2)) return *p;
    throw RealizationFailed("exact confirmation failed within the iteration budget");
}

/// Restriction of a type to the indices with variable `fixedVar` set to `bit`.
struct Subproblem {
    InteractionType subType;
    /// subset[i'] is the global index of sub-problem linear index i'.
    std::vector<int> subset;
    /// True when the fixed variable formed a block of its own, so that block
    /// becomes a constant positive factor.
    bool droppedBlock = false;
};

inline Subproblem subproblem(const InteractionType& itype, int fixedVar, int bit) {
    const int n = itype.n();
    if (fixedVar < 1 || fixedVar > n) throw InputError("fixed variable out of range");
    if (bit != 0 && bit != 1) throw InputError("fixed bit must be 0 or 1");
    if (n < 2) throw InputError("no sub-problem of a one-input type");
    const int jv = itype.blockOf(fixedVar);

    struct Block {
        int size;
        int origin;
        std::vector<int> vars;
    };
    std::vector<Block> blocks;
    for (int j = 0; j < itype.q(); ++j) {
        Block b{0, j, {}};
        for (int k = itype.blockStart(j); k < itype.blockStart(j) + itype.parts()[j]; ++k)
            if (k != fixedVar) b.vars.push_back(k);
        b.size = static_cast<int>(b.vars.size());
        if (b.size) blocks.push_back(std::move(b));
    }
    std::stable_sort(blocks.begin(), blocks.end(), [](const Block& a, const Block& b) { return a.size > b.size; });
    std::vector<int> parts, varOrder;
    for (const auto& b : blocks) {
        parts.push_back(b.size);
        varOrder.insert(varOrder.end(), b.vars.begin(), b.vars.end());
    }
    Subproblem sp;
    sp.subType = InteractionType(parts);
    sp.droppedBlock = itype.parts()[jv] == 1;
    const int m = n - 1;
    for (std::uint64_t i = 0; i < (std::uint64_t{1} << m); ++i) {
        std::uint64_t g = bit ? (std::uint64_t{1} << (n - fixedVar)) : 0;
        for (int s = 1; s <= m; ++s)
            if ((i >> (m - s)) & 1u) g |= std::uint64_t{1} << (n - varOrder[s - 1]);
        sp.subset.push_back(static_cast<int>(g));
    }
    return sp;
}

/// One induced chain per sub-solution on the indices with fixedVar = bit.
inline std::vector<InducedOrder> subproblemRefinements(const InteractionType& itype, int fixedVar, int bit,
                                                       const InteractionType& solvedType,
                                                       const SolutionSet& subSolutions) {
    const Subproblem sp = subproblem(itype, fixedVar, bit);
    if (!(solvedType == sp.subType))
        throw TypeMismatch("sub-problem has type (" + sp.subType.str() + "), solutions are for (" + solvedType.str() +
                           ")");
    std::vector<InducedOrder> out;
    for (const auto& s : subSolutions.extensions) {
        if (s.size() != sp.subset.size()) throw TypeMismatch("sub-solution length differs from sub-problem size");
        out.push_back({sp.subset, s});
    }
    return out;
}

/// The sub-problem chains as a search filter: a word is kept only if its
/// restriction to the subset is one of the sub-solutions.
inline ChainFilter subproblemFilter(const InteractionType& itype, int fixedVar, int bit,
                                    const InteractionType& solvedType, const SolutionSet& subSolutions) {
    const auto refinements = subproblemRefinements(itype, fixedVar, bit, solvedType, subSolutions);
    const Subproblem sp = subproblem(itype, fixedVar, bit);
    std::vector<std::vector<int>> chains;
    for (const auto& r : refinements) chains.push_back(r.order.word());
    return ChainFilter(itype.size(), sp.subset, chains);
}

}  // namespace lep
