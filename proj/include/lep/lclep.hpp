#pragma once

// Enumeration of the admissible linear extensions of a partially ordered
// family of linear forms over a polyhedral cone domain.
//
// A word sigma is admissible when some xi satisfies u_q . xi > 0 on the
// domain forms and u_{sigma(k+1)} . xi > u_{sigma(k)} . xi for every k. The
// search extends partial words depth first and keeps, for each node, an exact
// integer point xi strictly inside the dual of the node's cone. A child whose
// new generator u' already has xi . u' > 0 is admissible with the same xi; only
// the remaining children cost an exact LP.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "lep/cone.hpp"
#include "lep/order.hpp"

namespace lep {

struct LinearForm {
    RationalVector coeffs;
};

struct LCLEPInstance {
    std::size_t dimension = 0;
    std::vector<LinearForm> forms;
    PartialOrder po;
    std::vector<LinearForm> domainForms;

    void validate() const {
        if (forms.empty()) throw InputError("instance has no forms");
        for (const auto& f : forms)
            if (f.coeffs.dim() != dimension) throw DimensionMismatch("form dim differs from instance dimension");
        for (const auto& f : domainForms)
            if (f.coeffs.dim() != dimension) throw DimensionMismatch("domain form dim differs from instance dimension");
        if (po.size() != forms.size()) throw DimensionMismatch("order size differs from number of forms");
    }
};

struct SolutionSet {
    std::vector<LinearExtension> extensions;  // sorted, no duplicates
    std::map<LinearExtension, RationalVector> witnesses;

    std::size_t size() const { return extensions.size(); }
    bool contains(const LinearExtension& s) const {
        return std::binary_search(extensions.begin(), extensions.end(), s);
    }
};

/// Allows only words whose restriction to `subset` is a prefix of one of the
/// given chains. Several filters act as a conjunction.
class ChainFilter {
public:
    ChainFilter() = default;

    /// `subset[j]` is the global index of local element j; each chain is a
    /// permutation of the local elements.
    ChainFilter(std::size_t universe, const std::vector<int>& subset, const std::vector<std::vector<int>>& chains)
        : local_(universe, -1), width_(subset.size()) {
        for (std::size_t j = 0; j < subset.size(); ++j) {
            if (subset[j] < 0 || static_cast<std::size_t>(subset[j]) >= universe || local_[subset[j]] != -1)
                throw InputError("chain filter subset is not a set of indices");
            local_[subset[j]] = static_cast<int>(j);
        }
        children_.assign(width_, -1);
        for (const auto& c : chains) {
            if (c.size() != width_) throw DimensionMismatch("chain length differs from subset size");
            int node = 0;
            for (int e : c) {
                if (e < 0 || static_cast<std::size_t>(e) >= width_) throw InputError("chain entry out of range");
                const std::size_t slot = node * width_ + e;
                if (children_[slot] == -1) {
                    children_[slot] = static_cast<int>(children_.size() / width_);
                    children_.resize(children_.size() + width_, -1);
                }
                node = children_[slot];
            }
        }
        empty_ = chains.empty();
    }

    /// Trie node after placing global element `e` at node `node`; -1 rejects.
    int step(int node, int e) const {
        const int l = local_[e];
        if (l < 0) return node;
        if (empty_) return -1;
        return children_[node * width_ + l];
    }
    bool involves(int e) const { return local_[e] >= 0; }
    std::size_t universe() const { return local_.size(); }

private:
    std::vector<int> local_;
    std::size_t width_ = 0;
    std::vector<int> children_;
    bool empty_ = true;
};

struct SolveOptions {
    bool witnesses = false;
    std::vector<ChainFilter> filters;
    unsigned jobs = 1;
};

/// cone(V_0): domain forms followed by cover differences u_b - u_a.
inline ConeSpec baseCone(const LCLEPInstance& inst) {
    inst.validate();
    ConeSpec cone(inst.dimension);
    for (const auto& q : inst.domainForms) cone.add(q.coeffs);
    for (auto [a, b] : inst.po.covers()) cone.add(inst.forms[b].coeffs - inst.forms[a].coeffs);
    return cone;
}

namespace detail {

/// A zero domain form asks for 0 > 0, so the domain is empty.
inline bool hasZeroDomainForm(const LCLEPInstance& inst) {
    for (const auto& q : inst.domainForms)
        if (q.coeffs.isZero()) return true;
    return false;
}

/// Integer data of an instance: every form scaled by one common positive
/// denominator, then each difference made primitive.
template <class Elem>
struct IntegerInstance {
    std::size_t d = 0;
    std::size_t count = 0;
    std::vector<std::vector<Elem>> base;  // V_0 generators, nonzero
    std::vector<Elem> diffs;              // (i, j) -> primitive(u_i - u_j)
    std::vector<char> diffZero;

    const Elem* diff(int i, int j) const { return &diffs[(static_cast<std::size_t>(i) * count + j) * d]; }
    bool zero(int i, int j) const { return diffZero[static_cast<std::size_t>(i) * count + j] != 0; }
};

inline mpz_class commonDenominator(const std::vector<const RationalVector*>& vs) {
    mpz_class l = 1;
    for (const auto* v : vs)
        for (const auto& x : *v) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
    return l;
}

struct RawInteger {
    std::size_t d = 0;
    std::size_t count = 0;
    std::vector<std::vector<mpz_class>> base;
    std::vector<std::vector<mpz_class>> diffs;
    mpz_class maxAbs = 0;
};

inline RawInteger integerData(const LCLEPInstance& inst) {
    RawInteger raw;
    raw.d = inst.dimension;
    raw.count = inst.forms.size();
    std::vector<const RationalVector*> all;
    for (const auto& f : inst.forms) all.push_back(&f.coeffs);
    const mpz_class l = commonDenominator(all);
    std::vector<std::vector<mpz_class>> scaled(raw.count, std::vector<mpz_class>(raw.d));
    for (std::size_t i = 0; i < raw.count; ++i)
        for (std::size_t r = 0; r < raw.d; ++r) {
            const auto& x = inst.forms[i].coeffs[r];
            scaled[i][r] = x.get_num() * (l / x.get_den());
        }
    auto track = [&](const std::vector<mpz_class>& v) {
        for (const auto& x : v)
            if (abs(x) > raw.maxAbs) raw.maxAbs = abs(x);
    };
    const ConeSpec cone = baseCone(inst);
    for (const auto& g : cone.generators().columns()) {
        raw.base.push_back(primitiveIntegerVector(g));
        track(raw.base.back());
    }
    raw.diffs.resize(raw.count * raw.count);
    for (std::size_t i = 0; i < raw.count; ++i)
        for (std::size_t j = 0; j < raw.count; ++j) {
            auto& v = raw.diffs[i * raw.count + j];
            v.resize(raw.d);
            for (std::size_t r = 0; r < raw.d; ++r) v[r] = scaled[i][r] - scaled[j][r];
            makePrimitive(v);
            track(v);
        }
    return raw;
}

template <class Elem>
Elem convert(const mpz_class& x) {
    if constexpr (std::is_same_v<Elem, mpz_class>) {
        return x;
    } else {
        return static_cast<Elem>(x.get_si());
    }
}

template <class Elem>
IntegerInstance<Elem> specialize(const RawInteger& raw) {
    IntegerInstance<Elem> ii;
    ii.d = raw.d;
    ii.count = raw.count;
    for (const auto& g : raw.base) {
        std::vector<Elem> v;
        for (const auto& x : g) v.push_back(convert<Elem>(x));
        ii.base.push_back(std::move(v));
    }
    ii.diffs.reserve(raw.count * raw.count * raw.d);
    ii.diffZero.resize(raw.count * raw.count);
    for (std::size_t p = 0; p < raw.diffs.size(); ++p) {
        bool zero = true;
        for (const auto& x : raw.diffs[p]) {
            ii.diffs.push_back(convert<Elem>(x));
            zero = zero && x == 0;
        }
        ii.diffZero[p] = zero;
    }
    return ii;
}

using Word = std::vector<int>;
using Point = std::vector<mpz_class>;
/// Called for every word reaching the target depth with an interior point of
/// its cone. Returning false stops the search.
using WordVisitor = std::function<bool(const Word&, const Point&)>;

template <class Elem>
class Enumerator {
public:
    Enumerator(const LCLEPInstance& inst, const IntegerInstance<Elem>& data, const std::vector<ChainFilter>& filters)
        : inst_(inst), data_(data), filters_(filters) {
        const std::size_t n = data_.count;
        predCount_.resize(n);
        successors_.resize(n);
        for (auto [a, b] : inst.po.covers()) {
            ++predCount_[b];
            successors_[a].push_back(b);
        }
        std::vector<const Elem*> cols;
        for (const auto& g : data_.base) cols.push_back(g.data());
        auto scan = scanPointed(cols, data_.d);
        rootPointed_ = scan.pointed && !hasZeroDomainForm(inst);
        rootInterior_ = std::move(scan.interior);
    }

    bool rootPointed() const { return rootPointed_; }

    /// Walks `prefix`, then enumerates all admissible extensions of it up to
    /// `maxDepth` elements. Returns false if the prefix itself is not viable.
    bool explore(const Word& prefix, std::size_t maxDepth, const WordVisitor& visit) {
        if (!rootPointed_) return false;
        const std::size_t n = data_.count;
        if (prefix.size() > n) return false;
        maxDepth = std::min(maxDepth, n);
        reset();
        for (int e : prefix) {
            if (e < 0 || static_cast<std::size_t>(e) >= n || placed_[e]) return false;
            if (remaining_[e] != 0) return false;
            std::vector<int> nodes;
            if (!filterStep(e, nodes)) return false;
            const std::size_t depth = word_.size();
            Point child;
            if (!admissible(e, depth, interiors_[depth], child, false)) return false;
            push(e, std::move(nodes), std::move(child));
        }
        visit_ = &visit;
        stopped_ = false;
        if (prefix.size() >= maxDepth) {
            (*visit_)(word_, interiors_[word_.size()]);
            return true;
        }
        maxDepth_ = maxDepth;
        dfs();
        return true;
    }

    std::size_t lpCalls() const { return lpCalls_; }

private:
    void reset() {
        const std::size_t n = data_.count;
        placed_.assign(n, 0);
        remaining_ = predCount_;
        word_.clear();
        cols_.clear();
        for (const auto& g : data_.base) cols_.push_back(g.data());
        interiors_.assign(n + 1, Point{});
        interiors_[0] = rootInterior_;
        if (interiors_[0].empty()) interiors_[0].assign(data_.d, 0);
        pools_.assign(n + 1, {});
        filterNodes_.assign(1, std::vector<int>(filters_.size(), 0));
    }

    bool filterStep(int e, std::vector<int>& nodes) const {
        nodes = filterNodes_.back();
        for (std::size_t f = 0; f < filters_.size(); ++f) {
            nodes[f] = filters_[f].step(nodes[f], e);
            if (nodes[f] < 0) return false;
        }
        return true;
    }

    // Decides whether appending e at `depth` keeps the cone pointed, and if so
    // writes an interior point of the child's cone.
    bool admissible(int e, std::size_t depth, const Point& xi, Point& child, bool usePool) {
        if (depth == 0) {
            child = xi;
            return true;
        }
        const int last = word_.back();
        if (data_.zero(e, last)) return false;
        const Elem* u = data_.diff(e, last);
        if (sgn(dot(xi, u)) > 0) {
            child = xi;
            return true;
        }
        if (usePool) {
            for (const auto& p : pools_[depth]) {
                if (sgn(dot(p, u)) > 0) {
                    child = p;
                    return true;
                }
            }
        }
        ++lpCalls_;
        const auto cert = integerFeasible(cols_, data_.diff(last, e), data_.d);
        if (cert.member) return false;
        child = shiftInterior(xi, cert.separator, u);
        if (usePool) pools_[depth].push_back(child);
        return true;
    }

    void push(int e, std::vector<int> nodes, Point child) {
        if (!word_.empty()) cols_.push_back(data_.diff(e, word_.back()));
        word_.push_back(e);
        placed_[e] = 1;
        for (int s : successors_[e]) --remaining_[s];
        filterNodes_.push_back(std::move(nodes));
        interiors_[word_.size()] = std::move(child);
    }

    void pop() {
        const int e = word_.back();
        word_.pop_back();
        if (!word_.empty()) cols_.pop_back();
        placed_[e] = 0;
        for (int s : successors_[e]) ++remaining_[s];
        filterNodes_.pop_back();
    }

    void dfs() {
        const std::size_t depth = word_.size();
        if (depth == maxDepth_) {
            if (!(*visit_)(word_, interiors_[depth])) stopped_ = true;
            return;
        }
        pools_[depth].clear();
        const std::size_t n = data_.count;
        std::vector<int> nodes;
        Point child;
        for (std::size_t i = 0; i < n && !stopped_; ++i) {
            const int e = static_cast<int>(i);
            if (placed_[e] || remaining_[e] != 0) continue;
            if (!filterStep(e, nodes)) continue;
            if (!admissible(e, depth, interiors_[depth], child, true)) continue;
            push(e, std::move(nodes), std::move(child));
            dfs();
            pop();
        }
    }

    const LCLEPInstance& inst_;
    const IntegerInstance<Elem>& data_;
    const std::vector<ChainFilter>& filters_;
    std::vector<int> predCount_;
    std::vector<std::vector<int>> successors_;
    bool rootPointed_ = false;
    Point rootInterior_;

    std::vector<char> placed_;
    std::vector<int> remaining_;
    Word word_;
    std::vector<const Elem*> cols_;
    std::vector<Point> interiors_;
    std::vector<std::vector<Point>> pools_;
    std::vector<std::vector<int>> filterNodes_;
    const WordVisitor* visit_ = nullptr;
    std::size_t maxDepth_ = 0;
    bool stopped_ = false;
    std::size_t lpCalls_ = 0;
};

/// Integer data in the narrowest representation that holds it.
class PreparedInstance {
public:
    explicit PreparedInstance(const LCLEPInstance& inst) : inst_(inst) {
        inst.validate();
        const RawInteger raw = integerData(inst);
        if (raw.maxAbs < (mpz_class(1) << 31))
            data_ = specialize<std::int64_t>(raw);
        else
            data_ = specialize<mpz_class>(raw);
    }

    const LCLEPInstance& instance() const { return inst_; }

    /// Runs `f(Enumerator&)` with a fresh enumerator over this data.
    template <class F>
    auto withEnumerator(const std::vector<ChainFilter>& filters, F&& f) const {
        for (const auto& cf : filters)
            if (cf.universe() != inst_.forms.size()) throw DimensionMismatch("chain filter universe differs");
        return std::visit(
            [&](const auto& data) {
                using Data = std::decay_t<decltype(data)>;
                using Elem = std::decay_t<decltype(data.diffs[0])>;
                static_assert(std::is_same_v<Data, IntegerInstance<Elem>>);
                Enumerator<Elem> e(inst_, data, filters);
                return f(e);
            },
            data_);
    }

private:
    const LCLEPInstance& inst_;
    std::variant<IntegerInstance<std::int64_t>, IntegerInstance<mpz_class>> data_;
};

inline void finalize(SolutionSet& s) {
    std::sort(s.extensions.begin(), s.extensions.end());
    s.extensions.erase(std::unique(s.extensions.begin(), s.extensions.end()), s.extensions.end());
}

/// Solves the subtrees below each prefix, distributing prefixes over `jobs`
/// threads. Prefixes are assumed pairwise non-overlapping.
inline SolutionSet solveUnder(const PreparedInstance& prep, const std::vector<Word>& prefixes,
                              const SolveOptions& opt) {
    const std::size_t n = prep.instance().forms.size();
    std::vector<SolutionSet> partial(prefixes.size());
    auto runOne = [&](std::size_t p) {
        SolutionSet& out = partial[p];
        prep.withEnumerator(opt.filters, [&](auto& en) {
            WordVisitor v = [&](const Word& w, const Point& xi) {
                LinearExtension s(w);
                if (opt.witnesses) out.witnesses.emplace(s, toRationalVector(xi));
                out.extensions.push_back(std::move(s));
                return true;
            };
            en.explore(prefixes[p], n, v);
            return 0;
        });
    };
    const unsigned jobs = std::max(1u, opt.jobs);
    if (jobs == 1 || prefixes.size() <= 1) {
        for (std::size_t p = 0; p < prefixes.size(); ++p) runOne(p);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        std::mutex errMutex;
        std::exception_ptr err;
        for (unsigned t = 0; t < jobs; ++t) {
            pool.emplace_back([&] {
                for (;;) {
                    const std::size_t p = next.fetch_add(1);
                    if (p >= prefixes.size()) return;
                    try {
                        runOne(p);
                    } catch (...) {
                        std::lock_guard<std::mutex> lock(errMutex);
                        if (!err) err = std::current_exception();
                    }
                }
            });
        }
        for (auto& th : pool) th.join();
        if (err) std::rethrow_exception(err);
    }
    SolutionSet all;
    for (auto& s : partial) {
        for (auto& e : s.extensions) all.extensions.push_back(std::move(e));
        for (auto& [k, v] : s.witnesses) all.witnesses.insert_or_assign(k, std::move(v));
    }
    finalize(all);
    return all;
}

inline std::vector<Word> viablePrefixes(const PreparedInstance& prep, const std::vector<ChainFilter>& filters,
                                        const Word& start, std::size_t depth) {
    std::vector<Word> out;
    prep.withEnumerator(filters, [&](auto& en) {
        WordVisitor v = [&](const Word& w, const Point&) {
            out.push_back(w);
            return true;
        };
        en.explore(start, depth, v);
        return 0;
    });
    return out;
}

}  // namespace detail

/// All admissible partial words of length min(depth, K+1), lexicographic.
inline std::vector<std::vector<int>> enumeratePrefixes(const LCLEPInstance& inst, std::size_t depth,
                                                       const std::vector<ChainFilter>& filters = {}) {
    detail::PreparedInstance prep(inst);
    return detail::viablePrefixes(prep, filters, {}, depth);
}

inline SolutionSet solve(const LCLEPInstance& inst, const SolveOptions& opt) {
    detail::PreparedInstance prep(inst);
    if (opt.jobs <= 1) return detail::solveUnder(prep, {detail::Word{}}, opt);
    // Split deep enough that every worker gets several subtrees.
    std::vector<detail::Word> prefixes{detail::Word{}};
    for (std::size_t depth = 1; depth <= inst.forms.size() && prefixes.size() < 8 * opt.jobs; ++depth)
        prefixes = detail::viablePrefixes(prep, opt.filters, {}, depth);
    return detail::solveUnder(prep, prefixes, opt);
}

inline SolutionSet solve(const LCLEPInstance& inst, bool emitWitnesses = false) {
    SolveOptions opt;
    opt.witnesses = emitWitnesses;
    return solve(inst, opt);
}

/// Number of admissible extensions without materializing them.
inline std::uint64_t countSolutions(const LCLEPInstance& inst, const std::vector<ChainFilter>& filters = {}) {
    detail::PreparedInstance prep(inst);
    std::uint64_t count = 0;
    prep.withEnumerator(filters, [&](auto& en) {
        detail::WordVisitor v = [&](const detail::Word&, const detail::Point&) {
            ++count;
            return true;
        };
        en.explore({}, inst.forms.size(), v);
        return 0;
    });
    return count;
}

/// Streams every admissible extension below `prefix` in lexicographic order.
/// Returns false if the prefix is not viable.
inline bool forEachSolution(const LCLEPInstance& inst, const std::vector<int>& prefix,
                            const std::function<bool(const LinearExtension&, const RationalVector*)>& f,
                            bool witnesses = false, const std::vector<ChainFilter>& filters = {}) {
    detail::PreparedInstance prep(inst);
    return prep.withEnumerator(filters, [&](auto& en) {
        detail::WordVisitor v = [&](const detail::Word& w, const detail::Point& xi) {
            if (witnesses) {
                const RationalVector r = toRationalVector(xi);
                return f(LinearExtension(w), &r);
            }
            return f(LinearExtension(w), nullptr);
        };
        return en.explore(prefix, inst.forms.size(), v);
    });
}

struct SigmaCheck {
    bool admissible = false;
    std::optional<RationalVector> witness;
};

/// Single pointedness test of V_sigma = V_0 plus consecutive differences.
inline SigmaCheck checkSigma(const LCLEPInstance& inst, const LinearExtension& sigma) {
    if (sigma.size() != inst.forms.size()) throw DimensionMismatch("extension size differs from number of forms");
    ConeSpec cone = baseCone(inst);
    if (detail::hasZeroDomainForm(inst)) return {};
    for (std::size_t k = 1; k < sigma.size(); ++k) {
        const RationalVector u = inst.forms[sigma[k]].coeffs - inst.forms[sigma[k - 1]].coeffs;
        if (u.isZero()) return {};
        cone.add(u);
    }
    auto r = checkPointed(cone);
    SigmaCheck out;
    out.admissible = r.pointed;
    if (r.pointed) {
        out.witness = r.interior ? std::move(*r.interior) : RationalVector(inst.dimension);
    }
    return out;
}

/// Exact check that xi lies in Xi_sigma.
inline bool witnessValid(const LCLEPInstance& inst, const LinearExtension& sigma, const RationalVector& xi) {
    if (xi.dim() != inst.dimension || sigma.size() != inst.forms.size()) return false;
    for (const auto& q : inst.domainForms)
        if (sgn(q.coeffs.dot(xi)) <= 0) return false;
    for (std::size_t k = 1; k < sigma.size(); ++k)
        if (inst.forms[sigma[k]].coeffs.dot(xi) <= inst.forms[sigma[k - 1]].coeffs.dot(xi)) return false;
    return true;
}

/// Union of the subtrees below each prefix. The prefixes must be pairwise
/// non-overlapping and every admissible extension must lie below one of them.
inline SolutionSet solvePartitioned(const LCLEPInstance& inst, const std::vector<std::vector<int>>& prefixes,
                                    const SolveOptions& opt = {}) {
    const std::size_t n = inst.forms.size();
    for (const auto& p : prefixes) {
        std::vector<char> seen(n, 0);
        for (int e : p) {
            if (e < 0 || static_cast<std::size_t>(e) >= n || seen[e])
                throw InvalidPartition("prefix is not a partial word over the forms");
            seen[e] = 1;
        }
    }
    for (std::size_t a = 0; a < prefixes.size(); ++a)
        for (std::size_t b = 0; b < prefixes.size(); ++b) {
            if (a == b) continue;
            const auto& x = prefixes[a];
            const auto& y = prefixes[b];
            if (x.size() <= y.size() && std::equal(x.begin(), x.end(), y.begin()))
                throw InvalidPartition("prefixes overlap");
        }

    detail::PreparedInstance prep(inst);
    // Every viable word that neither extends nor is extended by a prefix must
    // have no admissible completion.
    std::function<void(const detail::Word&)> cover = [&](const detail::Word& w) {
        bool isPrefixOfSome = false;
        for (const auto& p : prefixes) {
            if (p.size() <= w.size() && std::equal(p.begin(), p.end(), w.begin())) return;
            if (p.size() > w.size() && std::equal(w.begin(), w.end(), p.begin())) isPrefixOfSome = true;
        }
        if (isPrefixOfSome) {
            for (const auto& c : detail::viablePrefixes(prep, opt.filters, w, w.size() + 1)) cover(c);
            return;
        }
        bool found = false;
        prep.withEnumerator(opt.filters, [&](auto& en) {
            detail::WordVisitor v = [&](const detail::Word&, const detail::Point&) {
                found = true;
                return false;
            };
            en.explore(w, n, v);
            return 0;
        });
        if (found) throw InvalidPartition("prefixes do not cover every admissible extension");
    };
    cover({});
    return detail::solveUnder(prep, prefixes, opt);
}

}  // namespace lep
