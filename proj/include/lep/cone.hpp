#pragma once

#include <optional>
#include <string>
#include <type_traits>
#include <vector>

#include "lep/exact_lp.hpp"

namespace lep {

/// Finitely generated cone in R^d. Zero generators are dropped on
/// construction; strippedZeros() reports how many were dropped.
class ConeSpec {
public:
    explicit ConeSpec(std::size_t ambientDim) : generators_(ambientDim) {}

    ConeSpec(std::size_t ambientDim, const std::vector<RationalVector>& generators) : generators_(ambientDim) {
        for (const auto& g : generators) add(g);
    }

    explicit ConeSpec(const RationalMatrix& generators) : generators_(generators.rows()) {
        for (const auto& g : generators.columns()) add(g);
    }

    void add(const RationalVector& g) {
        if (g.dim() != ambientDim()) throw DimensionMismatch("generator dim differs from cone dim");
        if (g.isZero()) {
            ++strippedZeros_;
            return;
        }
        generators_.addColumn(g);
    }

    std::size_t ambientDim() const { return generators_.rows(); }
    std::size_t size() const { return generators_.cols(); }
    const RationalMatrix& generators() const { return generators_; }
    std::size_t strippedZeros() const { return strippedZeros_; }

private:
    RationalMatrix generators_;
    std::size_t strippedZeros_ = 0;
};

struct PointednessResult {
    bool pointed = true;
    std::optional<std::size_t> failureIndex;
    /// Present when pointed: xi with xi . v_i > 0 for every generator.
    std::optional<RationalVector> interior;
};

namespace detail {

template <class Elem>
mpz_class dot(const std::vector<mpz_class>& p, const Elem* v) {
    mpz_class acc = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (v[i] == 0) continue;
        if constexpr (std::is_same_v<Elem, mpz_class>) {
            mpz_addmul(acc.get_mpz_t(), p[i].get_mpz_t(), v[i].get_mpz_t());
        } else {
            mpz_class t = p[i];
            t *= static_cast<long>(v[i]);
            acc += t;
        }
    }
    return acc;
}

/// Given xi strictly positive on cone(V'), a separator y (y.v >= 0 on V',
/// y.u > 0) and the new generator u with xi.u <= 0, returns a point strictly
/// positive on V' and on u.
template <class Elem>
std::vector<mpz_class> shiftInterior(const std::vector<mpz_class>& xi, const std::vector<mpz_class>& y,
                                     const Elem* u) {
    const mpz_class a = dot(xi, u);
    const mpz_class b = dot(y, u);
    const mpz_class c = b - a;
    std::vector<mpz_class> z(xi.size());
    for (std::size_t i = 0; i < xi.size(); ++i) z[i] = b * xi[i] + c * y[i];
    makePrimitive(z);
    return z;
}

struct PointedScan {
    bool pointed = true;
    std::size_t failureIndex = 0;
    std::vector<mpz_class> interior;
};

/// Incremental pointedness test: keeps an interior functional of the partial
/// cone, so a generator on its positive side is certified without an LP.
template <class Elem>
PointedScan scanPointed(const std::vector<const Elem*>& columns, std::size_t d) {
    PointedScan scan;
    scan.interior.assign(d, 0);
    std::vector<const Elem*> partial;
    std::vector<Elem> negated(d);
    for (std::size_t i = 0; i < columns.size(); ++i) {
        const Elem* v = columns[i];
        if (partial.empty()) {
            for (std::size_t r = 0; r < d; ++r) scan.interior[r] = mpz_class(v[r]);
            makePrimitive(scan.interior);
            partial.push_back(v);
            continue;
        }
        if (sgn(dot(scan.interior, v)) > 0) {
            partial.push_back(v);
            continue;
        }
        for (std::size_t r = 0; r < d; ++r) negated[r] = -v[r];
        const auto cert = integerFeasible(partial, negated.data(), d);
        if (cert.member) {
            scan.pointed = false;
            scan.failureIndex = i;
            scan.interior.clear();
            return scan;
        }
        scan.interior = shiftInterior(scan.interior, cert.separator, v);
        partial.push_back(v);
    }
    return scan;
}

}  // namespace detail

inline FeasibilityCertificate inCone(const RationalVector& v, const ConeSpec& cone) {
    if (v.dim() != cone.ambientDim()) throw DimensionMismatch("vector dim differs from cone dim");
    return lpFeasible(v, cone.generators());
}

/// Processes generators in order; for each one tests whether its negation
/// already lies in the cone of its predecessors.
inline PointednessResult checkPointed(const ConeSpec& cone) {
    const std::size_t d = cone.ambientDim();
    std::vector<std::vector<mpz_class>> ints(cone.size());
    std::vector<const mpz_class*> ptrs;
    for (std::size_t j = 0; j < cone.size(); ++j) {
        detail::integerScaling(cone.generators().column(j), ints[j]);
        ptrs.push_back(ints[j].data());
    }
    const auto scan = detail::scanPointed(ptrs, d);
    PointednessResult result;
    result.pointed = scan.pointed;
    if (!scan.pointed) {
        result.failureIndex = scan.failureIndex;
    } else {
        result.interior = toRationalVector(scan.interior);
    }
    return result;
}

/// A functional strictly positive on every generator of a pointed cone.
inline RationalVector interiorFunctional(const ConeSpec& cone) {
    auto r = checkPointed(cone);
    if (!r.pointed) throw NotPointed("cone is not pointed (generator " + std::to_string(*r.failureIndex) + ")");
    const auto& xi = *r.interior;
    for (const auto& g : cone.generators().columns())
        if (sgn(xi.dot(g)) <= 0) throw std::logic_error("interior functional failed exact check");
    return xi;
}

}  // namespace lep
