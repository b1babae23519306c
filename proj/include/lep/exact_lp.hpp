#pragma once

// Certified conic feasibility: does alpha >= 0 with V alpha = v exist?
//
// Every answer carries a Farkas certificate that is re-checked in exact
// arithmetic before it is returned, so callers never rely on the pivoting
// path itself.

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "lep/detail/simplex.hpp"
#include "lep/errors.hpp"
#include "lep/rational.hpp"

namespace lep {

enum class Verdict { Member, NotMember };

struct FeasibilityCertificate {
    Verdict verdict = Verdict::NotMember;
    std::optional<RationalVector> membershipWeights;  // alpha, one entry per generator
    std::optional<RationalVector> separator;          // y, one entry per row

    bool member() const { return verdict == Verdict::Member; }
};

namespace detail {

/// Integer form of a certificate. Weights are weightNumerators / denominator;
/// the separator is primitive.
struct IntegerCertificate {
    bool member = false;
    std::vector<mpz_class> weightNumerators;
    mpz_class denominator = 1;
    std::vector<mpz_class> separator;
};

template <class Elem>
bool allZero(const Elem* v, std::size_t d) {
    for (std::size_t i = 0; i < d; ++i)
        if (v[i] != 0) return false;
    return true;
}

template <class Int>
IntegerCertificate toIntegerCertificate(const PhaseOneResult<Int>& r) {
    IntegerCertificate c;
    c.member = r.feasible;
    c.denominator = Arith<Int>::toMpz(r.denominator);
    c.weightNumerators.reserve(r.weightNumerators.size());
    for (const auto& w : r.weightNumerators) c.weightNumerators.push_back(Arith<Int>::toMpz(w));
    c.separator.reserve(r.separator.size());
    for (const auto& y : r.separator) c.separator.push_back(Arith<Int>::toMpz(y));
    if (!c.member) makePrimitive(c.separator);
    return c;
}

/// Exact conic feasibility on integer data. Tries the int64 tableau first and
/// reruns on GMP integers if any intermediate leaves the int64 range.
template <class Elem>
IntegerCertificate integerFeasible(const std::vector<const Elem*>& columns, const Elem* target, std::size_t d) {
    if (allZero(target, d)) {
        IntegerCertificate c;
        c.member = true;
        c.weightNumerators.assign(columns.size(), 0);
        return c;
    }
    try {
        return toIntegerCertificate(phaseOne<std::int64_t>(columns, target, d));
    } catch (const Overflow&) {
        return toIntegerCertificate(phaseOne<mpz_class>(columns, target, d));
    }
}

/// Writes the primitive integer multiple of v into out and returns the
/// positive factor c with out = c * v (1 for the zero vector).
inline Rational integerScaling(const RationalVector& v, std::vector<mpz_class>& out) {
    out = primitiveIntegerVector(v);
    for (std::size_t i = 0; i < v.dim(); ++i)
        if (sgn(v[i]) != 0) return Rational(out[i]) / v[i];
    return Rational(1);
}

}  // namespace detail

/// Exact membership test with a certificate for either outcome. The generator
/// matrix may have no columns (the cone is then {0}).
inline bool verifyCertificate(const RationalVector& target, const RationalMatrix& generators,
                              const FeasibilityCertificate& cert) {
    if (target.dim() != generators.rows()) return false;
    if (cert.verdict == Verdict::Member) {
        if (!cert.membershipWeights) return false;
        const auto& alpha = *cert.membershipWeights;
        if (alpha.dim() != generators.cols()) return false;
        for (const auto& a : alpha)
            if (sgn(a) < 0) return false;
        return generators.times(alpha) == target;
    }
    if (!cert.separator) return false;
    const auto& y = *cert.separator;
    if (y.dim() != generators.rows()) return false;
    for (const auto& col : generators.columns())
        if (sgn(y.dot(col)) < 0) return false;
    return sgn(y.dot(target)) < 0;
}

inline FeasibilityCertificate lpFeasible(const RationalVector& target, const RationalMatrix& generators) {
    if (target.dim() != generators.rows())
        throw DimensionMismatch("target dim " + std::to_string(target.dim()) + " differs from generator dim " +
                                std::to_string(generators.rows()));
    const std::size_t d = target.dim();
    const std::size_t k = generators.cols();

    std::vector<std::vector<mpz_class>> intColumns(k);
    std::vector<Rational> columnScale(k);
    for (std::size_t j = 0; j < k; ++j) columnScale[j] = detail::integerScaling(generators.column(j), intColumns[j]);
    std::vector<mpz_class> intTarget;
    const Rational targetScale = detail::integerScaling(target, intTarget);

    std::vector<const mpz_class*> ptrs;
    ptrs.reserve(k);
    for (const auto& c : intColumns) ptrs.push_back(c.data());
    const auto ic = detail::integerFeasible(ptrs, intTarget.data(), d);

    FeasibilityCertificate cert;
    if (ic.member) {
        cert.verdict = Verdict::Member;
        RationalVector alpha(k);
        for (std::size_t j = 0; j < k; ++j) {
            alpha[j] = Rational(ic.weightNumerators[j], ic.denominator) * columnScale[j] / targetScale;
            alpha[j].canonicalize();
        }
        cert.membershipWeights = std::move(alpha);
    } else {
        cert.verdict = Verdict::NotMember;
        cert.separator = toRationalVector(ic.separator);
    }
    if (!verifyCertificate(target, generators, cert))
        throw std::logic_error("exact LP produced a certificate that does not verify");
    return cert;
}

}  // namespace lep
