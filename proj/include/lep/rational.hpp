#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <initializer_list>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lep/errors.hpp"

namespace lep {

/// Exact rational scalar. GMP keeps every value canonical (lowest terms,
/// positive denominator) after each arithmetic operation.
using Rational = mpq_class;
using Integer = mpz_class;

/// Parses "p/q", "p" or "-p/q". Throws InputError on malformed text or a zero
/// denominator.
inline Rational parseRational(std::string_view text) {
    std::string s(text);
    if (s.empty()) throw InputError("empty rational literal");
    Rational r;
    if (r.set_str(s, 10) != 0) throw InputError("malformed rational literal '" + s + "'");
    if (r.get_den() == 0) throw InputError("zero denominator in '" + s + "'");
    r.canonicalize();
    return r;
}

/// Always "p/q", including "n/1" for integers.
inline std::string formatRational(const Rational& r) {
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

class RationalVector {
public:
    RationalVector() = default;
    explicit RationalVector(std::size_t dim) : entries_(dim) {}
    explicit RationalVector(std::vector<Rational> entries) : entries_(std::move(entries)) {}
    RationalVector(std::initializer_list<Rational> entries) : entries_(entries) {}

    static RationalVector fromInts(std::initializer_list<long> values) {
        RationalVector v;
        v.entries_.reserve(values.size());
        for (long x : values) v.entries_.emplace_back(x);
        return v;
    }

    std::size_t dim() const { return entries_.size(); }
    Rational& operator[](std::size_t i) { return entries_[i]; }
    const Rational& operator[](std::size_t i) const { return entries_[i]; }

    auto begin() const { return entries_.begin(); }
    auto end() const { return entries_.end(); }
    auto begin() { return entries_.begin(); }
    auto end() { return entries_.end(); }

    const std::vector<Rational>& entries() const { return entries_; }

    bool isZero() const {
        for (const auto& x : entries_)
            if (sgn(x) != 0) return false;
        return true;
    }

    Rational dot(const RationalVector& other) const {
        if (other.dim() != dim()) throw DimensionMismatch("dot product of vectors with different dims");
        Rational acc = 0;
        for (std::size_t i = 0; i < dim(); ++i) acc += entries_[i] * other.entries_[i];
        return acc;
    }

    RationalVector operator-() const {
        RationalVector r(dim());
        for (std::size_t i = 0; i < dim(); ++i) r.entries_[i] = -entries_[i];
        return r;
    }

    RationalVector operator-(const RationalVector& other) const {
        if (other.dim() != dim()) throw DimensionMismatch("difference of vectors with different dims");
        RationalVector r(dim());
        for (std::size_t i = 0; i < dim(); ++i) r.entries_[i] = entries_[i] - other.entries_[i];
        return r;
    }

    RationalVector operator+(const RationalVector& other) const {
        if (other.dim() != dim()) throw DimensionMismatch("sum of vectors with different dims");
        RationalVector r(dim());
        for (std::size_t i = 0; i < dim(); ++i) r.entries_[i] = entries_[i] + other.entries_[i];
        return r;
    }

    RationalVector scaled(const Rational& c) const {
        RationalVector r(dim());
        for (std::size_t i = 0; i < dim(); ++i) r.entries_[i] = entries_[i] * c;
        return r;
    }

    friend bool operator==(const RationalVector& a, const RationalVector& b) {
        return a.entries_ == b.entries_;
    }

private:
    std::vector<Rational> entries_;
};

inline std::ostream& operator<<(std::ostream& os, const RationalVector& v) {
    os << '(';
    for (std::size_t i = 0; i < v.dim(); ++i) {
        if (i) os << ", ";
        os << v[i].get_str();
    }
    return os << ')';
}

/// Column matrix. The row dimension is stored explicitly so that a matrix
/// with no columns still knows its ambient dimension.
class RationalMatrix {
public:
    explicit RationalMatrix(std::size_t rows = 0) : rows_(rows) {}
    RationalMatrix(std::size_t rows, std::vector<RationalVector> columns) : rows_(rows) {
        for (auto& c : columns) addColumn(std::move(c));
    }

    static RationalMatrix fromColumns(std::vector<RationalVector> columns) {
        if (columns.empty()) throw DimensionMismatch("cannot infer dimension of an empty column list");
        const std::size_t rows = columns.front().dim();
        return RationalMatrix(rows, std::move(columns));
    }

    void addColumn(RationalVector c) {
        if (c.dim() != rows_) throw DimensionMismatch("column dim differs from matrix row count");
        columns_.push_back(std::move(c));
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return columns_.size(); }
    const RationalVector& column(std::size_t j) const { return columns_[j]; }
    const std::vector<RationalVector>& columns() const { return columns_; }

    RationalVector times(const RationalVector& weights) const {
        if (weights.dim() != cols()) throw DimensionMismatch("weight count differs from column count");
        RationalVector r(rows_);
        for (std::size_t j = 0; j < cols(); ++j) {
            if (sgn(weights[j]) == 0) continue;
            for (std::size_t i = 0; i < rows_; ++i) r[i] += columns_[j][i] * weights[j];
        }
        return r;
    }

private:
    std::size_t rows_ = 0;
    std::vector<RationalVector> columns_;
};

/// Positive multiple of `v` with integer entries and unit content (gcd 1).
/// The zero vector maps to the zero vector.
inline std::vector<Integer> primitiveIntegerVector(const RationalVector& v) {
    Integer l = 1;
    for (const auto& x : v) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
    std::vector<Integer> out(v.dim());
    Integer g = 0;
    for (std::size_t i = 0; i < v.dim(); ++i) {
        out[i] = v[i].get_num() * (l / v[i].get_den());
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), out[i].get_mpz_t());
    }
    if (g > 1)
        for (auto& x : out) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
    return out;
}

inline void makePrimitive(std::vector<Integer>& v) {
    Integer g = 0;
    for (const auto& x : v) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
    if (g > 1)
        for (auto& x : v) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
}

inline RationalVector toRationalVector(std::span<const Integer> v) {
    RationalVector r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) r[i] = Rational(v[i]);
    return r;
}

}  // namespace lep
