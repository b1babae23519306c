#pragma once

// Fraction-free Phase-I simplex (Bland's rule) over an integer tableau.
//
// The tableau is kept in Bareiss form: every stored entry is the true entry
// multiplied by the current common denominator D (> 0), and each pivot
// divides exactly by the previous D. Two integer back-ends exist: int64 with
// 128-bit intermediates that throws detail::Overflow when a result leaves the
// int64 range, and GMP integers that never overflow.

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

namespace lep::detail {

struct Overflow : std::exception {
    const char* what() const noexcept override { return "int64 tableau overflow"; }
};

template <class Int>
struct Arith;

template <>
struct Arith<std::int64_t> {
    using Int = std::int64_t;

    static Int narrow(__int128 v) {
        if (v > std::numeric_limits<Int>::max() || v < std::numeric_limits<Int>::min()) throw Overflow{};
        return static_cast<Int>(v);
    }
    static Int from(std::int64_t v) { return v; }
    static Int from(const mpz_class& v) {
        if (!v.fits_slong_p()) throw Overflow{};
        return v.get_si();
    }
    // out = (x * p - f * y) / D, exact.
    static void combine(Int& out, Int x, Int p, Int f, Int y, Int D) {
        const __int128 v = static_cast<__int128>(x) * p - static_cast<__int128>(f) * y;
        out = narrow(v / D);
    }
    // out = x * p / D, exact.
    static void scale(Int& out, Int x, Int p, Int D) {
        out = narrow(static_cast<__int128>(x) * p / D);
    }
    // sign(a*e - c*b)
    static int crossCompare(Int a, Int b, Int c, Int e) {
        const __int128 l = static_cast<__int128>(a) * e;
        const __int128 r = static_cast<__int128>(c) * b;
        return (l > r) - (l < r);
    }
    static int sign(Int v) { return (v > 0) - (v < 0); }
    static Int negate(Int v) { return narrow(-static_cast<__int128>(v)); }
    static Int sub(Int a, Int b) { return narrow(static_cast<__int128>(a) - b); }
    static Int add(Int a, Int b) { return narrow(static_cast<__int128>(a) + b); }
    static mpz_class toMpz(Int v) { return mpz_class(static_cast<long>(v)); }
};

template <>
struct Arith<mpz_class> {
    using Int = mpz_class;

    static Int from(std::int64_t v) { return mpz_class(static_cast<long>(v)); }
    static Int from(const mpz_class& v) { return v; }
    static void combine(Int& out, const Int& x, const Int& p, const Int& f, const Int& y, const Int& D) {
        thread_local mpz_class tmp;
        mpz_mul(tmp.get_mpz_t(), x.get_mpz_t(), p.get_mpz_t());
        mpz_submul(tmp.get_mpz_t(), f.get_mpz_t(), y.get_mpz_t());
        mpz_divexact(out.get_mpz_t(), tmp.get_mpz_t(), D.get_mpz_t());
    }
    static void scale(Int& out, const Int& x, const Int& p, const Int& D) {
        thread_local mpz_class tmp;
        mpz_mul(tmp.get_mpz_t(), x.get_mpz_t(), p.get_mpz_t());
        mpz_divexact(out.get_mpz_t(), tmp.get_mpz_t(), D.get_mpz_t());
    }
    static int crossCompare(const Int& a, const Int& b, const Int& c, const Int& e) {
        thread_local mpz_class l, r;
        mpz_mul(l.get_mpz_t(), a.get_mpz_t(), e.get_mpz_t());
        mpz_mul(r.get_mpz_t(), c.get_mpz_t(), b.get_mpz_t());
        return mpz_cmp(l.get_mpz_t(), r.get_mpz_t()) > 0 ? 1 : (mpz_cmp(l.get_mpz_t(), r.get_mpz_t()) < 0 ? -1 : 0);
    }
    static int sign(const Int& v) { return sgn(v); }
    static Int negate(const Int& v) { return -v; }
    static Int sub(const Int& a, const Int& b) { return a - b; }
    static Int add(const Int& a, const Int& b) { return a + b; }
    static mpz_class toMpz(const Int& v) { return v; }
};

template <class Int>
struct PhaseOneResult {
    bool feasible = false;
    /// Member: weight j equals weightNumerators[j] / denominator.
    std::vector<Int> weightNumerators;
    Int denominator = Int(1);
    /// NotMember: y with y.v_j >= 0 for all columns and y.target < 0.
    std::vector<Int> separator;
    std::size_t pivots = 0;
};

/// Decides whether `target` is a nonnegative combination of `columns`
/// (each a pointer to `rows` entries of type Elem) by minimizing the sum of
/// artificial variables. Bland's rule guarantees termination.
template <class Int, class Elem>
PhaseOneResult<Int> phaseOne(const std::vector<const Elem*>& columns, const Elem* target, std::size_t rows) {
    using A = Arith<Int>;
    const std::size_t d = rows;
    const std::size_t k = columns.size();
    const std::size_t width = k + d + 1;
    const std::size_t rhs = k + d;

    thread_local std::vector<Int> tableau;
    tableau.assign((d + 1) * width, A::from(std::int64_t{0}));
    auto at = [&](std::size_t i, std::size_t j) -> Int& { return tableau[i * width + j]; };

    std::vector<int> rowSign(d);
    std::vector<std::size_t> basis(d);
    for (std::size_t i = 0; i < d; ++i) {
        const Int b = A::from(target[i]);
        rowSign[i] = A::sign(b) < 0 ? -1 : 1;
        for (std::size_t j = 0; j < k; ++j) {
            const Int v = A::from(columns[j][i]);
            at(i, j) = rowSign[i] < 0 ? A::negate(v) : v;
        }
        at(i, k + i) = A::from(std::int64_t{1});
        at(i, rhs) = rowSign[i] < 0 ? A::negate(b) : b;
        basis[i] = k + i;
    }
    for (std::size_t j = 0; j < k; ++j) {
        Int s = A::from(std::int64_t{0});
        for (std::size_t i = 0; i < d; ++i) s = A::sub(s, at(i, j));
        at(d, j) = s;
    }
    {
        Int s = A::from(std::int64_t{0});
        for (std::size_t i = 0; i < d; ++i) s = A::sub(s, at(i, rhs));
        at(d, rhs) = s;
    }

    Int D = A::from(std::int64_t{1});
    PhaseOneResult<Int> result;
    for (;;) {
        std::size_t enter = rhs;
        for (std::size_t j = 0; j < rhs; ++j) {
            if (A::sign(at(d, j)) < 0) {
                enter = j;
                break;
            }
        }
        if (enter == rhs) break;

        std::size_t leave = d;
        for (std::size_t i = 0; i < d; ++i) {
            if (A::sign(at(i, enter)) <= 0) continue;
            if (leave == d) {
                leave = i;
                continue;
            }
            const int c = A::crossCompare(at(i, rhs), at(i, enter), at(leave, rhs), at(leave, enter));
            if (c < 0 || (c == 0 && basis[i] < basis[leave])) leave = i;
        }
        if (leave == d) throw std::logic_error("phase-one objective unbounded");

        const Int p = at(leave, enter);
        for (std::size_t i = 0; i <= d; ++i) {
            if (i == leave) continue;
            const Int f = at(i, enter);
            Int* row = &tableau[i * width];
            const Int* prow = &tableau[leave * width];
            if (A::sign(f) == 0) {
                if (p == D) continue;
                for (std::size_t j = 0; j < width; ++j)
                    if (A::sign(row[j]) != 0) A::scale(row[j], row[j], p, D);
            } else {
                for (std::size_t j = 0; j < width; ++j) A::combine(row[j], row[j], p, f, prow[j], D);
            }
        }
        D = p;
        basis[leave] = enter;
        ++result.pivots;
    }

    result.denominator = D;
    if (A::sign(at(d, rhs)) == 0) {
        result.feasible = true;
        result.weightNumerators.assign(k, A::from(std::int64_t{0}));
        for (std::size_t i = 0; i < d; ++i)
            if (basis[i] < k) result.weightNumerators[basis[i]] = at(i, rhs);
    } else {
        result.feasible = false;
        result.separator.resize(d);
        for (std::size_t i = 0; i < d; ++i) {
            const Int dy = A::sub(D, at(d, k + i));
            result.separator[i] = rowSign[i] < 0 ? dy : A::negate(dy);
        }
    }
    return result;
}

}  // namespace lep::detail
