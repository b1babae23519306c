#include <gtest/gtest.h>

#include "lep/rational.hpp"

using namespace lep;

TEST(Rational, ParsesFractionsAndIntegers) {
    EXPECT_EQ(parseRational("3/6"), Rational(1, 2));
    EXPECT_EQ(parseRational("-4"), Rational(-4));
    EXPECT_EQ(parseRational("123456789012345678901234567890/2").get_num().get_str(), "61728394506172839450617283945");
}

TEST(Rational, RejectsMalformedText) {
    EXPECT_THROW(parseRational(""), InputError);
    EXPECT_THROW(parseRational("1/0"), InputError);
    EXPECT_THROW(parseRational("abc"), InputError);
    EXPECT_THROW(parseRational("1.5"), InputError);
}

TEST(Rational, FormatsAlwaysWithDenominator) {
    EXPECT_EQ(formatRational(Rational(5)), "5/1");
    EXPECT_EQ(formatRational(parseRational("-6/4")), "-3/2");
    EXPECT_EQ(formatRational(Rational(0)), "0/1");
}

TEST(RationalVector, ArithmeticAndDimensionChecks) {
    const auto a = RationalVector::fromInts({1, 2, 3});
    const auto b = RationalVector::fromInts({3, 2, 1});
    EXPECT_EQ(a.dot(b), Rational(10));
    EXPECT_EQ(a - b, RationalVector::fromInts({-2, 0, 2}));
    EXPECT_EQ(a + b, RationalVector::fromInts({4, 4, 4}));
    EXPECT_EQ(-a, RationalVector::fromInts({-1, -2, -3}));
    EXPECT_EQ(a.scaled(Rational(1, 2)), (RationalVector{Rational(1, 2), Rational(1), Rational(3, 2)}));
    EXPECT_THROW(a.dot(RationalVector::fromInts({1, 2})), DimensionMismatch);
    EXPECT_TRUE(RationalVector(3).isZero());
}

TEST(RationalMatrix, KeepsRowCountWithoutColumns) {
    RationalMatrix m(4);
    EXPECT_EQ(m.rows(), 4u);
    EXPECT_EQ(m.cols(), 0u);
    EXPECT_THROW(m.addColumn(RationalVector(3)), DimensionMismatch);
    m.addColumn(RationalVector::fromInts({1, 0, 0, 1}));
    m.addColumn(RationalVector::fromInts({0, 1, 0, 1}));
    EXPECT_EQ(m.times(RationalVector::fromInts({2, 3})), RationalVector::fromInts({2, 3, 0, 5}));
}

TEST(RationalVector, PrimitiveIntegerMultiple) {
    const RationalVector v{Rational(1, 2), Rational(-3, 4), Rational(0)};
    const auto p = primitiveIntegerVector(v);
    ASSERT_EQ(p.size(), 3u);
    EXPECT_EQ(p[0], 2);
    EXPECT_EQ(p[1], -3);
    EXPECT_EQ(p[2], 0);
    std::vector<Integer> w{6, -9, 12};
    makePrimitive(w);
    EXPECT_EQ(w, (std::vector<Integer>{2, -3, 4}));
}
