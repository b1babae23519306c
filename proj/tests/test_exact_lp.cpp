#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"

using namespace lep;

TEST(ExactLp, MemberWithWeights) {
    const auto gens = RationalMatrix::fromColumns({RationalVector::fromInts({1, 0}), RationalVector::fromInts({0, 1})});
    const auto c = lpFeasible(RationalVector::fromInts({2, 3}), gens);
    ASSERT_TRUE(c.member());
    EXPECT_EQ(*c.membershipWeights, RationalVector::fromInts({2, 3}));
    EXPECT_TRUE(verifyCertificate(RationalVector::fromInts({2, 3}), gens, c));
}

TEST(ExactLp, NotMemberWithSeparator) {
    const auto gens = RationalMatrix::fromColumns({RationalVector::fromInts({1, 0}), RationalVector::fromInts({0, 1})});
    const auto target = RationalVector::fromInts({-1, 1});
    const auto c = lpFeasible(target, gens);
    ASSERT_FALSE(c.member());
    const auto& y = *c.separator;
    EXPECT_LT(sgn(y.dot(target)), 0);
    for (const auto& g : gens.columns()) EXPECT_GE(sgn(y.dot(g)), 0);
}

TEST(ExactLp, EmptyGeneratorSet) {
    const RationalMatrix empty(3);
    EXPECT_TRUE(lpFeasible(RationalVector(3), empty).member());
    const auto c = lpFeasible(RationalVector::fromInts({0, 2, 0}), empty);
    ASSERT_FALSE(c.member());
    EXPECT_LT(sgn(c.separator->dot(RationalVector::fromInts({0, 2, 0}))), 0);
}

TEST(ExactLp, RationalEntries) {
    const auto gens = RationalMatrix::fromColumns({RationalVector{Rational(1, 3), Rational(2, 5)}});
    const auto c = lpFeasible(RationalVector{Rational(1), Rational(6, 5)}, gens);
    ASSERT_TRUE(c.member());
    EXPECT_EQ((*c.membershipWeights)[0], Rational(3));
}

TEST(ExactLp, DimensionMismatch) {
    const auto gens = RationalMatrix::fromColumns({RationalVector::fromInts({1, 0})});
    EXPECT_THROW(lpFeasible(RationalVector::fromInts({1, 0, 0}), gens), DimensionMismatch);
}

TEST(ExactLp, LargeEntriesFallBackToBignums) {
    const Rational big = Rational(mpz_class("1000000000000000000000"));
    const auto gens = RationalMatrix::fromColumns({RationalVector{big, Rational(1)}, RationalVector{Rational(1), big}});
    const RationalVector target{big + 1, big + 1};
    const auto c = lpFeasible(target, gens);
    ASSERT_TRUE(c.member());
    EXPECT_TRUE(verifyCertificate(target, gens, c));
    EXPECT_EQ(*c.membershipWeights, RationalVector::fromInts({1, 1}));
}

TEST(ExactLp, VerifierRejectsBadCertificates) {
    const auto gens = RationalMatrix::fromColumns({RationalVector::fromInts({1, 0})});
    const auto target = RationalVector::fromInts({1, 0});
    FeasibilityCertificate wrong;
    wrong.verdict = Verdict::Member;
    wrong.membershipWeights = RationalVector::fromInts({2});
    EXPECT_FALSE(verifyCertificate(target, gens, wrong));
    FeasibilityCertificate sep;
    sep.verdict = Verdict::NotMember;
    sep.separator = RationalVector::fromInts({1, 0});
    EXPECT_FALSE(verifyCertificate(target, gens, sep));
}

// Soundness and exclusivity on random small problems: every certificate
// verifies exactly and agrees with the brute-force basic-solution oracle.
TEST(ExactLpProperty, CertificatesAgreeWithBruteForce) {
    std::mt19937_64 rng(20240611);
    std::uniform_int_distribution<int> dimDist(1, 4), countDist(0, 6);
    int members = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t d = dimDist(rng);
        const int k = countDist(rng);
        std::vector<RationalVector> cols;
        for (int j = 0; j < k; ++j) cols.push_back(oracle::randomVector(rng, d, -3, 3));
        RationalMatrix gens(d, cols);
        RationalVector target = oracle::randomVector(rng, d, -3, 3);
        if (trial % 3 == 0 && k > 0) {
            // Bias towards members: a nonnegative combination.
            target = RationalVector(d);
            for (const auto& c : cols) target = target + c.scaled(Rational(std::uniform_int_distribution<int>(0, 2)(rng)));
        }
        const auto cert = lpFeasible(target, gens);
        ASSERT_TRUE(verifyCertificate(target, gens, cert)) << "trial " << trial;
        ASSERT_EQ(cert.member(), oracle::member(target, cols)) << "trial " << trial;
        if (cert.member()) {
            ++members;
            // A separator for a member cannot exist: y.target = sum alpha_j y.v_j >= 0.
            ASSERT_FALSE(cert.separator.has_value());
        }
    }
    EXPECT_GT(members, 100);
    EXPECT_LT(members, 900);
}
