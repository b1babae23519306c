#include <gtest/gtest.h>

#include <filesystem>
#include <random>
#include <fstream>
#include <sstream>

#include "lep/solve_psd.hpp"

using namespace lep;

namespace {

SampleReport run(const InteractionType& t, std::uint64_t count, std::uint64_t seed, unsigned jobs = 1,
                 std::uint64_t radius = 1000) {
    SampleConfig cfg;
    cfg.sampleCount = count;
    cfg.seed = seed;
    cfg.jobs = jobs;
    cfg.radius = radius;
    return sample(buildPSD(t), cfg);
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    std::string l;
    while (std::getline(in, l)) out.push_back(l);
    return out;
}

}  // namespace

TEST(Sample, SingleInput) {
    const auto r = run(InteractionType({1}), 10, 3);
    ASSERT_EQ(r.witnessed.size(), 1u);
    EXPECT_EQ(r.witnessed[0], LinearExtension({0, 1}));
    EXPECT_EQ(r.drawn, 10u);
    EXPECT_EQ(r.tieDiscards, 0u);
    EXPECT_EQ(r.firstSampleIndex.at(r.witnessed[0]), 0u);
}

TEST(Sample, TwoOneSaturatesInsideExactSet) {
    const InteractionType t({2, 1});
    const auto exact = solvePSD(t, PSDMode::ExactSpecial).solutions;
    const auto r = run(t, 1000000, 7);
    EXPECT_EQ(r.witnessed, exact.extensions);
    EXPECT_TRUE(residual(exact, r).empty());
}

TEST(Sample, WitnessesVerifyExactly) {
    for (const auto& t : {InteractionType({2, 1}), InteractionType({2, 2}), InteractionType({1, 1, 1})}) {
        const auto psd = buildPSD(t);
        const auto r = run(t, 20000, 1);
        EXPECT_EQ(r.perOrderFirstWitness.size(), r.witnessed.size());
        for (const auto& [s, p] : r.perOrderFirstWitness) ASSERT_TRUE(realizes(psd, p, s));
    }
}

TEST(Sample, TiesAreCountedNotWitnessed) {
    // Radius 1 draws the all-ones point: (2,1) values repeat.
    const auto r = run(InteractionType({2, 1}), 50, 4, 1, 1);
    EXPECT_EQ(r.tieDiscards, 50u);
    EXPECT_TRUE(r.witnessed.empty());
}

TEST(Sample, DeterministicAndIndependentOfJobs) {
    const InteractionType t({2, 2});
    const auto a = run(t, 150000, 99);
    const auto b = run(t, 150000, 99);
    const auto c = run(t, 150000, 99, 3);
    EXPECT_EQ(a.witnessed, b.witnessed);
    EXPECT_EQ(a.perOrderFirstWitness, b.perOrderFirstWitness);
    EXPECT_EQ(a.witnessed, c.witnessed);
    EXPECT_EQ(a.firstSampleIndex, c.firstSampleIndex);
    EXPECT_EQ(a.perOrderFirstWitness, c.perOrderFirstWitness);
    EXPECT_EQ(a.tieDiscards, c.tieDiscards);
    EXPECT_NE(run(t, 150000, 100).witnessed, a.witnessed);
}

TEST(Sample, MonotoneInSampleCount) {
    const InteractionType t({3, 1});
    const auto small = run(t, 70000, 5);
    const auto large = run(t, 200000, 5);
    for (const auto& s : small.witnessed) {
        ASSERT_TRUE(std::binary_search(large.witnessed.begin(), large.witnessed.end(), s));
        EXPECT_EQ(small.firstSampleIndex.at(s), large.firstSampleIndex.at(s));
    }
    EXPECT_GE(large.witnessed.size(), small.witnessed.size());
}

TEST(Sample, RejectsBadConfig) {
    EXPECT_THROW(run(InteractionType({1}), 1, 0, 1, 0), InputError);
    EXPECT_THROW(run(InteractionType({1, 1, 1, 1, 1, 1, 1, 1, 1, 1}), 1, 0, 1, 0xffffffffu), TooLarge);
}

TEST(Residual, SetDifference) {
    const InteractionType t({1, 1});
    const auto cand = solvePSD(t, PSDMode::LinearizedPlain).solutions;
    EXPECT_EQ(residual(cand, SampleReport{}), cand.extensions);
    const auto r = run(t, 100, 2);
    EXPECT_TRUE(residual(cand, r).empty());
    SolutionSet one;
    one.extensions = {cand.extensions[0]};
    EXPECT_THROW(residual(one, r), WitnessOutsideCandidates);
}

TEST(ResidualExport, TwoOneRecordShape) {
    const auto psd = buildPSD(InteractionType({2, 1}));
    std::ostringstream os;
    writeResidual(psd, {LinearExtension({0, 1, 2, 3, 4, 5, 6, 7})}, os);
    const auto ls = lines(os.str());
    ASSERT_EQ(ls.size(), 1u + 1u + 1u + 6u + 7u);
    EXPECT_EQ(ls[0], "# psd-residual v1 type=2,1");
    EXPECT_EQ(ls[1], "");
    EXPECT_EQ(ls[2], "sigma: 0 1 2 3 4 5 6 7");
    EXPECT_EQ(ls[3], "l1 > 0");
    EXPECT_EQ(ls[8], "d3 > 0");
    // p1 - p0 = (l1 + l2) d3
    EXPECT_EQ(ls[9], "l1*d3 + l2*d3 > 0");
    for (std::size_t k = 9; k < ls.size(); ++k) EXPECT_EQ(ls[k].substr(ls[k].size() - 4), " > 0");
}

TEST(ResidualExport, ExpandedDifferencesMatchEvaluation) {
    const auto psd = buildPSD(InteractionType({2, 1}));
    // p3 - p6 = (l1+l2+d2)(l3+d3) - (l1+l2+d1+d2) l3
    const auto p3 = detail::expand(psd, 3);
    auto diff = p3;
    for (const auto& [m, c] : detail::expand(psd, 6)) diff[m] -= c;
    EXPECT_EQ(detail::formatPolynomial(diff, 3), "l1*d3 + l2*d3 - l3*d1 + d2*d3");
}

TEST(ResidualExport, ExpansionEvaluatesLikeTheProduct) {
    std::mt19937_64 rng(21);
    for (const auto& t : {InteractionType({2, 1}), InteractionType({2, 2}), InteractionType({3, 1})}) {
        const auto psd = buildPSD(t);
        const int n = t.n();
        for (int trial = 0; trial < 20; ++trial) {
            std::vector<long> x(2 * n);
            for (auto& v : x) v = 1 + static_cast<long>(rng() % 50);
            ParameterPoint p{RationalVector(n), RationalVector(n)};
            for (int k = 0; k < n; ++k) {
                p.ell[k] = x[k];
                p.delta[k] = x[n + k];
            }
            const auto values = evaluate(psd, p);
            for (std::size_t i = 0; i < t.size(); ++i) {
                mpz_class sum = 0;
                for (const auto& [m, c] : detail::expand(psd, i)) {
                    mpz_class term = c;
                    for (int v = 0; v < 2 * n; ++v)
                        for (int e = 0; e < m[v]; ++e) term *= x[v];
                    sum += term;
                }
                ASSERT_EQ(Rational(sum), values[i]);
            }
        }
    }
}

TEST(ResidualExport, EmptyResidualWritesHeaderOnly) {
    const auto path = (std::filesystem::temp_directory_path() / "lep_empty_residual.txt").string();
    exportResidual(buildPSD(InteractionType({2, 2})), {}, path);
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    EXPECT_EQ(ss.str(), "# psd-residual v1 type=2,2\n");
    std::filesystem::remove(path);
}

// Sampled witnesses lie in the constrained candidates, which lie in the plain
// candidates.
TEST(SampleProperty, InclusionChainTwoTwo) {
    const InteractionType t({2, 2});
    const auto cons = solvePSD(t, PSDMode::LinearizedConstrained).solutions;
    const auto plain = solvePSD(t, PSDMode::LinearizedPlain).solutions;
    const auto r = run(t, 300000, 7);
    for (const auto& s : r.witnessed) ASSERT_TRUE(cons.contains(s));
    for (const auto& s : cons.extensions) ASSERT_TRUE(plain.contains(s));
    EXPECT_EQ(cons.size(), 7920u);
    EXPECT_EQ(plain.size(), 26640u);
    EXPECT_EQ(residual(cons, r).size(), cons.size() - r.witnessed.size());
}

TEST(SampleProperty, TwoOneOneMatchesExact) {
    const InteractionType t({2, 1, 1});
    const auto exact = solvePSD(t, PSDMode::ExactSpecial).solutions;
    const auto r = run(t, 2000000, 7);
    for (const auto& s : r.witnessed) ASSERT_TRUE(exact.contains(s));
    EXPECT_GT(r.witnessed.size(), exact.size() * 9 / 10);
}
