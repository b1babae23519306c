#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "lep/runner.hpp"

using namespace lep;

namespace {

LCLEPInstance sumOfThree() { return directInstance(buildPSD(InteractionType({3}))); }

std::string tempPath(const std::string& name) {
    return (std::filesystem::temp_directory_path() / ("lep_io_" + name)).string();
}

std::string dumpSolutions(const SolutionSet& s) {
    std::ostringstream os;
    writeSolutions(os, s);
    return os.str();
}

}  // namespace

TEST(InstanceJson, RoundTrip) {
    LCLEPInstance inst = sumOfThree();
    inst.forms[1].coeffs[0] = Rational(-3, 7);
    const Json j = instanceToJson(inst);
    EXPECT_EQ(j["forms"][1][0], "-3/7");
    const auto back = instanceFromJson(j);
    EXPECT_EQ(back.dimension, inst.dimension);
    ASSERT_EQ(back.forms.size(), inst.forms.size());
    for (std::size_t i = 0; i < inst.forms.size(); ++i) EXPECT_EQ(back.forms[i].coeffs, inst.forms[i].coeffs);
    EXPECT_EQ(back.po, inst.po);
    ASSERT_EQ(back.domainForms.size(), 6u);
    EXPECT_EQ(instanceToJson(back).dump(), j.dump());
}

TEST(InstanceJson, AcceptsIntegersAndMissingOptionalFields) {
    const auto inst = instanceFromJson(Json::parse(R"({"dimension": 2, "forms": [[1, 0], ["0/1", "2"]]})"));
    EXPECT_EQ(inst.forms[1].coeffs, RationalVector::fromInts({0, 2}));
    EXPECT_TRUE(inst.po.covers().empty());
    EXPECT_TRUE(inst.domainForms.empty());
}

TEST(InstanceJson, RejectsMalformedInput) {
    auto bad = [](const char* text) { return instanceFromJson(Json::parse(text)); };
    EXPECT_THROW(bad(R"([])"), InputError);
    EXPECT_THROW(bad(R"({"forms": [[1]]})"), InputError);
    EXPECT_THROW(bad(R"({"dimension": 1, "forms": []})"), InputError);
    EXPECT_THROW(bad(R"({"dimension": 1, "forms": [["x"]]})"), InputError);
    EXPECT_THROW(bad(R"({"dimension": 1, "forms": [[1]], "covers": [[0]]})"), InputError);
    EXPECT_THROW(bad(R"({"dimension": 1, "forms": [[1]], "covers": [[0, 3]]})"), InputError);
    EXPECT_THROW(bad(R"({"dimension": 1, "forms": [[1], [2]], "covers": [[0, 1], [1, 0]]})"), CyclicRefinement);
    EXPECT_THROW(parseJsonText("{", "x"), InputError);
}

TEST(InstanceJson, AffineFormsAreRejected) {
    // A constant term would be an extra coefficient.
    try {
        instanceFromJson(Json::parse(R"({"dimension": 2, "forms": [[1, 0, "5/1"]]})"));
        FAIL();
    } catch (const InputError& e) {
        EXPECT_NE(std::string(e.what()).find("homogeneous"), std::string::npos);
    }
}

TEST(SolutionLines, RoundTrip) {
    const auto s = solve(sumOfThree(), true);
    const std::string text = dumpSolutions(s);
    std::istringstream in(text + "\n\n");
    const auto records = readSolutions(in);
    ASSERT_EQ(records.size(), s.size());
    for (std::size_t k = 0; k < records.size(); ++k) {
        EXPECT_EQ(records[k].sigma, s.extensions[k].word());
        EXPECT_EQ(*records[k].witness, s.witnesses.at(s.extensions[k]));
    }
    EXPECT_EQ(solutionLine(LinearExtension({1, 0}), nullptr), R"({"sigma":[1,0]})");
    const ParameterPoint p{RationalVector::fromInts({1}), RationalVector{Rational(1, 2)}};
    std::istringstream pin(solutionLine(LinearExtension({0, 1}), nullptr, &p));
    const auto pr = readSolutions(pin);
    EXPECT_EQ(pr[0].parameter->delta[0], Rational(1, 2));
    std::istringstream broken("{\"sigma\": [0, \"a\"]}\n");
    EXPECT_THROW(readSolutions(broken), InputError);
}

TEST(PsdProblemFile, Parsing) {
    const auto f = psdProblemFromJson(Json::parse(R"({"interaction_type": [2, 2], "mode": "full", "seed": 7})"));
    EXPECT_EQ(f.itype, InteractionType({2, 2}));
    EXPECT_EQ(f.mode, "full");
    EXPECT_EQ(f.seed, 7u);
    EXPECT_FALSE(f.samples);
    EXPECT_THROW(psdProblemFromJson(Json::parse(R"({"interaction_type": [1, 2]})")), InputError);
    EXPECT_THROW(psdProblemFromJson(Json::parse(R"({"mode": "full"})")), InputError);
}

TEST(AtomicWrite, ReplacesContent) {
    const auto path = tempPath("atomic.txt");
    writeFileAtomic(path, "one");
    writeFileAtomic(path, "two");
    EXPECT_EQ(readFile(path), "two");
    EXPECT_FALSE(std::filesystem::exists(path + ".tmp"));
    std::filesystem::remove(path);
}

TEST(Runner, PartitionedEqualsWhole) {
    const auto inst = linearInstance(linearize(buildPSD(InteractionType({1, 1, 1}))));
    const auto whole = solve(inst, true);
    for (std::size_t depth : {0u, 1u, 2u, 3u, 9u}) {
        RunOptions opt;
        opt.prefixDepth = depth;
        opt.witnesses = true;
        opt.jobs = depth % 2 ? 2 : 1;
        const auto r = runPartitioned(inst, opt);
        EXPECT_TRUE(r.complete);
        EXPECT_EQ(r.count, whole.size());
        EXPECT_EQ(dumpSolutions(r.solutions), dumpSolutions(whole)) << depth;
    }
}

TEST(Runner, CheckpointResumeMatchesUninterruptedRun) {
    const auto inst = linearInstance(linearize(buildPSD(InteractionType({1, 1, 1}))));
    const auto whole = solve(inst, true);
    const auto path = tempPath("ckpt.json");
    RunOptions opt;
    opt.prefixDepth = 3;
    opt.witnesses = true;
    opt.checkpointPath = path;
    opt.digest = "abc";
    opt.maxUnits = 2;
    const auto first = runPartitioned(inst, opt);
    EXPECT_FALSE(first.complete);
    EXPECT_EQ(first.unitsDone, 2u);
    auto ck = readCheckpoint(path);
    EXPECT_EQ(ck.done.size(), 2u);
    EXPECT_EQ(ck.pending.size(), first.units - 2);

    opt.maxUnits = 0;
    const auto second = runPartitioned(inst, opt, &ck);
    EXPECT_TRUE(second.complete);
    EXPECT_EQ(dumpSolutions(second.solutions), dumpSolutions(whole));
    EXPECT_TRUE(readCheckpoint(path).pending.empty());

    RunOptions other = opt;
    other.digest = "different";
    EXPECT_THROW(runPartitioned(inst, other, &ck), InputError);
    other = opt;
    other.witnesses = false;
    EXPECT_THROW(runPartitioned(inst, other, &ck), InputError);
    std::filesystem::remove(path);
}

TEST(Runner, CountOnly) {
    const auto inst = sumOfThree();
    RunOptions opt;
    opt.countOnly = true;
    opt.prefixDepth = 3;
    const auto r = runPartitioned(inst, opt);
    EXPECT_EQ(r.count, 12u);
    EXPECT_EQ(r.solutions.size(), 0u);
}

TEST(Checkpoint, MalformedFileIsInputError) {
    EXPECT_THROW(checkpointFromJson(Json::parse(R"({"version": 2})")), InputError);
    EXPECT_THROW(checkpointFromJson(Json::parse(R"({"version": 1})")), InputError);
}

TEST(Digest, Fnv1a) {
    EXPECT_EQ(fnv1a(""), "cbf29ce484222325");
    EXPECT_EQ(fnv1a("a"), "af63dc4c8601ec8c");
}
