// lep: command-line front end.
//
//   lep lclep INSTANCE.json      admissible extensions of an LC-LEP instance
//   lep psd --type 2,1 --mode M  PSD problems (exact-special, linearized-plain,
//                                linearized-constrained, full)
//   lep sample --type 2,2        witness sampling
//   lep verify                   re-check a solution file
//   lep residual-export          candidates minus witnessed, as text systems
//
// Exit codes: 0 ok, 1 verification failure, 2 input error, 3 infeasible
// structure, 4 unsupported mode.

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "lep/lep.hpp"

namespace {

using lep::Json;

constexpr int kOk = 0;
constexpr int kVerifyFailed = 1;
constexpr int kInputError = 2;
constexpr int kInfeasible = 3;
constexpr int kUnsupported = 4;

struct Sink {
    std::ofstream file;
    std::ostream* os = &std::cout;

    explicit Sink(const std::string& path) {
        if (path.empty() || path == "-") return;
        file.open(path, std::ios::binary | std::ios::trunc);
        if (!file) throw lep::InputError("cannot open " + path + " for writing");
        os = &file;
    }
    std::ostream& out() { return *os; }
    bool toStdout() const { return os == &std::cout; }
};

struct Manifest {
    Json j = Json::object();
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

    void write(const std::string& path) {
        if (path.empty()) return;
        j["timing_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        j["version"] = LEP_VERSION;
        lep::writeFileAtomic(path, j.dump(2) + "\n");
    }
};

std::string digestOf(const lep::LCLEPInstance& inst, const std::string& tag) {
    return lep::fnv1a(tag + "|" + lep::instanceToJson(inst).dump());
}

struct CommonRun {
    std::string output;
    std::string manifest;
    std::string checkpoint;
    std::string resume;
    std::size_t prefixDepth = 0;
    std::size_t maxUnits = 0;
    unsigned jobs = 1;
    bool witnesses = false;
    bool countOnly = false;

    void addTo(CLI::App* cmd) {
        cmd->add_option("-o,--output", output, "Solution file (JSONL); default stdout");
        cmd->add_option("--manifest", manifest, "Write a run manifest (JSON)");
        cmd->add_option("--checkpoint", checkpoint, "Checkpoint file, rewritten after each finished unit");
        cmd->add_option("--resume", resume, "Continue from a checkpoint file");
        cmd->add_option("--prefix-depth", prefixDepth, "Split the search into prefixes of this length");
        cmd->add_option("--max-units", maxUnits, "Stop after this many finished prefix units");
        cmd->add_option("-j,--jobs", jobs, "Worker threads")->check(CLI::Range(1u, 1024u));
        cmd->add_flag("--witnesses", witnesses, "Attach an exact witness to every solution");
        cmd->add_flag("--count", countOnly, "Only count solutions");
    }
};

/// Solves `inst` under the common run flags. Returns the run result; writes
/// solutions to the sink unless counting.
lep::RunResult runInstance(const lep::LCLEPInstance& inst, const std::vector<lep::ChainFilter>& filters,
                           const std::string& tag, const CommonRun& c) {
    lep::RunOptions opt;
    opt.prefixDepth = c.prefixDepth;
    opt.jobs = c.jobs;
    opt.witnesses = c.witnesses;
    opt.countOnly = c.countOnly;
    opt.checkpointPath = c.checkpoint.empty() ? c.resume : c.checkpoint;
    opt.filters = filters;
    opt.digest = digestOf(inst, tag);
    opt.maxUnits = c.maxUnits;
    // Below the prefix depth the work is split anyway for threads.
    if (opt.prefixDepth == 0 && c.jobs > 1) opt.prefixDepth = 2;
    std::optional<lep::Checkpoint> ck;
    if (!c.resume.empty()) ck = lep::readCheckpoint(c.resume);
    return lep::runPartitioned(inst, opt, ck ? &*ck : nullptr);
}

void fillRunManifest(Manifest& m, const CommonRun& c, const lep::RunResult& r) {
    m.j["jobs"] = c.jobs;
    m.j["prefix_depth"] = c.prefixDepth;
    m.j["checkpoint"] = c.checkpoint.empty() ? c.resume : c.checkpoint;
    m.j["resumed_from"] = c.resume;
    m.j["outputs"]["solutions"] = c.output.empty() ? "-" : c.output;
    m.j["counts"]["solutions"] = r.count;
    m.j["units"] = r.units;
    m.j["units_done"] = r.unitsDone;
    m.j["complete"] = r.complete;
}

int cmdLclep(const std::string& instancePath, CommonRun& c, const std::vector<std::string>& argv) {
    Manifest m;
    m.j["command"] = "lclep";
    m.j["argv"] = argv;
    m.j["inputs"] = {{"instance", instancePath}};
    const lep::LCLEPInstance inst = lep::readInstance(instancePath);
    const auto r = runInstance(inst, {}, "lclep", c);
    if (!r.complete) {
        std::cerr << "stopped after " << r.unitsDone << " of " << r.units << " units; resume with --resume\n";
    } else {
        Sink sink(c.output);
        if (c.countOnly) sink.out() << r.count << '\n';
        else lep::writeSolutions(sink.out(), r.solutions);
    }
    fillRunManifest(m, c, r);
    m.write(c.manifest);
    return kOk;
}

struct PsdArgs {
    std::string type;
    std::string problem;
    std::string mode = "exact-special";
    std::uint64_t samples = 1000000;
    std::uint64_t seed = 0;
    std::uint64_t radius = 1000;
    bool plain = false;
    bool realize = false;
    bool noRefine = false;
    std::string instanceOutput;
    std::string witnessedOutput;
    std::string residualOutput;
    std::string summaryOutput;
};

lep::InteractionType resolveType(PsdArgs& a) {
    if (!a.problem.empty()) {
        const auto f = lep::psdProblemFromJson(lep::parseJsonText(lep::readFile(a.problem), a.problem));
        if (a.type.empty()) a.type = f.itype.str();
        a.mode = f.mode;
        if (f.seed) a.seed = *f.seed;
        if (f.samples) a.samples = *f.samples;
        return f.itype;
    }
    if (a.type.empty()) throw lep::InputError("either --type or --problem is required");
    return lep::InteractionType::parse(a.type);
}

void writeWitnessed(const std::string& path, const lep::SampleReport& rep) {
    Sink sink(path);
    for (const auto& s : rep.witnessed) sink.out() << lep::solutionLine(s, nullptr, &rep.perOrderFirstWitness.at(s)) << '\n';
}

int cmdPsd(PsdArgs& a, CommonRun& c, const std::vector<std::string>& argv) {
    Manifest m;
    m.j["command"] = "psd";
    m.j["argv"] = argv;
    const lep::InteractionType it = resolveType(a);
    const lep::PSDMode mode = lep::parseMode(a.mode);
    m.j["inputs"] = {{"type", it.str()}, {"problem", a.problem}};
    m.j["mode"] = lep::modeName(mode);
    if (a.realize && !(mode == lep::PSDMode::ExactSpecial && it.isTwoThenOnes()))
        throw lep::UnsupportedMode("--realize needs exact-special mode on a (2,1,...,1) type");

    lep::PSDOptions po;
    po.refine = !a.noRefine;
    po.jobs = c.jobs;
    const lep::PSDProblem pb = lep::psdProblem(it, mode, po);
    if (!a.instanceOutput.empty()) lep::writeFileAtomic(a.instanceOutput, lep::instanceToJson(pb.instance).dump() + "\n");

    CommonRun run = c;
    if (a.realize) run.witnesses = true;
    const std::string tag = "psd|" + it.str() + "|" + lep::modeName(mode == lep::PSDMode::Full
                                                                         ? lep::PSDMode::LinearizedConstrained
                                                                         : mode) +
                            (po.refine ? "" : "|norefine");
    const auto r = runInstance(pb.instance, pb.filters, tag, run);
    fillRunManifest(m, c, r);
    if (!r.complete) {
        std::cerr << "stopped after " << r.unitsDone << " of " << r.units << " units; resume with --resume\n";
        m.write(c.manifest);
        return kOk;
    }

    Json summary;
    summary["type"] = it.str();
    summary["mode"] = lep::modeName(mode);
    const lep::PSDInstance psd = lep::buildPSD(it);
    {
        Sink sink(c.output);
        if (c.countOnly) {
        } else if (a.realize) {
            for (const auto& s : r.solutions.extensions) {
                const auto p = lep::realizeParameter(it, r.solutions.witnesses.at(s), s);
                sink.out() << lep::solutionLine(s, nullptr, &p) << '\n';
            }
        } else {
            lep::writeSolutions(sink.out(), r.solutions);
        }
    }

    if (mode == lep::PSDMode::Full) {
        lep::SampleConfig cfg;
        cfg.sampleCount = a.samples;
        cfg.seed = a.seed;
        cfg.radius = a.radius;
        cfg.jobs = c.jobs;
        const auto rep = lep::sample(psd, cfg);
        lep::SolutionSet candidates = r.solutions;
        if (c.countOnly) throw lep::InputError("full mode needs the candidate set; drop --count");
        const auto resid = lep::residual(candidates, rep);
        std::string witnessedPath = a.witnessedOutput, residualPath = a.residualOutput;
        if (!c.output.empty() && c.output != "-") {
            if (witnessedPath.empty()) witnessedPath = c.output + ".witnessed.jsonl";
            if (residualPath.empty()) residualPath = c.output + ".residual.txt";
        }
        if (!witnessedPath.empty()) writeWitnessed(witnessedPath, rep);
        if (!residualPath.empty()) lep::exportResidual(psd, resid, residualPath);
        summary["count"] = rep.witnessed.size();
        summary["candidate_count"] = candidates.size();
        summary["witnessed_count"] = rep.witnessed.size();
        summary["residual_count"] = resid.size();
        summary["tie_discards"] = rep.tieDiscards;
        summary["samples"] = rep.drawn;
        summary["seed"] = a.seed;
        summary["radius"] = a.radius;
        m.j["seed"] = a.seed;
        m.j["outputs"]["witnessed"] = witnessedPath;
        m.j["outputs"]["residual"] = residualPath;
        if (a.plain) summary["plain_count"] = lep::countSolutions(lep::psdProblem(it, lep::PSDMode::LinearizedPlain).instance);
    } else {
        summary["count"] = r.count;
        if (mode != lep::PSDMode::ExactSpecial) summary["candidate_count"] = r.count;
        if (a.plain && mode != lep::PSDMode::LinearizedPlain)
            summary["plain_count"] = lep::countSolutions(lep::psdProblem(it, lep::PSDMode::LinearizedPlain).instance);
    }
    m.j["counts"] = summary;
    const std::string text = summary.dump();
    if (!a.summaryOutput.empty()) lep::writeFileAtomic(a.summaryOutput, text + "\n");
    if (c.output.empty() || c.output == "-") std::cerr << text << '\n';
    else std::cout << text << '\n';
    m.write(c.manifest);
    return kOk;
}

int cmdSample(PsdArgs& a, const std::string& output, unsigned jobs, const std::string& manifest,
              const std::vector<std::string>& argv) {
    Manifest m;
    m.j["command"] = "sample";
    m.j["argv"] = argv;
    const lep::InteractionType it = resolveType(a);
    lep::SampleConfig cfg;
    cfg.sampleCount = a.samples;
    cfg.seed = a.seed;
    cfg.radius = a.radius;
    cfg.jobs = jobs;
    const auto rep = lep::sample(lep::buildPSD(it), cfg);
    writeWitnessed(output, rep);
    Json summary = {{"type", it.str()},         {"samples", rep.drawn},         {"seed", a.seed},
                    {"radius", a.radius},       {"witnessed_count", rep.witnessed.size()},
                    {"tie_discards", rep.tieDiscards}};
    (output.empty() || output == "-" ? std::cerr : std::cout) << summary.dump() << '\n';
    m.j["inputs"] = {{"type", it.str()}};
    m.j["seed"] = a.seed;
    m.j["jobs"] = jobs;
    m.j["outputs"]["witnessed"] = output.empty() ? "-" : output;
    m.j["counts"] = summary;
    m.write(manifest);
    return kOk;
}

std::string wordText(const std::vector<int>& w) {
    std::string s = "(";
    for (std::size_t k = 0; k < w.size(); ++k) s += (k ? "," : "") + std::to_string(w[k]);
    return s + ")";
}

int cmdVerify(const std::string& instancePath, PsdArgs& a, const std::string& solutionsPath) {
    lep::LCLEPInstance inst;
    std::optional<lep::PSDInstance> psd;
    if (!instancePath.empty()) {
        inst = lep::readInstance(instancePath);
    } else {
        const lep::InteractionType it = resolveType(a);
        lep::PSDOptions po;
        po.refine = false;
        inst = lep::psdProblem(it, lep::parseMode(a.mode), po).instance;
        psd = lep::buildPSD(it);
    }
    std::ifstream in(solutionsPath);
    if (!in) throw lep::InputError("cannot open " + solutionsPath);
    const auto records = lep::readSolutions(in);
    std::size_t line = 0;
    for (const auto& r : records) {
        ++line;
        auto fail = [&](const std::string& why) {
            std::cout << "line " << line << " " << wordText(r.sigma) << ": " << why << '\n';
            return kVerifyFailed;
        };
        if (r.sigma.size() != inst.forms.size()) return fail("wrong length");
        std::optional<lep::LinearExtension> s;
        try {
            s = lep::LinearExtension(r.sigma);
        } catch (const lep::InputError&) {
            return fail("not a permutation");
        }
        if (!lep::isLinearExtension(*s, inst.po)) return fail("violates a cover relation");
        if (r.witness) {
            if (!lep::witnessValid(inst, *s, *r.witness)) return fail("witness does not satisfy the strict inequalities");
        } else if (!r.parameter && !lep::checkSigma(inst, *s).admissible) {
            return fail("not admissible");
        }
        if (r.parameter) {
            if (!psd) return fail("parameter witnesses need --type");
            if (!lep::realizes(*psd, *r.parameter, *s)) return fail("parameter point does not realize the order");
        }
    }
    std::cout << "verified " << records.size() << " solutions\n";
    return kOk;
}

std::vector<lep::LinearExtension> readOrders(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw lep::InputError("cannot open " + path);
    std::vector<lep::LinearExtension> out;
    for (const auto& r : lep::readSolutions(in)) out.emplace_back(r.sigma);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

int cmdResidual(PsdArgs& a, const std::string& candidatesPath, const std::string& witnessedPath,
                const std::string& output) {
    const lep::InteractionType it = resolveType(a);
    lep::SolutionSet candidates;
    candidates.extensions = readOrders(candidatesPath);
    lep::SampleReport rep;
    if (!witnessedPath.empty()) rep.witnessed = readOrders(witnessedPath);
    const auto resid = lep::residual(candidates, rep);
    const auto psd = lep::buildPSD(it);
    if (output.empty() || output == "-") lep::writeResidual(psd, resid, std::cout);
    else lep::exportResidual(psd, resid, output);
    std::cerr << Json{{"type", it.str()}, {"residual_count", resid.size()}}.dump() << '\n';
    return kOk;
}

void addTypeOptions(CLI::App* cmd, PsdArgs& a) {
    cmd->add_option("--type", a.type, "Interaction type, e.g. 2,1,1");
    cmd->add_option("--problem", a.problem, "PSD problem file (JSON)");
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    CLI::App app{"Admissible linear extensions of polynomial families"};
    app.require_subcommand(1);

    std::string instancePath;
    CommonRun lclepRun;
    auto* lclep = app.add_subcommand("lclep", "Solve an LC-LEP instance file");
    lclep->add_option("instance", instancePath, "Instance file (JSON)")->required();
    lclepRun.addTo(lclep);

    PsdArgs psdArgs;
    CommonRun psdRun;
    auto* psd = app.add_subcommand("psd", "Solve a PSD problem");
    addTypeOptions(psd, psdArgs);
    psd->add_option("--mode", psdArgs.mode, "exact-special | linearized-plain | linearized-constrained | full");
    psd->add_option("--samples", psdArgs.samples, "Samples in full mode");
    psd->add_option("--seed", psdArgs.seed, "Sampling seed");
    psd->add_option("--radius", psdArgs.radius, "Sampling radius")->check(CLI::Range(std::uint64_t{1}, std::uint64_t{0xffffffff}));
    psd->add_flag("--plain", psdArgs.plain, "Also count the plain linearized candidates");
    psd->add_flag("--realize", psdArgs.realize, "Emit parameter witnesses (exact-special, (2,1,...,1))");
    psd->add_flag("--no-refine", psdArgs.noRefine, "Skip sub-problem chains in constrained modes");
    psd->add_option("--instance-output", psdArgs.instanceOutput, "Write the LC-LEP instance used");
    psd->add_option("--witnessed-output", psdArgs.witnessedOutput, "Full mode: witnessed orders (JSONL)");
    psd->add_option("--residual-output", psdArgs.residualOutput, "Full mode: residual systems (text)");
    psd->add_option("--summary", psdArgs.summaryOutput, "Write the summary (JSON)");
    psdRun.addTo(psd);

    PsdArgs sampleArgs;
    std::string sampleOutput, sampleManifest;
    unsigned sampleJobs = 1;
    auto* samp = app.add_subcommand("sample", "Sample witnesses of a PSD problem");
    addTypeOptions(samp, sampleArgs);
    samp->add_option("--samples", sampleArgs.samples, "Number of samples");
    samp->add_option("--seed", sampleArgs.seed, "Seed");
    samp->add_option("--radius", sampleArgs.radius, "Radius")->check(CLI::Range(std::uint64_t{1}, std::uint64_t{0xffffffff}));
    samp->add_option("-o,--output", sampleOutput, "Witnessed orders (JSONL); default stdout");
    samp->add_option("-j,--jobs", sampleJobs, "Worker threads")->check(CLI::Range(1u, 1024u));
    samp->add_option("--manifest", sampleManifest, "Write a run manifest (JSON)");

    PsdArgs verifyArgs;
    std::string verifyInstance, verifySolutions;
    auto* verify = app.add_subcommand("verify", "Re-check every line of a solution file");
    verify->add_option("--instance", verifyInstance, "LC-LEP instance file");
    addTypeOptions(verify, verifyArgs);
    verify->add_option("--mode", verifyArgs.mode, "PSD mode whose instance to check against");
    verify->add_option("solutions", verifySolutions, "Solution file (JSONL)")->required();

    PsdArgs residArgs;
    std::string residCandidates, residWitnessed, residOutput;
    auto* resid = app.add_subcommand("residual-export", "Export candidates that have no sampled witness");
    addTypeOptions(resid, residArgs);
    resid->add_option("--candidates", residCandidates, "Candidate solutions (JSONL)")->required();
    resid->add_option("--witnessed", residWitnessed, "Witnessed orders (JSONL)");
    resid->add_option("-o,--output", residOutput, "Residual systems (text); default stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kInputError;
    }

    try {
        if (*lclep) return cmdLclep(instancePath, lclepRun, args);
        if (*psd) return cmdPsd(psdArgs, psdRun, args);
        if (*samp) return cmdSample(sampleArgs, sampleOutput, sampleJobs, sampleManifest, args);
        if (*verify) {
            if (verifyInstance.empty() == (verifyArgs.type.empty() && verifyArgs.problem.empty()))
                throw lep::InputError("verify needs exactly one of --instance or --type/--problem");
            return cmdVerify(verifyInstance, verifyArgs, verifySolutions);
        }
        if (*resid) return cmdResidual(residArgs, residCandidates, residWitnessed, residOutput);
    } catch (const lep::UnsupportedMode& e) {
        std::cerr << "lep: " << e.what() << '\n';
        return kUnsupported;
    } catch (const lep::WrongType& e) {
        std::cerr << "lep: " << e.what() << '\n';
        return kUnsupported;
    } catch (const lep::CyclicRefinement& e) {
        std::cerr << "lep: " << e.what() << '\n';
        return kInfeasible;
    } catch (const lep::Error& e) {
        std::cerr << "lep: " << e.what() << '\n';
        return kInputError;
    } catch (const std::exception& e) {
        std::cerr << "lep: " << e.what() << '\n';
        return kVerifyFailed;
    }
    return kOk;
}
