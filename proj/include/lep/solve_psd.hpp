#pragma once

// Solution modes for a PSD problem:
//   exact-special           (2,1,...,1) on the special domain, (n) directly in
//                           the parameters, (1,...,1) as a linear problem
//   linearized-plain        the linearized problem on all of R^m
//   linearized-constrained  plus the quadruple constraints and sub-problem
//                           chains
//   full                    constrained candidates, sampling, residual

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lep/sampler.hpp"

namespace lep {

enum class PSDMode { ExactSpecial, LinearizedPlain, LinearizedConstrained, Full };

inline PSDMode parseMode(const std::string& s) {
    if (s == "exact-special") return PSDMode::ExactSpecial;
    if (s == "linearized-plain") return PSDMode::LinearizedPlain;
    if (s == "linearized-constrained") return PSDMode::LinearizedConstrained;
    if (s == "full") return PSDMode::Full;
    throw InputError("unknown mode '" + s + "'");
}

inline std::string modeName(PSDMode m) {
    switch (m) {
        case PSDMode::ExactSpecial: return "exact-special";
        case PSDMode::LinearizedPlain: return "linearized-plain";
        case PSDMode::LinearizedConstrained: return "linearized-constrained";
        case PSDMode::Full: return "full";
    }
    return "?";
}

inline bool exactSupported(const InteractionType& it) {
    return it.isTwoThenOnes() || it.isSingleBlock() || it.isAllOnes();
}

struct PSDOptions {
    bool witnesses = false;
    /// Restrict candidates by chains from solved sub-problems.
    bool refine = true;
    QuadFamily quads = QuadFamily::AllSplits;
    SampleConfig sampling;
    /// In full mode, also count the plain linearized candidates.
    bool plainCount = false;
    unsigned jobs = 1;
};

/// An LC-LEP instance plus search filters whose solution set is the answer
/// of one mode (the candidate set for constrained/full).
struct PSDProblem {
    InteractionType itype;
    PSDMode mode;
    LCLEPInstance instance;
    std::vector<ChainFilter> filters;
    /// True when the instance lives on R^m rather than on the parameters.
    bool linearized = true;
};

namespace detail {

using SubSolver = std::function<SolutionSet(const InteractionType&)>;

inline std::vector<ChainFilter> refinementFilters(const InteractionType& it, const SubSolver& solveSub) {
    std::vector<ChainFilter> filters;
    if (it.n() < 2) return filters;
    for (int v = 1; v <= it.n(); ++v)
        for (int b = 0; b < 2; ++b) {
            const Subproblem sp = subproblem(it, v, b);
            filters.push_back(subproblemFilter(it, v, b, sp.subType, solveSub(sp.subType)));
        }
    return filters;
}

}  // namespace detail

/// Builds the instance for `mode`. Sub-problems needed for refinement are
/// solved with `solveSub`, or recursively when it is empty.
inline PSDProblem psdProblem(const InteractionType& it, PSDMode mode, const PSDOptions& opt = {},
                             detail::SubSolver solveSub = {}) {
    PSDProblem pb{it, mode, {}, {}, true};
    const PSDInstance psd = buildPSD(it);
    switch (mode) {
        case PSDMode::ExactSpecial: {
            if (it.isSingleBlock()) {
                pb.instance = directInstance(psd);
                pb.linearized = false;
            } else if (it.isTwoThenOnes()) {
                auto lin = linearize(psd);
                lin.extraDomain = specialCaseDomain(it);
                pb.instance = linearInstance(lin);
            } else if (it.isAllOnes()) {
                pb.instance = linearInstance(linearize(psd));
            } else {
                throw UnsupportedMode("exact-special is not available for type (" + it.str() + ")");
            }
            return pb;
        }
        case PSDMode::LinearizedPlain:
            pb.instance = linearInstance(linearize(psd));
            return pb;
        case PSDMode::LinearizedConstrained:
        case PSDMode::Full: {
            auto lin = linearize(psd);
            lin.extraDomain = quadConstraints(it, opt.quads);
            pb.instance = linearInstance(lin);
            if (opt.refine) {
                if (!solveSub) {
                    auto memo = std::make_shared<std::map<InteractionType, SolutionSet>>();
                    solveSub = [memo, opt](const InteractionType& sub) {
                        auto found = memo->find(sub);
                        if (found != memo->end()) return found->second;
                        PSDOptions so = opt;
                        so.witnesses = false;
                        const PSDMode m = exactSupported(sub) ? PSDMode::ExactSpecial : PSDMode::LinearizedConstrained;
                        const PSDProblem sp = psdProblem(sub, m, so);
                        SolveOptions sopt;
                        sopt.filters = sp.filters;
                        sopt.jobs = so.jobs;
                        SolutionSet s = lep::solve(sp.instance, sopt);
                        memo->emplace(sub, s);
                        return s;
                    };
                }
                pb.filters = detail::refinementFilters(it, solveSub);
            }
            return pb;
        }
    }
    return pb;
}

struct PSDReport {
    InteractionType itype;
    PSDMode mode = PSDMode::ExactSpecial;
    /// Exact set (exact-special) or candidate set (other modes).
    SolutionSet solutions;
    std::optional<SampleReport> sampling;
    std::vector<LinearExtension> residualOrders;
    std::optional<std::uint64_t> plainCount;

    /// The headline count of the mode: in full mode the witnessed orders.
    std::uint64_t count() const { return sampling ? sampling->witnessed.size() : solutions.size(); }
};

inline PSDReport solvePSD(const InteractionType& it, PSDMode mode, const PSDOptions& opt = {}) {
    PSDReport rep;
    rep.itype = it;
    rep.mode = mode;
    const PSDProblem pb = psdProblem(it, mode, opt);
    SolveOptions sopt;
    sopt.witnesses = opt.witnesses;
    sopt.filters = pb.filters;
    sopt.jobs = opt.jobs;
    rep.solutions = solve(pb.instance, sopt);
    if (mode == PSDMode::Full) {
        const PSDInstance psd = buildPSD(it);
        rep.sampling = sample(psd, opt.sampling);
        rep.residualOrders = residual(rep.solutions, *rep.sampling);
        if (opt.plainCount) rep.plainCount = countSolutions(psdProblem(it, PSDMode::LinearizedPlain).instance);
    }
    return rep;
}

}  // namespace lep
