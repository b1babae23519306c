#pragma once

// Partitioned solving with checkpoints. The search is split into the
// admissible prefixes of a fixed depth; each prefix subtree is one unit of
// work. After every finished unit the checkpoint (pending units, finished
// units, solutions so far) is rewritten atomically.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "lep/io.hpp"

namespace lep {

struct RunOptions {
    std::size_t prefixDepth = 0;
    unsigned jobs = 1;
    bool witnesses = false;
    bool countOnly = false;
    std::string checkpointPath;  // empty: no checkpoint
    std::vector<ChainFilter> filters;
    /// Identifies the instance and filters; stored in the checkpoint.
    std::string digest;
    /// Stop after this many finished units (0: run to completion).
    std::size_t maxUnits = 0;
};

struct Checkpoint {
    std::string digest;
    std::size_t prefixDepth = 0;
    bool witnesses = false;
    bool countOnly = false;
    std::vector<std::vector<int>> pending;
    std::vector<std::vector<int>> done;
    std::vector<std::pair<std::vector<int>, std::optional<RationalVector>>> solutions;
    std::uint64_t count = 0;
};

inline Json checkpointToJson(const Checkpoint& c) {
    Json j;
    j["version"] = 1;
    j["digest"] = c.digest;
    j["prefix_depth"] = c.prefixDepth;
    j["witnesses"] = c.witnesses;
    j["count_only"] = c.countOnly;
    j["pending"] = c.pending;
    j["done"] = c.done;
    j["count"] = c.count;
    j["solutions"] = Json::array();
    for (const auto& [s, w] : c.solutions) {
        Json r;
        r["sigma"] = s;
        if (w) r["witness"] = detail::vectorToJson(*w);
        j["solutions"].push_back(std::move(r));
    }
    return j;
}

inline Checkpoint checkpointFromJson(const Json& j) {
    try {
        Checkpoint c;
        if (j.at("version").get<int>() != 1) throw InputError("unsupported checkpoint version");
        c.digest = j.at("digest").get<std::string>();
        c.prefixDepth = j.at("prefix_depth").get<std::size_t>();
        c.witnesses = j.at("witnesses").get<bool>();
        c.countOnly = j.at("count_only").get<bool>();
        c.pending = j.at("pending").get<std::vector<std::vector<int>>>();
        c.done = j.at("done").get<std::vector<std::vector<int>>>();
        c.count = j.at("count").get<std::uint64_t>();
        for (const auto& r : j.at("solutions")) {
            std::optional<RationalVector> w;
            if (r.contains("witness")) w = detail::vectorFromJson(r["witness"], r["witness"].size(), "witness");
            c.solutions.emplace_back(r.at("sigma").get<std::vector<int>>(), std::move(w));
        }
        return c;
    } catch (const Json::exception& e) {
        throw InputError(std::string("malformed checkpoint: ") + e.what());
    }
}

inline Checkpoint readCheckpoint(const std::string& path) {
    return checkpointFromJson(parseJsonText(readFile(path), path));
}

struct RunResult {
    SolutionSet solutions;  // empty in count-only runs
    std::uint64_t count = 0;
    std::size_t units = 0;
    std::size_t unitsDone = 0;
    bool complete = false;
};

inline RunResult runPartitioned(const LCLEPInstance& inst, const RunOptions& opt,
                                const Checkpoint* resume = nullptr) {
    detail::PreparedInstance prep(inst);
    Checkpoint state;
    if (resume) {
        if (resume->digest != opt.digest) throw InputError("checkpoint belongs to a different instance");
        if (resume->witnesses != opt.witnesses || resume->countOnly != opt.countOnly)
            throw InputError("checkpoint was written with different output options");
        state = *resume;
    } else {
        state.digest = opt.digest;
        state.prefixDepth = opt.prefixDepth;
        state.witnesses = opt.witnesses;
        state.countOnly = opt.countOnly;
        if (opt.prefixDepth == 0) state.pending.push_back({});
        else state.pending = detail::viablePrefixes(prep, opt.filters, {}, opt.prefixDepth);
    }

    RunResult result;
    result.units = state.pending.size() + state.done.size();
    std::mutex mutex;
    auto save = [&] {
        if (!opt.checkpointPath.empty()) writeFileAtomic(opt.checkpointPath, checkpointToJson(state).dump());
    };
    save();

    const std::vector<std::vector<int>> work = state.pending;
    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> finished{0};
    std::exception_ptr err;

    auto worker = [&] {
        for (;;) {
            if (opt.maxUnits && finished.load() >= opt.maxUnits) return;
            const std::size_t u = next.fetch_add(1);
            if (u >= work.size()) return;
            std::vector<std::pair<std::vector<int>, std::optional<RationalVector>>> found;
            std::uint64_t count = 0;
            try {
                prep.withEnumerator(opt.filters, [&](auto& en) {
                    detail::WordVisitor v = [&](const detail::Word& w, const detail::Point& xi) {
                        ++count;
                        if (!opt.countOnly) {
                            std::optional<RationalVector> wit;
                            if (opt.witnesses) wit = toRationalVector(xi);
                            found.emplace_back(w, std::move(wit));
                        }
                        return true;
                    };
                    en.explore(work[u], inst.forms.size(), v);
                    return 0;
                });
            } catch (...) {
                std::lock_guard<std::mutex> lock(mutex);
                if (!err) err = std::current_exception();
                return;
            }
            std::lock_guard<std::mutex> lock(mutex);
            if (opt.maxUnits && finished.load() >= opt.maxUnits) return;
            state.count += count;
            for (auto& f : found) state.solutions.push_back(std::move(f));
            state.pending.erase(std::find(state.pending.begin(), state.pending.end(), work[u]));
            state.done.push_back(work[u]);
            ++finished;
            try {
                save();
            } catch (...) {
                if (!err) err = std::current_exception();
                return;
            }
        }
    };
    const unsigned jobs = std::max(1u, opt.jobs);
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (err) std::rethrow_exception(err);

    result.count = state.count;
    result.unitsDone = state.done.size();
    result.complete = state.pending.empty();
    for (auto& [s, w] : state.solutions) {
        LinearExtension e(s);
        if (w) result.solutions.witnesses.insert_or_assign(e, *w);
        result.solutions.extensions.push_back(std::move(e));
    }
    detail::finalize(result.solutions);
    return result;
}

}  // namespace lep
