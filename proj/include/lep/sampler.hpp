#pragma once

// Witness sampling: integer parameter points drawn uniformly from
// {1..r}^{2n}, evaluated exactly, and recorded by the order of their values.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <map>
#include <mutex>
#include <ostream>
#include <random>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include "lep/psd.hpp"

namespace lep {

struct SampleConfig {
    std::uint64_t radius = 1000;
    std::uint64_t sampleCount = 0;
    std::uint64_t seed = 0;
    unsigned jobs = 1;
};

struct SampleReport {
    std::vector<LinearExtension> witnessed;  // sorted
    std::map<LinearExtension, ParameterPoint> perOrderFirstWitness;
    std::map<LinearExtension, std::uint64_t> firstSampleIndex;
    std::uint64_t tieDiscards = 0;
    std::uint64_t drawn = 0;
};

namespace detail {

/// Samples are generated in blocks; each block has its own generator seeded
/// from (seed, block), so sample i is the same point whatever the sample
/// count or worker count.
constexpr std::uint64_t kSampleBlock = 1u << 16;

inline std::mt19937_64 blockGenerator(std::uint64_t seed, std::uint64_t block) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32)};
    return std::mt19937_64(seq);
}

struct RawWitness {
    std::uint64_t index;
    std::vector<std::uint32_t> point;  // l_1..l_n, d_1..d_n
};

template <class Key>
struct ShardResult {
    std::unordered_map<Key, RawWitness> first;
    std::uint64_t ties = 0;
};

inline void packKey(const std::vector<int>& order, std::uint64_t& key) {
    key = 0;
    for (int e : order) key = (key << 4) | static_cast<std::uint64_t>(e);
}
inline void packKey(const std::vector<int>& order, std::string& key) {
    key.assign(order.begin(), order.end());
}
inline std::vector<int> unpackKey(std::uint64_t key, std::size_t size) {
    std::vector<int> order(size);
    for (std::size_t k = size; k-- > 0;) {
        order[k] = static_cast<int>(key & 15u);
        key >>= 4;
    }
    return order;
}
inline std::vector<int> unpackKey(const std::string& key, std::size_t) {
    return std::vector<int>(key.begin(), key.end());
}

template <class Key>
void sampleRange(const InteractionType& it, const SampleConfig& cfg, std::uint64_t begin, std::uint64_t end,
                 ShardResult<Key>& out) {
    const int n = it.n();
    const int q = it.q();
    const std::size_t size = it.size();
    std::uniform_int_distribution<std::uint64_t> dist(1, cfg.radius);
    std::vector<std::uint32_t> point(2 * n);
    std::vector<std::vector<std::uint64_t>> fv(q);
    for (int j = 0; j < q; ++j) fv[j].resize(std::size_t{1} << it.parts()[j]);
    std::vector<unsigned __int128> values(size);
    std::vector<int> order(size);
    std::vector<std::vector<std::uint32_t>> localOf(size, std::vector<std::uint32_t>(q));
    for (std::size_t i = 0; i < size; ++i)
        for (int j = 0; j < q; ++j) localOf[i][j] = static_cast<std::uint32_t>(it.localIndex(i, j));
    Key key{};

    std::uint64_t idx = begin;
    while (idx < end) {
        const std::uint64_t block = idx / kSampleBlock;
        auto gen = blockGenerator(cfg.seed, block);
        const std::uint64_t blockStart = block * kSampleBlock;
        // Advance to idx inside the block.
        for (std::uint64_t s = blockStart; s < idx; ++s)
            for (int c = 0; c < 2 * n; ++c) (void)dist(gen);
        const std::uint64_t blockEnd = std::min(end, blockStart + kSampleBlock);
        for (; idx < blockEnd; ++idx) {
            for (int c = 0; c < 2 * n; ++c) point[c] = static_cast<std::uint32_t>(dist(gen));
            for (int j = 0; j < q; ++j) {
                const int s = it.blockStart(j);
                const int nj = it.parts()[j];
                std::uint64_t lsum = 0;
                for (int k = s; k < s + nj; ++k) lsum += point[k - 1];
                for (std::size_t a = 0; a < fv[j].size(); ++a) {
                    std::uint64_t v = lsum;
                    for (int k = s; k < s + nj; ++k)
                        if ((a >> (s + nj - 1 - k)) & 1u) v += point[n + k - 1];
                    fv[j][a] = v;
                }
            }
            for (std::size_t i = 0; i < size; ++i) {
                unsigned __int128 v = 1;
                for (int j = 0; j < q; ++j) v *= fv[j][localOf[i][j]];
                values[i] = v;
                order[i] = static_cast<int>(i);
            }
            std::sort(order.begin(), order.end(), [&](int a, int b) { return values[a] < values[b]; });
            bool tie = false;
            for (std::size_t k = 1; k < size && !tie; ++k) tie = values[order[k - 1]] == values[order[k]];
            if (tie) {
                ++out.ties;
                continue;
            }
            packKey(order, key);
            out.first.try_emplace(key, RawWitness{idx, point});
        }
    }
}

template <class Key>
SampleReport sampleWith(const PSDInstance& inst, const SampleConfig& cfg) {
    const auto& it = inst.itype;
    const std::uint64_t total = cfg.sampleCount;
    const unsigned jobs = std::max(1u, cfg.jobs);
    std::vector<ShardResult<Key>> shards(jobs);
    if (jobs == 1) {
        sampleRange(it, cfg, 0, total, shards[0]);
    } else {
        std::vector<std::thread> pool;
        const std::uint64_t per = (total + jobs - 1) / jobs;
        for (unsigned t = 0; t < jobs; ++t) {
            const std::uint64_t b = std::min(total, per * t), e = std::min(total, per * (t + 1));
            pool.emplace_back([&, t, b, e] { sampleRange(it, cfg, b, e, shards[t]); });
        }
        for (auto& th : pool) th.join();
    }
    std::unordered_map<Key, RawWitness> merged;
    SampleReport report;
    report.drawn = total;
    for (auto& s : shards) {
        report.tieDiscards += s.ties;
        for (auto& [k, w] : s.first) {
            auto [pos, inserted] = merged.try_emplace(k, w);
            if (!inserted && w.index < pos->second.index) pos->second = w;
        }
    }
    const int n = it.n();
    for (auto& [k, w] : merged) {
        LinearExtension sigma(unpackKey(k, it.size()));
        ParameterPoint p{RationalVector(n), RationalVector(n)};
        for (int c = 0; c < n; ++c) {
            p.ell[c] = w.point[c];
            p.delta[c] = w.point[n + c];
        }
        report.firstSampleIndex.emplace(sigma, w.index);
        report.perOrderFirstWitness.emplace(sigma, std::move(p));
        report.witnessed.push_back(std::move(sigma));
    }
    std::sort(report.witnessed.begin(), report.witnessed.end());
    return report;
}

}  // namespace detail

/// Deterministic in (seed, sampleCount, radius); independent of jobs.
inline SampleReport sample(const PSDInstance& inst, const SampleConfig& cfg) {
    if (cfg.radius < 1) throw InputError("sampling radius must be at least 1");
    if (cfg.radius > 0xffffffffu) throw InputError("sampling radius must fit in 32 bits");
    const auto& it = inst.itype;
    // Products must fit in 128 bits.
    double bits = 0;
    for (int nj : it.parts()) bits += std::log2(2.0 * static_cast<double>(cfg.radius) * nj);
    if (bits >= 127) throw TooLarge("polynomial values exceed 128-bit range for this radius");
    if (it.size() <= 16) return detail::sampleWith<std::uint64_t>(inst, cfg);
    return detail::sampleWith<std::string>(inst, cfg);
}

/// candidates minus witnessed, sorted.
inline std::vector<LinearExtension> residual(const SolutionSet& candidates, const SampleReport& report) {
    for (const auto& s : report.witnessed)
        if (!candidates.contains(s)) {
            std::ostringstream os;
            os << "witnessed order " << s << " is not a candidate";
            throw WitnessOutsideCandidates(os.str());
        }
    std::vector<LinearExtension> out;
    std::set_difference(candidates.extensions.begin(), candidates.extensions.end(), report.witnessed.begin(),
                        report.witnessed.end(), std::back_inserter(out));
    return out;
}

namespace detail {

/// Expanded integer polynomial in l_1..l_n, d_1..d_n.
using Monomial = std::vector<int>;
using Polynomial = std::map<Monomial, mpz_class, std::greater<>>;

inline Polynomial expand(const PSDInstance& inst, std::size_t index) {
    const auto& it = inst.itype;
    const int n = it.n();
    Polynomial acc{{Monomial(2 * n, 0), mpz_class(1)}};
    for (int j = 0; j < it.q(); ++j) {
        std::vector<int> factorVars;
        for (int k = it.blockStart(j); k < it.blockStart(j) + it.parts()[j]; ++k) factorVars.push_back(k - 1);
        for (int k : inst.polynomials[index].deltaSubsets[j]) factorVars.push_back(n + k - 1);
        Polynomial next;
        for (const auto& [mono, c] : acc)
            for (int v : factorVars) {
                Monomial m = mono;
                ++m[v];
                next[m] += c;
            }
        acc = std::move(next);
    }
    return acc;
}

inline std::string formatPolynomial(const Polynomial& p, int n) {
    std::string s;
    for (const auto& [mono, c] : p) {
        if (c == 0) continue;
        const bool neg = c < 0;
        const mpz_class mag = abs(c);
        if (s.empty()) s += neg ? "-" : "";
        else s += neg ? " - " : " + ";
        std::string vars;
        for (int v = 0; v < 2 * n; ++v) {
            if (!mono[v]) continue;
            if (!vars.empty()) vars += "*";
            vars += (v < n ? "l" : "d") + std::to_string((v % n) + 1);
            if (mono[v] > 1) vars += "^" + std::to_string(mono[v]);
        }
        if (vars.empty()) s += mag.get_str();
        else if (mag == 1) s += vars;
        else s += mag.get_str() + "*" + vars;
    }
    return s.empty() ? "0" : s;
}

}  // namespace detail

/// Plain-text systems for an external decision procedure, one record per
/// residual order.
inline void writeResidual(const PSDInstance& inst, const std::vector<LinearExtension>& residualOrders,
                          std::ostream& os) {
    const int n = inst.itype.n();
    os << "# psd-residual v1 type=" << inst.itype.str() << "\n";
    std::vector<detail::Polynomial> expanded;
    for (std::size_t i = 0; i < inst.itype.size(); ++i) expanded.push_back(detail::expand(inst, i));
    for (const auto& s : residualOrders) {
        if (s.size() != inst.itype.size()) throw DimensionMismatch("residual order has wrong length");
        os << "\nsigma:";
        for (std::size_t k = 0; k < s.size(); ++k) os << ' ' << s[k];
        os << "\n";
        for (int k = 1; k <= n; ++k) os << "l" << k << " > 0\n";
        for (int k = 1; k <= n; ++k) os << "d" << k << " > 0\n";
        for (std::size_t k = 1; k < s.size(); ++k) {
            detail::Polynomial diff = expanded[s[k]];
            for (const auto& [m, c] : expanded[s[k - 1]]) diff[m] -= c;
            os << detail::formatPolynomial(diff, n) << " > 0\n";
        }
    }
}

inline void exportResidual(const PSDInstance& inst, const std::vector<LinearExtension>& residualOrders,
                           const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    writeResidual(inst, residualOrders, out);
    if (!out) throw std::runtime_error("write to " + path + " failed");
}

}  // namespace lep
