#pragma once

// JSON formats: LC-LEP instance files, JSONL solution files and PSD problem
// files. Rationals are always written as "p/q" strings.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "lep/lclep.hpp"
#include "lep/psd.hpp"

namespace lep {

using Json = nlohmann::json;

namespace detail {

inline Rational rationalFromJson(const Json& j) {
    if (j.is_string()) return parseRational(j.get<std::string>());
    if (j.is_number_integer()) return Rational(mpz_class(std::to_string(j.get<long long>())));
    throw InputError("rational must be a \"p/q\" string or an integer");
}

inline RationalVector vectorFromJson(const Json& j, std::size_t dim, const char* what) {
    if (!j.is_array()) throw InputError(std::string(what) + " must be an array");
    if (j.size() != dim)
        throw InputError(std::string(what) + " has " + std::to_string(j.size()) + " entries, expected " +
                         std::to_string(dim) + " (forms must be homogeneous linear)");
    RationalVector v(dim);
    for (std::size_t i = 0; i < dim; ++i) v[i] = rationalFromJson(j[i]);
    return v;
}

inline Json vectorToJson(const RationalVector& v) {
    Json a = Json::array();
    for (const auto& x : v) a.push_back(formatRational(x));
    return a;
}

}  // namespace detail

inline Json instanceToJson(const LCLEPInstance& inst) {
    Json j;
    j["dimension"] = inst.dimension;
    j["forms"] = Json::array();
    for (const auto& f : inst.forms) j["forms"].push_back(detail::vectorToJson(f.coeffs));
    j["covers"] = Json::array();
    for (auto [a, b] : inst.po.covers()) j["covers"].push_back({a, b});
    j["domain_forms"] = Json::array();
    for (const auto& f : inst.domainForms) j["domain_forms"].push_back(detail::vectorToJson(f.coeffs));
    return j;
}

/// Throws InputError on malformed data and CyclicRefinement on cyclic covers.
inline LCLEPInstance instanceFromJson(const Json& j) {
    if (!j.is_object()) throw InputError("instance must be a JSON object");
    if (!j.contains("dimension") || !j["dimension"].is_number_unsigned())
        throw InputError("instance needs a non-negative integer \"dimension\"");
    if (!j.contains("forms") || !j["forms"].is_array()) throw InputError("instance needs a \"forms\" array");
    LCLEPInstance inst;
    inst.dimension = j["dimension"].get<std::size_t>();
    for (const auto& f : j["forms"]) inst.forms.push_back({detail::vectorFromJson(f, inst.dimension, "form")});
    if (inst.forms.empty()) throw InputError("instance has no forms");
    std::vector<std::pair<int, int>> rel;
    if (j.contains("covers")) {
        if (!j["covers"].is_array()) throw InputError("\"covers\" must be an array");
        for (const auto& c : j["covers"]) {
            if (!c.is_array() || c.size() != 2 || !c[0].is_number_integer() || !c[1].is_number_integer())
                throw InputError("each cover must be a pair [a, b]");
            rel.emplace_back(c[0].get<int>(), c[1].get<int>());
        }
    }
    inst.po = PartialOrder(inst.forms.size(), rel);
    if (j.contains("domain_forms")) {
        if (!j["domain_forms"].is_array()) throw InputError("\"domain_forms\" must be an array");
        for (const auto& f : j["domain_forms"])
            inst.domainForms.push_back({detail::vectorFromJson(f, inst.dimension, "domain form")});
    }
    return inst;
}

inline Json parseJsonText(const std::string& text, const std::string& origin) {
    try {
        return Json::parse(text);
    } catch (const Json::exception& e) {
        throw InputError(origin + ": " + e.what());
    }
}

inline std::string readFile(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

inline LCLEPInstance readInstance(const std::string& path) {
    return instanceFromJson(parseJsonText(readFile(path), path));
}

/// Writes via a temporary file and a rename so readers never see a partial
/// file.
inline void writeFileAtomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp + " for writing");
        out << content;
        out.flush();
        if (!out) throw std::runtime_error("write to " + tmp + " failed");
    }
    std::filesystem::rename(tmp, path);
}

struct SolutionRecord {
    std::vector<int> sigma;
    std::optional<RationalVector> witness;
    std::optional<ParameterPoint> parameter;
};

inline std::string solutionLine(const LinearExtension& s, const RationalVector* witness,
                                const ParameterPoint* parameter = nullptr) {
    Json j;
    j["sigma"] = s.word();
    if (witness) j["witness"] = detail::vectorToJson(*witness);
    if (parameter) {
        j["parameter"] = {{"ell", detail::vectorToJson(parameter->ell)},
                          {"delta", detail::vectorToJson(parameter->delta)}};
    }
    return j.dump();
}

inline void writeSolutions(std::ostream& os, const SolutionSet& s) {
    for (const auto& e : s.extensions) {
        auto w = s.witnesses.find(e);
        os << solutionLine(e, w == s.witnesses.end() ? nullptr : &w->second) << '\n';
    }
}

/// One record per non-empty line.
inline std::vector<SolutionRecord> readSolutions(std::istream& in) {
    std::vector<SolutionRecord> out;
    std::string line;
    std::size_t lineNo = 0;
    while (std::getline(in, line)) {
        ++lineNo;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const Json j = parseJsonText(line, "solution line " + std::to_string(lineNo));
        if (!j.is_object() || !j.contains("sigma") || !j["sigma"].is_array())
            throw InputError("solution line " + std::to_string(lineNo) + " needs a \"sigma\" array");
        SolutionRecord r;
        for (const auto& x : j["sigma"]) {
            if (!x.is_number_integer()) throw InputError("sigma entries must be integers");
            r.sigma.push_back(x.get<int>());
        }
        if (j.contains("witness")) {
            const auto& w = j["witness"];
            if (!w.is_array()) throw InputError("witness must be an array");
            r.witness = detail::vectorFromJson(w, w.size(), "witness");
        }
        if (j.contains("parameter")) {
            const auto& p = j["parameter"];
            if (!p.is_object() || !p.contains("ell") || !p.contains("delta"))
                throw InputError("parameter needs \"ell\" and \"delta\"");
            r.parameter = ParameterPoint{detail::vectorFromJson(p["ell"], p["ell"].size(), "ell"),
                                         detail::vectorFromJson(p["delta"], p["delta"].size(), "delta")};
        }
        out.push_back(std::move(r));
    }
    return out;
}

struct PSDProblemFile {
    InteractionType itype;
    std::string mode;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> samples;
};

inline PSDProblemFile psdProblemFromJson(const Json& j) {
    if (!j.is_object() || !j.contains("interaction_type") || !j["interaction_type"].is_array())
        throw InputError("PSD problem needs an \"interaction_type\" array");
    std::vector<int> parts;
    for (const auto& x : j["interaction_type"]) {
        if (!x.is_number_integer()) throw InputError("interaction_type entries must be integers");
        parts.push_back(x.get<int>());
    }
    PSDProblemFile f{InteractionType(parts), "exact-special", std::nullopt, std::nullopt};
    if (j.contains("mode")) {
        if (!j["mode"].is_string()) throw InputError("mode must be a string");
        f.mode = j["mode"].get<std::string>();
    }
    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned()) throw InputError("seed must be a non-negative integer");
        f.seed = j["seed"].get<std::uint64_t>();
    }
    if (j.contains("samples")) {
        if (!j["samples"].is_number_unsigned()) throw InputError("samples must be a non-negative integer");
        f.samples = j["samples"].get<std::uint64_t>();
    }
    return f;
}

/// 64-bit FNV-1a, used to tie checkpoints to the instance they belong to.
inline std::string fnv1a(const std::string& data) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace lep
