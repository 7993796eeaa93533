#pragma once

// JSON input formats. Matrices are lists of rows of [re, im] pairs.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qsc/dutchbook.hpp"
#include "qsc/linalg.hpp"
#include "qsc/states.hpp"

namespace qsc::io {

using Json = nlohmann::json;

inline std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::ParseError, "cannot open '" + path + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline Json parse_text(const std::string& text, const std::string& what = "input")
{
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw Error(ErrorCode::ParseError, what + ": " + e.what());
    }
}

/// 64-bit FNV-1a of the raw bytes.
inline std::uint64_t fnv1a64(const std::string& bytes)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::string hex64(std::uint64_t v)
{
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

namespace detail {

inline void require_keys(const Json& j, std::initializer_list<const char*> allowed,
                         std::initializer_list<const char*> required, const std::string& where)
{
    if (!j.is_object()) {
        throw Error(ErrorCode::ParseError, where + " must be an object");
    }
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool known = false;
        for (const char* k : allowed) {
            known = known || it.key() == k;
        }
        if (!known) {
            throw Error(ErrorCode::ParseError, where + ": unknown key '" + it.key() + "'");
        }
    }
    for (const char* k : required) {
        if (!j.contains(k)) {
            throw Error(ErrorCode::ParseError, where + ": missing key '" + std::string(k) + "'");
        }
    }
}

inline double number(const Json& j, const std::string& where)
{
    if (!j.is_number()) {
        throw Error(ErrorCode::ParseError, where + " must be a number");
    }
    return j.get<double>();
}

inline std::string text(const Json& j, const std::string& where)
{
    if (!j.is_string()) {
        throw Error(ErrorCode::ParseError, where + " must be a string");
    }
    return j.get<std::string>();
}

} // namespace detail

inline Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

inline Complex complex_from_json(const Json& j, const std::string& where)
{
    if (!j.is_array() || j.size() != 2) {
        throw Error(ErrorCode::ParseError, where + " must be a [re, im] pair");
    }
    return {detail::number(j[0], where), detail::number(j[1], where)};
}

inline Json vector_to_json(const Vector& v)
{
    Json out = Json::array();
    for (Index i = 0; i < v.size(); ++i) {
        out.push_back(complex_to_json(v(i)));
    }
    return out;
}

inline Json matrix_to_json(const Matrix& m)
{
    Json out = Json::array();
    for (Index r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (Index c = 0; c < m.cols(); ++c) {
            row.push_back(complex_to_json(m(r, c)));
        }
        out.push_back(std::move(row));
    }
    return out;
}

inline Matrix matrix_from_json(const Json& j, Index dim, const std::string& where)
{
    if (!j.is_array() || Index(j.size()) != dim) {
        throw Error(ErrorCode::NotSquare, where + " must have " + std::to_string(dim) + " rows");
    }
    Matrix m(dim, dim);
    for (Index r = 0; r < dim; ++r) {
        const Json& row = j[std::size_t(r)];
        if (!row.is_array() || Index(row.size()) != dim) {
            throw Error(ErrorCode::NotSquare,
                        where + " row " + std::to_string(r) + " must have " + std::to_string(dim) +
                            " entries");
        }
        for (Index c = 0; c < dim; ++c) {
            m(r, c) = complex_from_json(row[std::size_t(c)], where);
        }
    }
    return m;
}

enum class InputKind { Quantum, Classical };

inline InputKind detect_kind(const Json& j)
{
    if (j.is_object() && j.contains("states")) {
        return InputKind::Quantum;
    }
    if (j.is_object() && j.contains("parties")) {
        return InputKind::Classical;
    }
    throw Error(ErrorCode::ParseError, "input has neither 'states' nor 'parties'");
}

/// {"dim": D, "states": [{"label": "A", "matrix": [[[re,im],...],...]}]}
inline StateEnsemble parse_states(const Json& j, const Tolerances& tol = {})
{
    detail::require_keys(j, {"dim", "states"}, {"dim", "states"}, "state file");
    if (!j["dim"].is_number_integer() || j["dim"].get<long long>() < 1) {
        throw Error(ErrorCode::ParseError, "'dim' must be a positive integer");
    }
    const Index dim = j["dim"].get<Index>();
    if (!j["states"].is_array()) {
        throw Error(ErrorCode::ParseError, "'states' must be a list");
    }
    std::vector<std::pair<std::string, Matrix>> raw;
    for (std::size_t i = 0; i < j["states"].size(); ++i) {
        const Json& s = j["states"][i];
        const std::string where = "states[" + std::to_string(i) + "]";
        detail::require_keys(s, {"label", "matrix"}, {"label", "matrix"}, where);
        raw.emplace_back(detail::text(s["label"], where + ".label"),
                         matrix_from_json(s["matrix"], dim, where + ".matrix"));
    }
    return make_ensemble(raw, tol);
}

inline Json serialize_states(const StateEnsemble& e)
{
    Json states = Json::array();
    for (const auto& s : e) {
        states.push_back({{"label", s.label()}, {"matrix", matrix_to_json(s.matrix())}});
    }
    return {{"dim", e.dim()}, {"states", states}};
}

/// {"outcomes": K, "parties": [{"label": "A", "probs": [...]}]}
inline ClassicalAssignment parse_classical(const Json& j)
{
    detail::require_keys(j, {"outcomes", "parties"}, {"outcomes", "parties"}, "classical file");
    if (!j["outcomes"].is_number_integer() || j["outcomes"].get<long long>() < 1) {
        throw Error(ErrorCode::ParseError, "'outcomes' must be a positive integer");
    }
    ClassicalAssignment a;
    a.outcomes = j["outcomes"].get<std::size_t>();
    if (!j["parties"].is_array()) {
        throw Error(ErrorCode::ParseError, "'parties' must be a list");
    }
    for (std::size_t i = 0; i < j["parties"].size(); ++i) {
        const Json& p = j["parties"][i];
        const std::string where = "parties[" + std::to_string(i) + "]";
        detail::require_keys(p, {"label", "probs"}, {"label", "probs"}, where);
        ClassicalParty party{detail::text(p["label"], where + ".label"), {}};
        if (!p["probs"].is_array()) {
            throw Error(ErrorCode::ParseError, where + ".probs must be a list");
        }
        for (const auto& v : p["probs"]) {
            party.probs.push_back(detail::number(v, where + ".probs"));
        }
        a.parties.push_back(std::move(party));
    }
    a.validate();
    return a;
}

inline Json serialize_classical(const ClassicalAssignment& a)
{
    Json parties = Json::array();
    for (const auto& p : a.parties) {
        parties.push_back({{"label", p.label}, {"probs", p.probs}});
    }
    return {{"outcomes", a.outcomes}, {"parties", parties}};
}

// ---------------------------------------------------------------------------
// Betting records

template <typename T>
struct Labelled {
    std::string label;
    T value;
};

struct DutchbookInput {
    std::vector<Labelled<dutchbook::ExclusivePairAssignment>> exclusive;
    std::vector<Labelled<dutchbook::ConditionalAssignment>> conditional;
    std::vector<Labelled<std::vector<double>>> distributions;
};

/// {"exclusive": [{"label", "p_E", "p_F", "p_EvF"}],
///  "conditional": [{"label", "p_F", "p_EandF", "p_EgivenF"}],
///  "distributions": [{"label", "probs"}]}; every section optional.
inline DutchbookInput parse_dutchbook(const Json& j)
{
    detail::require_keys(j, {"exclusive", "conditional", "distributions"}, {}, "betting file");
    DutchbookInput in;
    const auto list = [&](const char* key) -> Json {
        if (!j.contains(key)) {
            return Json::array();
        }
        if (!j[key].is_array()) {
            throw Error(ErrorCode::ParseError, std::string("'") + key + "' must be a list");
        }
        return j[key];
    };
    const auto where = [](const char* key, std::size_t i) {
        return std::string(key) + "[" + std::to_string(i) + "]";
    };
    const Json ex = list("exclusive");
    for (std::size_t i = 0; i < ex.size(); ++i) {
        const std::string w = where("exclusive", i);
        detail::require_keys(ex[i], {"label", "p_E", "p_F", "p_EvF"}, {"label", "p_E", "p_F", "p_EvF"}, w);
        in.exclusive.push_back({detail::text(ex[i]["label"], w),
                                {detail::number(ex[i]["p_E"], w), detail::number(ex[i]["p_F"], w),
                                 detail::number(ex[i]["p_EvF"], w)}});
    }
    const Json co = list("conditional");
    for (std::size_t i = 0; i < co.size(); ++i) {
        const std::string w = where("conditional", i);
        detail::require_keys(co[i], {"label", "p_F", "p_EandF", "p_EgivenF"},
                             {"label", "p_F", "p_EandF", "p_EgivenF"}, w);
        in.conditional.push_back({detail::text(co[i]["label"], w),
                                  {detail::number(co[i]["p_F"], w),
                                   detail::number(co[i]["p_EandF"], w),
                                   detail::number(co[i]["p_EgivenF"], w)}});
    }
    const Json di = list("distributions");
    for (std::size_t i = 0; i < di.size(); ++i) {
        const std::string w = where("distributions", i);
        detail::require_keys(di[i], {"label", "probs"}, {"label", "probs"}, w);
        if (!di[i]["probs"].is_array() || di[i]["probs"].empty()) {
            throw Error(ErrorCode::ParseError, w + ".probs must be a nonempty list");
        }
        std::vector<double> probs;
        for (const auto& v : di[i]["probs"]) {
            probs.push_back(detail::number(v, w + ".probs"));
        }
        in.distributions.push_back({detail::text(di[i]["label"], w), std::move(probs)});
    }
    return in;
}

/// {"declarations": [{"label": "...", "possible": [true, false, ...]}]}
inline std::map<std::string, dutchbook::PossibilityDeclaration> parse_possibility(const Json& j)
{
    detail::require_keys(j, {"declarations"}, {"declarations"}, "possibility file");
    if (!j["declarations"].is_array()) {
        throw Error(ErrorCode::ParseError, "'declarations' must be a list");
    }
    std::map<std::string, dutchbook::PossibilityDeclaration> out;
    for (std::size_t i = 0; i < j["declarations"].size(); ++i) {
        const Json& d = j["declarations"][i];
        const std::string w = "declarations[" + std::to_string(i) + "]";
        detail::require_keys(d, {"label", "possible"}, {"label", "possible"}, w);
        dutchbook::PossibilityDeclaration decl;
        if (!d["possible"].is_array()) {
            throw Error(ErrorCode::ParseError, w + ".possible must be a list");
        }
        for (const auto& b : d["possible"]) {
            if (!b.is_boolean()) {
                throw Error(ErrorCode::ParseError, w + ".possible entries must be booleans");
            }
            decl.possible.push_back(b.get<bool>());
        }
        const std::string label = detail::text(d["label"], w + ".label");
        if (!out.emplace(label, std::move(decl)).second) {
            throw Error(ErrorCode::DuplicateLabel, "declaration '" + label + "' repeated");
        }
    }
    return out;
}

} // namespace qsc::io
