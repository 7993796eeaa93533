#pragma once

// Report serialization. JSON output carries schema "qsc/1"; witnesses use the
// same [re, im] matrix layout as the input files so one parser reads both.

#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qsc/dutchbook.hpp"
#include "qsc/io.hpp"
#include "qsc/oracle.hpp"
#include "qsc/states.hpp"
#include "qsc/verdict.hpp"

namespace qsc::report {

using io::Json;

inline constexpr const char* kSchema = "qsc/1";
inline constexpr const char* kEvidenceOnly =
    "no contradicting measurement found; this is evidence of compatibility only, not a proof";

/// 0 when every verdict is compatible, 1 when any is incompatible, otherwise 2.
inline int exit_code(const std::vector<Verdict>& verdicts)
{
    bool undecided = false;
    for (const auto& v : verdicts) {
        if (v.incompatible()) {
            return 1;
        }
        undecided = undecided || v.status == Status::Undecided;
    }
    return undecided ? 2 : 0;
}

struct InputDigest {
    std::string path;
    std::string fnv1a64;

    static InputDigest of(const std::string& path, const std::string& bytes)
    {
        return {path, io::hex64(io::fnv1a64(bytes))};
    }
};

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

// ---------------------------------------------------------------------------
// Scalars and matrices

/// JSON has no infinity; non-finite values become null.
inline Json number(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

inline double number_from(const Json& j, const std::string& where)
{
    if (j.is_null()) {
        return std::numeric_limits<double>::infinity();
    }
    return io::detail::number(j, where);
}

/// Rectangular counterpart of io::matrix_from_json.
inline Matrix rect_from_json(const Json& j, const std::string& where)
{
    if (!j.is_array() || j.empty() || !j[0].is_array()) {
        throw Error(ErrorCode::ParseError, where + " must be a list of rows");
    }
    const Index rows = Index(j.size());
    const Index cols = Index(j[0].size());
    Matrix m(rows, cols);
    for (Index r = 0; r < rows; ++r) {
        const Json& row = j[std::size_t(r)];
        if (!row.is_array() || Index(row.size()) != cols) {
            throw Error(ErrorCode::ParseError, where + " has ragged rows");
        }
        for (Index c = 0; c < cols; ++c) {
            m(r, c) = io::complex_from_json(row[std::size_t(c)], where);
        }
    }
    return m;
}

inline Vector vector_from_json(const Json& j, const std::string& where)
{
    if (!j.is_array() || j.empty()) {
        throw Error(ErrorCode::ParseError, where + " must be a nonempty list");
    }
    Vector v(Index(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) {
        v(Index(i)) = io::complex_from_json(j[i], where);
    }
    return v;
}

inline Json tolerances_to_json(const Tolerances& t)
{
    return {{"rank", t.rank}, {"orth", t.orth}, {"zero", t.zero}};
}

inline Tolerances tolerances_from_json(const Json& j)
{
    io::detail::require_keys(j, {"rank", "orth", "zero"}, {"rank", "orth", "zero"}, "tolerances");
    return {io::detail::number(j["rank"], "rank"), io::detail::number(j["orth"], "orth"),
            io::detail::number(j["zero"], "zero")};
}

/// [{"label": L, "probs": [p_1, ...]}] for every party over the given elements.
inline Json probability_table(const StateEnsemble& ensemble, const std::vector<Matrix>& elements)
{
    Json out = Json::array();
    for (const auto& s : ensemble) {
        Json probs = Json::array();
        for (const auto& e : elements) {
            probs.push_back(s.probability(e));
        }
        out.push_back({{"label", s.label()}, {"probs", probs}});
    }
    return out;
}

inline Json povm_to_json(const Povm& p)
{
    Json out = Json::array();
    for (const auto& e : p.elements) {
        out.push_back(io::matrix_to_json(e));
    }
    return out;
}

inline Povm povm_from_json(const Json& j, const std::string& where)
{
    if (!j.is_array() || j.empty()) {
        throw Error(ErrorCode::ParseError, where + " must be a nonempty list of matrices");
    }
    Povm p;
    const Index dim = Index(j[0].size());
    for (const auto& e : j) {
        p.elements.push_back(io::matrix_from_json(e, dim, where));
    }
    return p;
}

// ---------------------------------------------------------------------------
// Witnesses and verdicts

/// Serializes a witness. When `ensemble` is given, measurement-type witnesses
/// also record every party's per-outcome probabilities.
inline Json witness_to_json(const Witness& w, const StateEnsemble* ensemble = nullptr)
{
    Json out = {{"kind", std::string(witness_kind(w))}};
    std::visit(
        [&](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, witness::SharedSupportVector>) {
                out["vector"] = io::vector_to_json(x.vector);
            } else if constexpr (std::is_same_v<T, witness::CommonSupport>) {
                out["frame"] = io::matrix_to_json(x.frame);
            } else if constexpr (std::is_same_v<T, witness::DiscordantVector>) {
                out["vector"] = io::vector_to_json(x.vector);
                out["positive"] = x.positive;
                out["zero"] = x.zero;
            } else if constexpr (std::is_same_v<T, witness::NullSpan>) {
                Json vs = Json::array();
                for (const auto& [label, v] : x.vectors) {
                    vs.push_back({{"label", label}, {"vector", io::vector_to_json(v)}});
                }
                out["vectors"] = vs;
            } else if constexpr (std::is_same_v<T, witness::ContradictingMeasurement>) {
                out["odop"] = x.odop;
                out["elements"] = povm_to_json(x.povm);
                out["contradicted"] = x.contradicted;
                if (ensemble) {
                    out["probabilities"] = probability_table(*ensemble, x.povm.elements);
                }
            } else if constexpr (std::is_same_v<T, witness::WBasis>) {
                out["basis"] = io::matrix_to_json(x.basis);
                if (ensemble) {
                    out["probabilities"] =
                        probability_table(*ensemble, Povm::from_basis(x.basis).elements);
                }
            } else if constexpr (std::is_same_v<T, witness::OrthogonalPair> ||
                                 std::is_same_v<T, witness::PairOverlap>) {
                out["a"] = x.a;
                out["b"] = x.b;
                out["overlap"] = x.overlap;
            } else if constexpr (std::is_same_v<T, witness::ClosedForm>) {
                out["rule"] = x.rule;
                Json values = Json::array();
                for (const auto& [k, v] : x.values) {
                    values.push_back({{"name", k}, {"value", number(v)}});
                }
                out["values"] = values;
            } else if constexpr (std::is_same_v<T, witness::SharedOutcome>) {
                out["outcome"] = x.outcome;
            } else if constexpr (std::is_same_v<T, witness::OutcomeContradiction>) {
                out["contradicted"] = x.contradicted;
            } else if constexpr (std::is_same_v<T, witness::CommonOutcomeSupport>) {
                out["outcomes"] = x.outcomes;
            } else if constexpr (std::is_same_v<T, witness::DiscordantOutcome>) {
                out["outcome"] = x.outcome;
                out["positive"] = x.positive;
                out["zero"] = x.zero;
            }
        },
        w);
    return out;
}

inline Witness witness_from_json(const Json& j)
{
    using io::detail::text;
    if (!j.is_object() || !j.contains("kind")) {
        throw Error(ErrorCode::ParseError, "witness lacks 'kind'");
    }
    const std::string kind = text(j["kind"], "witness.kind");
    const auto labels = [](const Json& a, const std::string& where) {
        std::vector<std::string> out;
        if (!a.is_array()) {
            throw Error(ErrorCode::ParseError, where + " must be a list");
        }
        for (const auto& s : a) {
            out.push_back(io::detail::text(s, where));
        }
        return out;
    };
    const auto index = [](const Json& a, const std::string& where) {
        if (!a.is_number_unsigned()) {
            throw Error(ErrorCode::ParseError, where + " must be a non-negative integer");
        }
        return a.get<std::size_t>();
    };
    if (kind == "shared_support_vector") {
        return witness::SharedSupportVector{vector_from_json(j.at("vector"), "vector")};
    }
    if (kind == "common_support") {
        return witness::CommonSupport{rect_from_json(j.at("frame"), "frame")};
    }
    if (kind == "discordant_vector") {
        return witness::DiscordantVector{vector_from_json(j.at("vector"), "vector"),
                                         text(j.at("positive"), "positive"),
                                         text(j.at("zero"), "zero")};
    }
    if (kind == "null_span") {
        witness::NullSpan n;
        for (const auto& v : j.at("vectors")) {
            n.vectors.emplace_back(text(v.at("label"), "label"),
                                   vector_from_json(v.at("vector"), "vector"));
        }
        return n;
    }
    if (kind == "contradicting_measurement") {
        witness::ContradictingMeasurement m;
        m.odop = j.at("odop").get<bool>();
        m.povm = povm_from_json(j.at("elements"), "elements");
        m.contradicted = labels(j.at("contradicted"), "contradicted");
        return m;
    }
    if (kind == "w_basis") {
        return witness::WBasis{rect_from_json(j.at("basis"), "basis")};
    }
    if (kind == "orthogonal_pair") {
        return witness::OrthogonalPair{text(j.at("a"), "a"), text(j.at("b"), "b"),
                                       number_from(j.at("overlap"), "overlap")};
    }
    if (kind == "pair_overlap") {
        return witness::PairOverlap{text(j.at("a"), "a"), text(j.at("b"), "b"),
                                    number_from(j.at("overlap"), "overlap")};
    }
    if (kind == "closed_form") {
        witness::ClosedForm cf{text(j.at("rule"), "rule"), {}};
        for (const auto& v : j.at("values")) {
            cf.values.emplace_back(text(v.at("name"), "name"), number_from(v.at("value"), "value"));
        }
        return cf;
    }
    if (kind == "shared_outcome") {
        return witness::SharedOutcome{index(j.at("outcome"), "outcome")};
    }
    if (kind == "outcome_contradiction") {
        return witness::OutcomeContradiction{labels(j.at("contradicted"), "contradicted")};
    }
    if (kind == "common_outcome_support") {
        witness::CommonOutcomeSupport c;
        for (const auto& k : j.at("outcomes")) {
            c.outcomes.push_back(index(k, "outcomes"));
        }
        return c;
    }
    if (kind == "discordant_outcome") {
        return witness::DiscordantOutcome{index(j.at("outcome"), "outcome"),
                                          text(j.at("positive"), "positive"),
                                          text(j.at("zero"), "zero")};
    }
    throw Error(ErrorCode::ParseError, "unknown witness kind '" + kind + "'");
}

inline Json verdict_to_json(const Verdict& v, const StateEnsemble* ensemble = nullptr)
{
    Json out = {{"criterion", std::string(to_string(v.criterion))},
                {"status", std::string(to_string(v.status))},
                {"margin", number(v.margin)},
                {"boundary", v.boundary},
                {"witness", witness_to_json(v.witness, ensemble)}};
    if (!v.note.empty()) {
        out["note"] = v.note;
    }
    return out;
}

inline Criterion criterion_from_string(const std::string& s)
{
    for (int c = 0; c <= int(Criterion::CLASSICAL_W_PRIME); ++c) {
        if (to_string(Criterion(c)) == s) {
            return Criterion(c);
        }
    }
    throw Error(ErrorCode::ParseError, "unknown criterion '" + s + "'");
}

inline Status status_from_string(const std::string& s)
{
    for (Status st : {Status::Compatible, Status::Incompatible, Status::Undecided}) {
        if (to_string(st) == s) {
            return st;
        }
    }
    throw Error(ErrorCode::ParseError, "unknown status '" + s + "'");
}

inline Verdict verdict_from_json(const Json& j)
{
    Verdict v;
    v.criterion = criterion_from_string(io::detail::text(j.at("criterion"), "criterion"));
    v.status = status_from_string(io::detail::text(j.at("status"), "status"));
    v.margin = number_from(j.at("margin"), "margin");
    v.boundary = j.at("boundary").get<bool>();
    v.witness = witness_from_json(j.at("witness"));
    if (j.contains("note")) {
        v.note = io::detail::text(j["note"], "note");
    }
    return v;
}

// ---------------------------------------------------------------------------
// Text helpers

inline std::string fmt(double x)
{
    if (!std::isfinite(x)) {
        return x > 0 ? "inf" : (x < 0 ? "-inf" : "nan");
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

inline std::string fmt(Complex z)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%+.6f%+.6fi", z.real(), z.imag());
    return buf;
}

inline std::string fmt(const Vector& v)
{
    std::string s = "(";
    for (Index i = 0; i < v.size(); ++i) {
        s += (i ? ", " : "") + fmt(v(i));
    }
    return s + ")";
}

inline std::string join(const std::vector<std::string>& xs, const char* sep = ", ")
{
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        s += (i ? sep : "") + xs[i];
    }
    return s;
}

/// Witness lines for the text report, indented under the verdict line.
inline std::string describe(const Witness& w, const StateEnsemble* ensemble)
{
    std::ostringstream os;
    os << "    witness: " << witness_kind(w) << "\n";
    std::visit(
        [&](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, witness::SharedSupportVector>) {
                os << "      vector " << fmt(x.vector) << "\n";
            } else if constexpr (std::is_same_v<T, witness::CommonSupport>) {
                for (Index k = 0; k < x.frame.cols(); ++k) {
                    os << "      frame[" << k << "] " << fmt(Vector(x.frame.col(k))) << "\n";
                }
            } else if constexpr (std::is_same_v<T, witness::DiscordantVector>) {
                os << "      vector " << fmt(x.vector) << " possible for " << x.positive
                   << ", ruled out by " << x.zero << "\n";
            } else if constexpr (std::is_same_v<T, witness::NullSpan>) {
                for (const auto& [label, v] : x.vectors) {
                    os << "      " << label << " null " << fmt(v) << "\n";
                }
            } else if constexpr (std::is_same_v<T, witness::ContradictingMeasurement>) {
                os << "      " << (x.odop ? "orthonormal basis" : "POVM") << ", "
                   << x.povm.size() << " outcomes\n";
                for (std::size_t b = 0; b < x.povm.size(); ++b) {
                    os << "      outcome " << b << ": ruled out by " << x.contradicted[b];
                    if (ensemble) {
                        const DensityOperator* rho = ensemble->find(x.contradicted[b]);
                        if (rho) {
                            os << " (p = " << fmt(rho->probability(x.povm.elements[b])) << ")";
                        }
                    }
                    os << "\n";
                }
            } else if constexpr (std::is_same_v<T, witness::WBasis>) {
                for (Index k = 0; k < x.basis.cols(); ++k) {
                    os << "      basis[" << k << "] " << fmt(Vector(x.basis.col(k))) << "\n";
                }
            } else if constexpr (std::is_same_v<T, witness::OrthogonalPair> ||
                                 std::is_same_v<T, witness::PairOverlap>) {
                os << "      tr(" << x.a << " " << x.b << ") = " << fmt(x.overlap) << "\n";
            } else if constexpr (std::is_same_v<T, witness::ClosedForm>) {
                os << "      rule " << x.rule << "\n";
                for (const auto& [k, v] : x.values) {
                    os << "      " << k << " = " << fmt(v) << "\n";
                }
            } else if constexpr (std::is_same_v<T, witness::SharedOutcome>) {
                os << "      outcome " << x.outcome << " possible for every party\n";
            } else if constexpr (std::is_same_v<T, witness::OutcomeContradiction>) {
                os << "      ruled out per outcome by " << join(x.contradicted) << "\n";
            } else if constexpr (std::is_same_v<T, witness::CommonOutcomeSupport>) {
                std::vector<std::string> ks;
                for (auto k : x.outcomes) {
                    ks.push_back(std::to_string(k));
                }
                os << "      shared support {" << join(ks) << "}\n";
            } else if constexpr (std::is_same_v<T, witness::DiscordantOutcome>) {
                os << "      outcome " << x.outcome << " possible for " << x.positive
                   << ", ruled out by " << x.zero << "\n";
            }
        },
        w);
    return os.str();
}

// ---------------------------------------------------------------------------
// check

struct CheckReport {
    InputDigest input;
    Tolerances tolerances;
    Json serialized_input; ///< states or classical assignment, as re-serialized
    std::vector<Verdict> verdicts;
};

inline Json to_json(const CheckReport& r, const StateEnsemble* ensemble)
{
    Json verdicts = Json::array();
    for (const auto& v : r.verdicts) {
        verdicts.push_back(verdict_to_json(v, ensemble));
    }
    return {{"schema", kSchema},
            {"command", "check"},
            {"input", {{"path", r.input.path}, {"fnv1a64", r.input.fnv1a64}}},
            {"tolerances", tolerances_to_json(r.tolerances)},
            {"ensemble", r.serialized_input},
            {"verdicts", verdicts},
            {"exit_code", exit_code(r.verdicts)}};
}

inline std::string to_text(const CheckReport& r, const StateEnsemble* ensemble, bool witnesses)
{
    std::ostringstream os;
    os << "input: " << r.input.path << " (fnv1a64 " << r.input.fnv1a64 << ")\n";
    os << "tolerances: rank " << fmt(r.tolerances.rank) << ", orth " << fmt(r.tolerances.orth)
       << ", zero " << fmt(r.tolerances.zero) << "\n";
    for (const auto& v : r.verdicts) {
        char line[128];
        std::snprintf(line, sizeof line, "%-18s %-13s margin %s", std::string(to_string(v.criterion)).c_str(),
                      std::string(to_string(v.status)).c_str(), fmt(v.margin).c_str());
        os << line << (v.boundary ? "  BOUNDARY" : "") << "\n";
        if (!v.note.empty()) {
            os << "    note: " << v.note << "\n";
        }
        if (witnesses) {
            os << describe(v.witness, ensemble);
        }
    }
    os << "exit code: " << exit_code(r.verdicts) << "\n";
    return os.str();
}

// ---------------------------------------------------------------------------
// oracle

struct OracleReport {
    InputDigest input;
    OracleConfig config;
    PovmEvidence evidence;
};

inline int exit_code(const OracleReport& r) { return r.evidence.found() ? 1 : 0; }

inline Json to_json(const OracleReport& r, const StateEnsemble& ensemble)
{
    Json results = Json::array();
    for (const auto& res : r.evidence.per_k) {
        Json j = {{"extra_dims", res.extra_dims},
                  {"found", res.found},
                  {"best_score", number(res.best_score)},
                  {"trials_used", res.trials_used}};
        if (res.measurement) {
            const auto& m = *res.measurement;
            j["measurement"] = {{"elements", povm_to_json(m.povm)},
                                {"contradicted", m.contradicted},
                                {"min_probability", m.min_probability},
                                {"probabilities", probability_table(ensemble, m.povm.elements)}};
        }
        results.push_back(std::move(j));
    }
    const bool found = r.evidence.found();
    return {{"schema", kSchema},
            {"command", "oracle"},
            {"input", {{"path", r.input.path}, {"fnv1a64", r.input.fnv1a64}}},
            {"config",
             {{"trials", r.config.trials},
              {"refine_steps", r.config.refine_steps},
              {"seed", r.config.seed},
              {"extra_dims", r.config.extra_dims},
              {"score_tol", r.config.score_tol}}},
            {"ensemble", io::serialize_states(ensemble)},
            {"results", results},
            {"found", found},
            {"conclusion", found ? "incompatible: contradicting measurement found and verified"
                                 : kEvidenceOnly},
            {"exit_code", exit_code(r)}};
}

inline std::string to_text(const OracleReport& r)
{
    std::ostringstream os;
    os << "input: " << r.input.path << " (fnv1a64 " << r.input.fnv1a64 << ")\n";
    os << "trials " << r.config.trials << ", refine steps " << r.config.refine_steps << ", seed "
       << r.config.seed << ", score tol " << fmt(r.config.score_tol) << "\n";
    for (const auto& res : r.evidence.per_k) {
        os << "extra dims " << res.extra_dims << ": best score " << fmt(res.best_score) << " after "
           << res.trials_used << " trials" << (res.found ? ", FOUND" : "") << "\n";
        if (res.measurement) {
            const auto& m = *res.measurement;
            for (std::size_t b = 0; b < m.povm.size(); ++b) {
                os << "    outcome " << b << ": ruled out by " << m.contradicted[b] << " (p = "
                   << fmt(m.min_probability[b]) << ")\n";
            }
        }
    }
    os << (r.evidence.found() ? "incompatible: contradicting measurement found and verified"
                              : kEvidenceOnly)
       << "\n";
    os << "exit code: " << exit_code(r) << "\n";
    return os.str();
}

// ---------------------------------------------------------------------------
// dutchbook

struct PairResult {
    std::string kind; ///< "exclusive" or "conditional"
    std::string label;
    std::vector<double> probs;
    std::vector<dutchbook::Rule> violated;
    std::optional<dutchbook::BetBook> book;
    std::vector<std::pair<std::size_t, std::array<double, 3>>> range_books; ///< per bad entry
    bool incoherent() const { return book.has_value() || !range_books.empty(); }
};

struct DistributionResult {
    std::string label;
    std::vector<double> probs;
    std::vector<dutchbook::Rule> violated;
    std::vector<dutchbook::RuleBook> books;
    std::optional<dutchbook::StrongConsistency> strong; ///< only with a declaration
    bool incoherent() const { return !books.empty() || (strong && !strong->consistent); }
};

struct DutchbookReport {
    InputDigest input;
    std::optional<InputDigest> possibility;
    std::vector<PairResult> pairs;
    std::vector<DistributionResult> distributions;

    bool coherent() const
    {
        for (const auto& p : pairs) {
            if (p.incoherent()) {
                return false;
            }
        }
        for (const auto& d : distributions) {
            if (d.incoherent()) {
                return false;
            }
        }
        return true;
    }
};

inline int exit_code(const DutchbookReport& r) { return r.coherent() ? 0 : 1; }

namespace detail {

template <typename A>
PairResult evaluate_pair(std::string kind, const std::string& label, const A& a,
                         std::vector<double> probs)
{
    PairResult out{std::move(kind), label, std::move(probs), dutchbook::validate_rules(a), {}, {}};
    if constexpr (std::is_same_v<A, dutchbook::ExclusivePairAssignment>) {
        out.book = dutchbook::dutch_book_exclusive(a);
    } else {
        out.book = dutchbook::dutch_book_conditional(a);
    }
    for (std::size_t i = 0; i < out.probs.size(); ++i) {
        if (auto rb = dutchbook::range_book(out.probs[i])) {
            out.range_books.emplace_back(i, *rb);
        }
    }
    return out;
}

} // namespace detail

/// Evaluates every record. Declarations are matched to distributions by label;
/// a declaration naming no distribution is an error.
inline DutchbookReport evaluate_dutchbook(
    const io::DutchbookInput& in,
    const std::map<std::string, dutchbook::PossibilityDeclaration>& declarations = {})
{
    DutchbookReport r;
    for (const auto& [label, a] : in.exclusive) {
        r.pairs.push_back(detail::evaluate_pair("exclusive", label, a, {a.p_E, a.p_F, a.p_EvF}));
    }
    for (const auto& [label, a] : in.conditional) {
        r.pairs.push_back(
            detail::evaluate_pair("conditional", label, a, {a.p_F, a.p_EandF, a.p_EgivenF}));
    }
    for (const auto& [label, probs] : declarations) {
        bool known = false;
        for (const auto& d : in.distributions) {
            known = known || d.label == label;
        }
        if (!known) {
            throw Error(ErrorCode::ParseError, "declaration '" + label + "' matches no distribution");
        }
    }
    for (const auto& [label, probs] : in.distributions) {
        std::optional<dutchbook::PossibilityDeclaration> decl;
        if (auto it = declarations.find(label); it != declarations.end()) {
            decl = it->second;
        }
        DistributionResult d{label, probs, dutchbook::validate_rules(probs, decl),
                             dutchbook::dutch_books(probs, decl), std::nullopt};
        if (decl) {
            d.strong = dutchbook::check_strong_consistency(probs, *decl);
        }
        r.distributions.push_back(std::move(d));
    }
    return r;
}

inline Json rules_to_json(const std::vector<dutchbook::Rule>& rules)
{
    Json out = Json::array();
    for (auto rule : rules) {
        out.push_back(std::string(dutchbook::to_string(rule)));
    }
    return out;
}

inline Json outcome_book_to_json(const dutchbook::OutcomeBook& b)
{
    return {{"payoffs", b.payoffs}, {"gains", b.gains}};
}

inline Json to_json(const DutchbookReport& r)
{
    const auto vec3 = [](const Eigen::Vector3d& v) { return Json::array({v(0), v(1), v(2)}); };
    Json pairs = Json::array();
    for (const auto& p : r.pairs) {
        Json j = {{"kind", p.kind},
                  {"label", p.label},
                  {"probs", p.probs},
                  {"violated_rules", rules_to_json(p.violated)},
                  {"coherent", !p.incoherent()}};
        if (p.book) {
            j["book"] = {{"payoffs", vec3(p.book->payoffs)}, {"gains", vec3(p.book->gains)}};
        }
        Json rbs = Json::array();
        for (const auto& [i, rb] : p.range_books) {
            rbs.push_back({{"entry", i}, {"payoff", rb[0]}, {"gains", {rb[1], rb[2]}}});
        }
        if (!rbs.empty()) {
            j["range_books"] = rbs;
        }
        pairs.push_back(std::move(j));
    }
    Json dists = Json::array();
    for (const auto& d : r.distributions) {
        Json books = Json::array();
        for (const auto& b : d.books) {
            books.push_back({{"rule", std::string(dutchbook::to_string(b.rule))},
                             {"outcome", b.outcome},
                             {"book", outcome_book_to_json(b.book)}});
        }
        Json j = {{"label", d.label},
                  {"probs", d.probs},
                  {"violated_rules", rules_to_json(d.violated)},
                  {"books", books},
                  {"coherent", !d.incoherent()}};
        if (d.strong) {
            Json findings = Json::array();
            for (const auto& f : d.strong->findings) {
                findings.push_back({{"outcome", f.outcome},
                                    {"kind", std::string(dutchbook::to_string(f.kind))},
                                    {"book", outcome_book_to_json(f.book)}});
            }
            j["strong_consistency"] = {{"consistent", d.strong->consistent},
                                       {"findings", findings}};
        }
        dists.push_back(std::move(j));
    }
    Json out = {{"schema", kSchema},
                {"command", "dutchbook"},
                {"input", {{"path", r.input.path}, {"fnv1a64", r.input.fnv1a64}}},
                {"pairs", pairs},
                {"distributions", dists},
                {"coherent", r.coherent()},
                {"exit_code", exit_code(r)}};
    if (r.possibility) {
        out["possibility"] = {{"path", r.possibility->path}, {"fnv1a64", r.possibility->fnv1a64}};
    }
    return out;
}

inline std::string to_text(const DutchbookReport& r)
{
    std::ostringstream os;
    const auto nums = [](const auto& xs) {
        std::vector<std::string> s;
        for (double x : xs) {
            s.push_back(fmt(x));
        }
        return "(" + join(s) + ")";
    };
    const auto rules = [](const std::vector<dutchbook::Rule>& rs) {
        std::vector<std::string> s;
        for (auto rule : rs) {
            s.emplace_back(dutchbook::to_string(rule));
        }
        return s.empty() ? std::string("none") : join(s);
    };
    os << "input: " << r.input.path << " (fnv1a64 " << r.input.fnv1a64 << ")\n";
    for (const auto& p : r.pairs) {
        os << p.kind << " " << p.label << " " << nums(p.probs) << ": "
           << (p.incoherent() ? "incoherent" : "coherent") << ", violated " << rules(p.violated)
           << "\n";
        if (p.book) {
            os << "    payoffs " << nums(p.book->payoffs) << " gains " << nums(p.book->gains) << "\n";
        }
        for (const auto& [i, rb] : p.range_books) {
            os << "    entry " << i << " payoff " << fmt(rb[0]) << " gains (" << fmt(rb[1]) << ", "
               << fmt(rb[2]) << ")\n";
        }
    }
    for (const auto& d : r.distributions) {
        os << "distribution " << d.label << " " << nums(d.probs) << ": "
           << (d.incoherent() ? "incoherent" : "coherent") << ", violated " << rules(d.violated)
           << "\n";
        for (const auto& b : d.books) {
            os << "    " << dutchbook::to_string(b.rule) << " payoffs " << nums(b.book.payoffs)
               << " gains " << nums(b.book.gains) << "\n";
        }
        if (d.strong) {
            for (const auto& f : d.strong->findings) {
                os << "    strong consistency: outcome " << f.outcome << " "
                   << dutchbook::to_string(f.kind) << ", payoffs " << nums(f.book.payoffs)
                   << " gains " << nums(f.book.gains) << "\n";
            }
        }
    }
    os << "exit code: " << exit_code(r) << "\n";
    return os.str();
}

} // namespace qsc::report
