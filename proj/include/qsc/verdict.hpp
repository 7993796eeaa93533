#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "qsc/linalg.hpp"
#include "qsc/measurement.hpp"

namespace qsc {

enum class Criterion {
    ES,
    BFM,
    PP_ODOP,
    PP_POVM,
    PAIRWISE_PP,
    W,
    W_PRIME,
    CLASSICAL_ES,
    CLASSICAL_BFM,
    CLASSICAL_PP,
    CLASSICAL_W,
    CLASSICAL_W_PRIME,
};

inline std::string_view to_string(Criterion c)
{
    switch (c) {
    case Criterion::ES: return "ES";
    case Criterion::BFM: return "BFM";
    case Criterion::PP_ODOP: return "PP_ODOP";
    case Criterion::PP_POVM: return "PP_POVM";
    case Criterion::PAIRWISE_PP: return "PAIRWISE_PP";
    case Criterion::W: return "W";
    case Criterion::W_PRIME: return "W_PRIME";
    case Criterion::CLASSICAL_ES: return "CLASSICAL_ES";
    case Criterion::CLASSICAL_BFM: return "CLASSICAL_BFM";
    case Criterion::CLASSICAL_PP: return "CLASSICAL_PP";
    case Criterion::CLASSICAL_W: return "CLASSICAL_W";
    case Criterion::CLASSICAL_W_PRIME: return "CLASSICAL_W_PRIME";
    }
    return "?";
}

enum class Status { Compatible, Incompatible, Undecided };

inline std::string_view to_string(Status s)
{
    switch (s) {
    case Status::Compatible: return "compatible";
    case Status::Incompatible: return "incompatible";
    case Status::Undecided: return "undecided";
    }
    return "?";
}

namespace witness {

/// Unit vector with <v|rho|v> > tol.zero for every party.
struct SharedSupportVector {
    Vector vector;
};

/// Orthonormal frame of the support every party shares.
struct CommonSupport {
    Matrix frame;
};

/// <v|rho_positive|v> > tol.zero while <v|rho_zero|v> <= tol.zero.
struct DiscordantVector {
    Vector vector;
    std::string positive;
    std::string zero;
};

/// Null vectors of the parties that together span the whole space.
struct NullSpan {
    std::vector<std::pair<std::string, Vector>> vectors;
};

/// Every outcome is given probability <= tol by the party named for it.
struct ContradictingMeasurement {
    Povm povm;
    bool odop = false;
    std::vector<std::string> contradicted;
};

/// Orthonormal basis on which every party has probability > tol.zero everywhere.
struct WBasis {
    Matrix basis;
};

struct OrthogonalPair {
    std::string a;
    std::string b;
    double overlap = 0.0; ///< tr(rho_a rho_b)
};

/// The least-overlapping pair, recorded when every pair passes.
struct PairOverlap {
    std::string a;
    std::string b;
    double overlap = 0.0;
};

/// Named scalar quantities of a closed-form criterion, from which the verdict
/// can be re-derived. `rule` names the decision rule.
struct ClosedForm {
    std::string rule;
    std::vector<std::pair<std::string, double>> values;

    double get(std::string_view name) const
    {
        for (const auto& [k, v] : values) {
            if (k == name) {
                return v;
            }
        }
        throw Error(ErrorCode::ParseError, "closed-form witness lacks '" + std::string(name) + "'");
    }
};

struct SharedOutcome {
    std::size_t outcome = 0;
};

struct OutcomeContradiction {
    std::vector<std::string> contradicted;
};

struct CommonOutcomeSupport {
    std::vector<std::size_t> outcomes;
};

struct DiscordantOutcome {
    std::size_t outcome = 0;
    std::string positive;
    std::string zero;
};

} // namespace witness

using Witness = std::variant<witness::SharedSupportVector, witness::CommonSupport,
                             witness::DiscordantVector, witness::NullSpan,
                             witness::ContradictingMeasurement, witness::WBasis,
                             witness::OrthogonalPair, witness::PairOverlap, witness::ClosedForm,
                             witness::SharedOutcome, witness::OutcomeContradiction,
                             witness::CommonOutcomeSupport, witness::DiscordantOutcome>;

inline std::string_view witness_kind(const Witness& w)
{
    static constexpr std::string_view names[] = {
        "shared_support_vector", "common_support",       "discordant_vector",
        "null_span",             "contradicting_measurement", "w_basis",
        "orthogonal_pair",       "pair_overlap",         "closed_form",
        "shared_outcome",        "outcome_contradiction", "common_outcome_support",
        "discordant_outcome"};
    return names[w.index()];
}

/// Outcome of one criterion. `margin` is the raw quantity compared against a
/// threshold; `boundary` flags a margin within 1e-9 of the decision point.
struct Verdict {
    Criterion criterion = Criterion::ES;
    Status status = Status::Undecided;
    Witness witness;
    double margin = 0.0;
    bool boundary = false;
    std::string note;

    bool compatible() const { return status == Status::Compatible; }
    bool incompatible() const { return status == Status::Incompatible; }
    bool decided() const { return status != Status::Undecided; }
};

inline Verdict relabel(Verdict v, Criterion c)
{
    v.criterion = c;
    return v;
}

} // namespace qsc
