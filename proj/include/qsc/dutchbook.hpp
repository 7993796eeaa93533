#pragma once

// Betting coherence for a single party: which probability rules an
// assignment breaks, explicit sure-loss payoffs when it breaks one, the
// zero-expected-gain identities that hold when it does not, and the
// possibility-aware (strong) consistency check.

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "qsc/error.hpp"

namespace qsc::dutchbook {

inline constexpr double kRuleTol = 1e-12;
inline constexpr double kRangeTol = 1e-15;

enum class Rule { NONNEG, CERTAINTY, ADDITIVITY, BAYES, NORMALIZATION };

inline std::string_view to_string(Rule r)
{
    switch (r) {
    case Rule::NONNEG: return "NONNEG";
    case Rule::CERTAINTY: return "CERTAINTY";
    case Rule::ADDITIVITY: return "ADDITIVITY";
    case Rule::BAYES: return "BAYES";
    case Rule::NORMALIZATION: return "NORMALIZATION";
    }
    return "?";
}

/// E and F mutually exclusive.
struct ExclusivePairAssignment {
    double p_E = 0.0;
    double p_F = 0.0;
    double p_EvF = 0.0;
};

struct ConditionalAssignment {
    double p_F = 0.0;
    double p_EandF = 0.0;
    double p_EgivenF = 0.0;
};

/// Payoffs for the three bets and the resulting gain per outcome row.
struct BetBook {
    Eigen::Vector3d payoffs = Eigen::Vector3d::Zero();
    Eigen::Vector3d gains = Eigen::Vector3d::Zero();
};

/// Rows: E not F, F not E, neither. Columns: bets on E, F, E or F.
inline Eigen::Matrix3d gain_matrix(const ExclusivePairAssignment& a)
{
    Eigen::Matrix3d g;
    g << 1 - a.p_E, -a.p_F, 1 - a.p_EvF,
         -a.p_E, 1 - a.p_F, 1 - a.p_EvF,
         -a.p_E, -a.p_F, -a.p_EvF;
    return g;
}

/// Rows: F fails, F but not E, E and F. Columns: bets on F, E and F, E given F.
inline Eigen::Matrix3d gain_matrix(const ConditionalAssignment& a)
{
    Eigen::Matrix3d g;
    g << -a.p_F, -a.p_EandF, 0,
         1 - a.p_F, -a.p_EandF, -a.p_EgivenF,
         1 - a.p_F, 1 - a.p_EandF, 1 - a.p_EgivenF;
    return g;
}

namespace detail {

inline bool out_of_range(double p) { return !(p >= -kRangeTol && p <= 1.0 + kRangeTol); }

/// Payoffs x with G x = (-1,-1,-1), or nothing when G is singular.
inline std::optional<BetBook> uniform_loss(const Eigen::Matrix3d& g)
{
    if (!g.allFinite() || std::abs(g.determinant()) <= kRuleTol) {
        return std::nullopt;
    }
    const Eigen::Vector3d target = Eigen::Vector3d::Constant(-1.0);
    const Eigen::PartialPivLU<Eigen::Matrix3d> lu(g);
    Eigen::Vector3d x = lu.solve(target);
    for (int it = 0; it < 3; ++it) {
        x += lu.solve(target - g * x);
    }
    BetBook book{x, g * x};
    if ((book.gains.array() > -1.0 + 1e-9).any()) {
        return std::nullopt;
    }
    return book;
}

} // namespace detail

inline std::vector<Rule> validate_rules(const ExclusivePairAssignment& a)
{
    std::vector<Rule> out;
    if (detail::out_of_range(a.p_E) || detail::out_of_range(a.p_F) ||
        detail::out_of_range(a.p_EvF)) {
        out.push_back(Rule::NONNEG);
    }
    if (!(std::abs(a.p_E + a.p_F - a.p_EvF) <= kRuleTol)) {
        out.push_back(Rule::ADDITIVITY);
    }
    return out;
}

inline std::vector<Rule> validate_rules(const ConditionalAssignment& a)
{
    std::vector<Rule> out;
    if (detail::out_of_range(a.p_F) || detail::out_of_range(a.p_EandF) ||
        detail::out_of_range(a.p_EgivenF)) {
        out.push_back(Rule::NONNEG);
    }
    if (!(std::abs(a.p_EandF - a.p_EgivenF * a.p_F) <= kRuleTol)) {
        out.push_back(Rule::BAYES);
    }
    return out;
}

/// Per-outcome flags; at least one outcome must be possible.
struct PossibilityDeclaration {
    std::vector<bool> possible;

    void validate(std::size_t outcomes) const
    {
        if (possible.size() != outcomes) {
            throw Error(ErrorCode::InvalidProbabilities, "declaration length differs from outcomes");
        }
        if (std::none_of(possible.begin(), possible.end(), [](bool b) { return b; })) {
            throw Error(ErrorCode::InvalidProbabilities, "no outcome is declared possible");
        }
    }
};

/// Sure-loss payoffs when additivity fails. The gain matrix is singular
/// exactly when p_E + p_F = p_EvF.
inline std::optional<BetBook> dutch_book_exclusive(const ExclusivePairAssignment& a)
{
    if (std::abs(a.p_E + a.p_F - a.p_EvF) <= kRuleTol) {
        return std::nullopt;
    }
    return detail::uniform_loss(gain_matrix(a));
}

/// Sure-loss payoffs for the conditional-bet structure. Singularity is read
/// off the determinant of the gain matrix itself.
inline std::optional<BetBook> dutch_book_conditional(const ConditionalAssignment& a)
{
    return detail::uniform_loss(gain_matrix(a));
}

inline double conditional_determinant(const ConditionalAssignment& a)
{
    return gain_matrix(a).determinant();
}

/// Gains recomputed from the payoffs.
inline Eigen::Vector3d gains(const ExclusivePairAssignment& a, const Eigen::Vector3d& x)
{
    return gain_matrix(a) * x;
}

inline Eigen::Vector3d gains(const ConditionalAssignment& a, const Eigen::Vector3d& x)
{
    return gain_matrix(a) * x;
}

/// Expected gain, weighting the outcome rows by the bettor's own
/// probabilities: p_E, p_F, 1 - p_EvF.
inline double kemeny_expected_gain(const ExclusivePairAssignment& a, const Eigen::Vector3d& x)
{
    const Eigen::Vector3d w(a.p_E, a.p_F, 1.0 - a.p_EvF);
    return w.dot(gains(a, x));
}

/// Weights 1 - p_F, (1 - p_E|F) p_F, p_EandF.
inline double kemeny_expected_gain(const ConditionalAssignment& a, const Eigen::Vector3d& x)
{
    const Eigen::Vector3d w(1.0 - a.p_F, (1.0 - a.p_EgivenF) * a.p_F, a.p_EandF);
    return w.dot(gains(a, x));
}

/// Closed forms of the two expected gains, proportional to the rule residual.
inline double kemeny_factored(const ExclusivePairAssignment& a, const Eigen::Vector3d& x)
{
    return (a.p_EvF - a.p_E - a.p_F) * (a.p_E * x(0) + a.p_F * x(1) - (1.0 - a.p_EvF) * x(2));
}

inline double kemeny_factored(const ConditionalAssignment& a, const Eigen::Vector3d& x)
{
    return (a.p_EandF - a.p_EgivenF * a.p_F) *
           ((1.0 - a.p_F) * x(0) + (1.0 - a.p_EgivenF) * x(2) - a.p_EandF * x(1));
}

// ---------------------------------------------------------------------------
// Distributions over exhaustive outcomes

/// Bets on individual outcomes: payoff x_k on outcome k at stake p_k x_k. The
/// gain when outcome j happens is x_j - sum_k p_k x_k.
struct OutcomeBook {
    std::vector<double> payoffs;
    std::vector<double> gains;
};

inline OutcomeBook outcome_book(const std::vector<double>& probs, std::vector<double> payoffs)
{
    double stake = 0.0;
    for (std::size_t k = 0; k < probs.size(); ++k) {
        stake += probs[k] * payoffs[k];
    }
    OutcomeBook b{std::move(payoffs), {}};
    for (double x : b.payoffs) {
        b.gains.push_back(x - stake);
    }
    return b;
}

inline OutcomeBook single_outcome_book(const std::vector<double>& probs, std::size_t k, double payoff)
{
    std::vector<double> x(probs.size(), 0.0);
    x[k] = payoff;
    return outcome_book(probs, std::move(x));
}

/// A violated rule together with the bets exposing it.
struct RuleBook {
    Rule rule = Rule::NONNEG;
    std::size_t outcome = 0; ///< offending outcome (unused for NORMALIZATION)
    OutcomeBook book;
};

/// Loses on every outcome deemed possible (all outcomes when no declaration
/// is given): p_k outside [0,1], sum p != 1, or p != 1 on a sole possible outcome.
inline std::vector<RuleBook> dutch_books(const std::vector<double>& probs,
                                         const std::optional<PossibilityDeclaration>& declared = {})
{
    std::vector<RuleBook> out;
    for (std::size_t k = 0; k < probs.size(); ++k) {
        if (detail::out_of_range(probs[k])) {
            out.push_back({Rule::NONNEG, k, single_outcome_book(probs, k, probs[k] < 0.0 ? -1.0 : 1.0)});
        }
    }
    double total = 0.0;
    for (double p : probs) {
        total += p;
    }
    if (!(std::abs(total - 1.0) <= kRuleTol)) {
        const double x = total > 1.0 ? 1.0 : -1.0;
        out.push_back({Rule::NORMALIZATION, 0, outcome_book(probs, std::vector<double>(probs.size(), x))});
    }
    if (declared) {
        declared->validate(probs.size());
        if (std::count(declared->possible.begin(), declared->possible.end(), true) == 1) {
            const auto k = std::size_t(
                std::find(declared->possible.begin(), declared->possible.end(), true) -
                declared->possible.begin());
            if (!(std::abs(probs[k] - 1.0) <= kRuleTol)) {
                out.push_back({Rule::CERTAINTY, k,
                               single_outcome_book(probs, k, probs[k] < 1.0 ? -1.0 : 1.0)});
            }
        }
    }
    return out;
}

/// Rules broken by a distribution; see dutch_books.
inline std::vector<Rule> validate_rules(const std::vector<double>& probs,
                                        const std::optional<PossibilityDeclaration>& declared = {})
{
    std::vector<Rule> out;
    for (const auto& rb : dutch_books(probs, declared)) {
        if (std::find(out.begin(), out.end(), rb.rule) == out.end()) {
            out.push_back(rb.rule);
        }
    }
    return out;
}

/// True when the book loses on every outcome deemed possible.
inline bool is_sure_loss(const OutcomeBook& b, const std::vector<bool>& possible)
{
    for (std::size_t j = 0; j < b.gains.size(); ++j) {
        if ((possible.empty() || possible[j]) && !(b.gains[j] < 0.0)) {
            return false;
        }
    }
    return true;
}

/// True when the book never wins on a possible outcome and loses on at least one.
inline bool is_strong_book(const OutcomeBook& b, const std::vector<bool>& possible)
{
    bool loses = false;
    for (std::size_t j = 0; j < b.gains.size(); ++j) {
        if (!possible[j]) {
            continue;
        }
        if (b.gains[j] > kRangeTol) {
            return false;
        }
        loses = loses || b.gains[j] < -kRangeTol;
    }
    return loses;
}

/// A single bet on an event of probability p with payoff x: gains
/// (x(1-p), -xp) for (occurs, fails). Both are negative when p lies outside [0,1].
inline std::optional<std::array<double, 3>> range_book(double p)
{
    if (!detail::out_of_range(p)) {
        return std::nullopt;
    }
    const double x = p < 0.0 ? -1.0 : 1.0;
    return std::array<double, 3>{x, x * (1.0 - p), -x * p};
}

// ---------------------------------------------------------------------------
// Strong consistency

enum class FindingKind {
    ZeroButPossible,        ///< p = 0 on an outcome deemed possible
    CertainButAlternatives, ///< p = 1 while another outcome is deemed possible
    PositiveButImpossible,  ///< p > 0 on an outcome deemed impossible
};

inline std::string_view to_string(FindingKind k)
{
    switch (k) {
    case FindingKind::ZeroButPossible: return "zero_but_possible";
    case FindingKind::CertainButAlternatives: return "certain_but_alternatives_possible";
    case FindingKind::PositiveButImpossible: return "positive_but_impossible";
    }
    return "?";
}

struct Finding {
    std::size_t outcome = 0;
    FindingKind kind = FindingKind::ZeroButPossible;
    OutcomeBook book; ///< never wins on a possible outcome, loses on at least one
};

struct StrongConsistency {
    bool consistent = true;
    std::vector<Finding> findings;
};

/// Strongly consistent iff zero probability coincides with being deemed
/// impossible. Every finding carries a bet that never wins on a possible
/// outcome but loses on some possible outcome.
inline StrongConsistency check_strong_consistency(const std::vector<double>& probs,
                                                  const PossibilityDeclaration& declared)
{
    declared.validate(probs.size());
    StrongConsistency out;
    for (std::size_t k = 0; k < probs.size(); ++k) {
        const double p = probs[k];
        if (declared.possible[k] && p <= kRangeTol) {
            // Costs nothing up front; lose 1 if k happens.
            out.findings.push_back({k, FindingKind::ZeroButPossible, single_outcome_book(probs, k, -1.0)});
        }
        if (p >= 1.0 - kRangeTol) {
            for (std::size_t j = 0; j < probs.size(); ++j) {
                if (j != k && declared.possible[j]) {
                    // Nothing gained if k happens, the stake is lost otherwise.
                    out.findings.push_back(
                        {k, FindingKind::CertainButAlternatives, single_outcome_book(probs, k, 1.0)});
                    break;
                }
            }
        }
        if (!declared.possible[k] && p > kRangeTol) {
            out.findings.push_back(
                {k, FindingKind::PositiveButImpossible, single_outcome_book(probs, k, 1.0)});
        }
    }
    out.consistent = out.findings.empty();
    return out;
}

} // namespace qsc::dutchbook
