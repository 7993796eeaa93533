#pragma once

// Criterion selection shared by the CLI and the tests.

#include <string>
#include <vector>

#include "qsc/criteria.hpp"
#include "qsc/pp.hpp"
#include "qsc/states.hpp"
#include "qsc/verdict.hpp"

namespace qsc {

enum class Selection { ES, BFM, PP, PAIRWISE_PP, W, ALL };

inline Selection selection_from_string(const std::string& s)
{
    if (s == "es") return Selection::ES;
    if (s == "bfm") return Selection::BFM;
    if (s == "pp") return Selection::PP;
    if (s == "pairwise-pp") return Selection::PAIRWISE_PP;
    if (s == "w") return Selection::W;
    if (s == "all") return Selection::ALL;
    throw Error(ErrorCode::BadParameter, "unknown criterion '" + s + "'");
}

/// Verdicts for the selected criteria. `pp` yields the ODOP and POVM verdicts,
/// `w` yields W and W'. `all` leaves out pairwise PP when there is one party.
inline std::vector<Verdict> run_check(const StateEnsemble& ensemble, Selection sel,
                                      const Tolerances& tol = {}, std::uint64_t seed = 0)
{
    const bool all = sel == Selection::ALL;
    std::vector<Verdict> out;
    if (all || sel == Selection::ES) {
        out.push_back(check_es(ensemble, tol));
    }
    if (all || sel == Selection::BFM) {
        out.push_back(check_bfm(ensemble, tol));
    }
    if (all || sel == Selection::PP) {
        PpVerdicts pp = check_pp(ensemble, tol);
        out.push_back(std::move(pp.odop));
        out.push_back(std::move(pp.povm));
    }
    if ((all && ensemble.size() >= 2) || sel == Selection::PAIRWISE_PP) {
        out.push_back(check_pairwise_pp(ensemble, tol));
    }
    if (all || sel == Selection::W) {
        const Verdict w = check_w(ensemble, seed, tol);
        out.push_back(w);
        out.push_back(relabel(w, Criterion::W_PRIME));
    }
    return out;
}

/// Classical counterpart. Pairwise PP has no separate classical form.
inline std::vector<Verdict> run_check(const ClassicalAssignment& assignment, Selection sel,
                                      const Tolerances& tol = {})
{
    if (sel == Selection::PAIRWISE_PP) {
        throw Error(ErrorCode::BadParameter, "pairwise-pp applies to quantum states only");
    }
    const std::vector<Verdict> v = check_classical(assignment, tol); // ES, BFM, PP, W, W'
    switch (sel) {
    case Selection::ES: return {v[0]};
    case Selection::BFM: return {v[1]};
    case Selection::PP: return {v[2]};
    case Selection::W: return {v[3], v[4]};
    default: return v;
    }
}

} // namespace qsc
