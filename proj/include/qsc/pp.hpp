#pragma once

// Routes a PP question to whichever closed form applies.

#include <vector>

#include "qsc/criteria.hpp"
#include "qsc/povm.hpp"
#include "qsc/pp3.hpp"
#include "qsc/states.hpp"
#include "qsc/verdict.hpp"

namespace qsc {

inline PpVerdicts check_pp(const StateEnsemble& ensemble, const Tolerances& tol = {})
{
    const auto settled = [](Verdict v) {
        return PpVerdicts{v, relabel(v, Criterion::PP_POVM)};
    };
    const auto trivially_compatible = [&](const char* rule) {
        return settled({Criterion::PP_ODOP, Status::Compatible, witness::ClosedForm{rule, {}}, 0.0});
    };

    if (ensemble.size() == 1) {
        return trivially_compatible("single_party");
    }
    std::vector<const DensityOperator*> relevant;
    for (const auto& s : ensemble) {
        if (!s.is_full_rank(tol)) {
            relevant.push_back(&s);
        }
    }
    if (relevant.size() <= 1) {
        return trivially_compatible("at_most_one_relevant_state");
    }

    // An orthogonal pair settles both flavours at once.
    Verdict closest{};
    double least = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < relevant.size(); ++i) {
        for (std::size_t j = i + 1; j < relevant.size(); ++j) {
            Verdict two = check_two_party_pp(*relevant[i], *relevant[j], tol);
            if (two.incompatible()) {
                return settled(std::move(two));
            }
            if (two.margin < least) {
                least = two.margin;
                closest = std::move(two);
            }
        }
    }
    if (relevant.size() == 2) {
        return settled(std::move(closest));
    }

    if (ensemble.dim() == 2) {
        // Pure qubits with no orthogonal pair: no ODOP (two outcomes) can rule out all.
        Verdict odop = closest;
        odop.criterion = Criterion::PP_ODOP;
        return {std::move(odop), check_qubit_pp_povm(ensemble, tol)};
    }
    if (ensemble.dim() == 3 && ensemble.size() == 3) {
        return pp3::check(ensemble, tol);
    }

    Verdict open{Criterion::PP_ODOP, Status::Undecided, closest.witness, closest.margin};
    open.note = "closed form unavailable; run the oracle for evidence";
    return {open, relabel(open, Criterion::PP_POVM)};
}

} // namespace qsc
