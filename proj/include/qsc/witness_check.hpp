#pragma once

// Independent re-evaluation of verdict witnesses. Each check recomputes the
// defining inequality from the states (or stored closed-form values) without
// reusing the code path that produced the witness.

#include <cmath>
#include <string>
#include <variant>

#include "qsc/linalg.hpp"
#include "qsc/measurement.hpp"
#include "qsc/states.hpp"
#include "qsc/verdict.hpp"

namespace qsc {

struct WitnessCheck {
    bool ok = false;
    std::string reason;

    explicit operator bool() const { return ok; }
};

struct WitnessTolerances {
    double probability = 1e-9;   ///< zero-probability threshold for outcomes
    double completeness = 1e-8;  ///< ||sum E - 1||_F
    double unit = 1e-8;
};

namespace detail {

inline WitnessCheck pass() { return {true, {}}; }
inline WitnessCheck fail(std::string why) { return {false, std::move(why)}; }

inline double expectation(const Matrix& rho, const Vector& v)
{
    return std::max(0.0, v.dot(rho * v).real() / v.squaredNorm());
}

inline WitnessCheck check_closed_form(const witness::ClosedForm& cf, Status status,
                                      const Tolerances& tol)
{
    WitnessCheck out;
    const bool incompatible = status == Status::Incompatible;
    const auto expect = [&](bool says_incompatible) {
        out = says_incompatible == incompatible
                  ? pass()
                  : fail("closed-form values contradict the verdict (" + cf.rule + ")");
    };
    if (cf.rule == "three_pure_overlaps") {
        const double a = cf.get("a");
        const double b = cf.get("b");
        const double c = cf.get("c");
        const double s = a + b + c;
        expect(std::min(1.0 - s, (s - 1.0) * (s - 1.0) - 4.0 * a * b * c) > 0.0);
    } else if (cf.rule == "qubit_bloch_hull") {
        expect(cf.get("hull_distance") <= 1e-9);
    } else if (cf.rule == "null_vectors_orthogonal") {
        expect(cf.get("max_null_overlap") <= tol.zero);
    } else if (cf.rule == "pure_in_shared_support") {
        expect(cf.get("support_weight") <= tol.zero);
    } else if (cf.rule == "chi_orthogonal_and_plane_pair") {
        expect(cf.get("chi_overlap") <= tol.zero && cf.get("min_plane_overlap") <= tol.zero);
    } else if (cf.rule == "chi_orthogonal_and_plane_hull") {
        expect(cf.get("chi_overlap") <= tol.zero && cf.get("hull_distance") <= 1e-9);
    } else if (cf.rule == "projected_cross_overlap") {
        expect(cf.get("cross_overlap") <= tol.zero);
    } else if (cf.rule == "single_party" || cf.rule == "at_most_one_relevant_state") {
        expect(false);
    } else {
        out = fail("unknown closed-form rule '" + cf.rule + "'");
    }
    return out;
}

} // namespace detail

/// Checks a POVM witness: valid POVM, rank-one projectors if it claims to be
/// an ODOP, and every element given probability <= wt.probability by the party
/// named for it.
inline WitnessCheck verify_measurement(const StateEnsemble& ensemble,
                                       const witness::ContradictingMeasurement& m,
                                       const WitnessTolerances& wt = {})
{
    using detail::fail;
    const Povm& p = m.povm;
    if (p.elements.empty() || p.elements.size() != m.contradicted.size()) {
        return fail("measurement and contradicted-party lists differ in length");
    }
    if (p.dim() != ensemble.dim()) {
        return fail("measurement acts on the wrong dimension");
    }
    if (p.completeness_error() > wt.completeness) {
        return fail("elements do not sum to the identity");
    }
    for (const auto& e : p.elements) {
        if (hermiticity_defect(e) > wt.completeness) {
            return fail("element is not Hermitian");
        }
        Eigen::SelfAdjointEigenSolver<Matrix> es(e);
        if (es.eigenvalues().minCoeff() < -wt.completeness) {
            return fail("element is not positive semidefinite");
        }
        if (m.odop && ((e * e - e).norm() > wt.completeness ||
                       std::abs(e.trace().real() - 1.0) > wt.completeness)) {
            return fail("ODOP element is not a rank-one projector");
        }
    }
    for (std::size_t b = 0; b < p.elements.size(); ++b) {
        const DensityOperator* rho = ensemble.find(m.contradicted[b]);
        if (!rho) {
            return fail("unknown party '" + m.contradicted[b] + "'");
        }
        const double prob = (rho->matrix() * p.elements[b]).trace().real();
        if (prob > wt.probability) {
            return fail("outcome " + std::to_string(b) + " has probability " +
                        std::to_string(prob) + " for '" + m.contradicted[b] + "'");
        }
    }
    return detail::pass();
}

/// Re-derives the verdict's claim from its witness. Undecided verdicts carry
/// the compatible-side ODOP evidence and are checked as compatible.
inline WitnessCheck verify_witness(const StateEnsemble& ensemble, const Verdict& v,
                                   const Tolerances& tol = {}, const WitnessTolerances& wt = {})
{
    using detail::fail;
    using detail::pass;
    const Status status = v.status == Status::Undecided ? Status::Compatible : v.status;
    const auto party = [&](const std::string& label) -> const Matrix& {
        const DensityOperator* rho = ensemble.find(label);
        if (!rho) {
            throw Error(ErrorCode::ParseError, "witness names unknown party '" + label + "'");
        }
        return rho->matrix();
    };

    return std::visit(
        [&](const auto& w) -> WitnessCheck {
            using T = std::decay_t<decltype(w)>;
            if constexpr (std::is_same_v<T, witness::SharedSupportVector>) {
                if (status != Status::Compatible) {
                    return fail("shared support vector attached to an incompatible verdict");
                }
                if (std::abs(w.vector.norm() - 1.0) > wt.unit) {
                    return fail("shared vector is not unit");
                }
                for (const auto& s : ensemble) {
                    const Subspace n = s.null_space(tol);
                    if (!n.empty() && (n.frame().adjoint() * w.vector).norm() > 1e-6) {
                        return fail("vector leaves the support of '" + s.label() + "'");
                    }
                }
                return pass();
            } else if constexpr (std::is_same_v<T, witness::NullSpan>) {
                if (status != Status::Incompatible) {
                    return fail("null span attached to a compatible verdict");
                }
                Matrix stacked(ensemble.dim(), Index(w.vectors.size()));
                for (std::size_t i = 0; i < w.vectors.size(); ++i) {
                    const auto& [label, vec] = w.vectors[i];
                    if ((party(label) * vec).norm() > 1e-6 * vec.norm()) {
                        return fail("vector is not in the null space of '" + label + "'");
                    }
                    stacked.col(Index(i)) = vec;
                }
                Eigen::JacobiSVD<Matrix> svd(stacked);
                const Index rank = (svd.singularValues().array() > 1e-8).count();
                return rank == ensemble.dim() ? pass() : fail("null vectors do not span the space");
            } else if constexpr (std::is_same_v<T, witness::CommonSupport>) {
                if (status != Status::Compatible) {
                    return fail("common support attached to an incompatible verdict");
                }
                const Matrix proj = w.frame * w.frame.adjoint();
                for (const auto& s : ensemble) {
                    if ((s.support(tol).projector() - proj).norm() > 1e-6) {
                        return fail("support of '" + s.label() + "' differs");
                    }
                }
                return pass();
            } else if constexpr (std::is_same_v<T, witness::DiscordantVector>) {
                if (status != Status::Incompatible) {
                    return fail("discordant vector attached to a compatible verdict");
                }
                const double pos = detail::expectation(party(w.positive), w.vector);
                const double zero = detail::expectation(party(w.zero), w.vector);
                return pos > tol.zero && zero <= tol.zero ? pass()
                                                          : fail("vector is not discordant");
            } else if constexpr (std::is_same_v<T, witness::ContradictingMeasurement>) {
                if (status != Status::Incompatible) {
                    return fail("contradicting measurement attached to a compatible verdict");
                }
                return verify_measurement(ensemble, w, wt);
            } else if constexpr (std::is_same_v<T, witness::WBasis>) {
                if (status != Status::Compatible) {
                    return fail("W basis attached to an incompatible verdict");
                }
                if (!is_unitary(w.basis, 1e-8)) {
                    return fail("W basis is not orthonormal");
                }
                for (Index k = 0; k < w.basis.cols(); ++k) {
                    for (const auto& s : ensemble) {
                        if (detail::expectation(s.matrix(), w.basis.col(k)) <= tol.zero) {
                            return fail("outcome " + std::to_string(k) + " is ruled out by '" +
                                        s.label() + "'");
                        }
                    }
                }
                return pass();
            } else if constexpr (std::is_same_v<T, witness::OrthogonalPair>) {
                const double o = (party(w.a) * party(w.b)).trace().real();
                return status == Status::Incompatible && o <= tol.zero
                           ? pass()
                           : fail("pair is not orthogonal");
            } else if constexpr (std::is_same_v<T, witness::PairOverlap>) {
                const double o = (party(w.a) * party(w.b)).trace().real();
                if (std::abs(o - w.overlap) > 1e-9) {
                    return fail("stored overlap does not match tr(rho_a rho_b)");
                }
                return (o > tol.zero) == (status == Status::Compatible)
                           ? pass()
                           : fail("pair overlap contradicts the verdict");
            } else if constexpr (std::is_same_v<T, witness::ClosedForm>) {
                return detail::check_closed_form(w, status, tol);
            } else {
                return fail("classical witness attached to a quantum verdict");
            }
        },
        v.witness);
}

/// Classical counterpart over probability vectors.
inline WitnessCheck verify_witness(const ClassicalAssignment& assignment, const Verdict& v,
                                   const Tolerances& tol = {})
{
    using detail::fail;
    using detail::pass;
    const auto party = [&](const std::string& label) -> const std::vector<double>& {
        for (const auto& p : assignment.parties) {
            if (p.label == label) {
                return p.probs;
            }
        }
        throw Error(ErrorCode::ParseError, "witness names unknown party '" + label + "'");
    };
    return std::visit(
        [&](const auto& w) -> WitnessCheck {
            using T = std::decay_t<decltype(w)>;
            if constexpr (std::is_same_v<T, witness::SharedOutcome>) {
                for (const auto& p : assignment.parties) {
                    if (!(p.probs.at(w.outcome) > tol.zero)) {
                        return fail("'" + p.label + "' rules out the shared outcome");
                    }
                }
                return v.compatible() ? pass() : fail("shared outcome on an incompatible verdict");
            } else if constexpr (std::is_same_v<T, witness::OutcomeContradiction>) {
                if (w.contradicted.size() != assignment.outcomes) {
                    return fail("one contradicting party per outcome expected");
                }
                for (std::size_t k = 0; k < w.contradicted.size(); ++k) {
                    if (party(w.contradicted[k]).at(k) > tol.zero) {
                        return fail("outcome " + std::to_string(k) + " is not ruled out");
                    }
                }
                return v.incompatible() ? pass() : fail("contradiction on a compatible verdict");
            } else if constexpr (std::is_same_v<T, witness::CommonOutcomeSupport>) {
                for (std::size_t k = 0; k < assignment.outcomes; ++k) {
                    const bool listed =
                        std::find(w.outcomes.begin(), w.outcomes.end(), k) != w.outcomes.end();
                    for (const auto& p : assignment.parties) {
                        if ((p.probs[k] > tol.zero) != listed) {
                            return fail("zero sets differ at outcome " + std::to_string(k));
                        }
                    }
                }
                return v.compatible() ? pass() : fail("common support on an incompatible verdict");
            } else if constexpr (std::is_same_v<T, witness::DiscordantOutcome>) {
                const bool ok = party(w.positive).at(w.outcome) > tol.zero &&
                                party(w.zero).at(w.outcome) <= tol.zero;
                return ok && v.incompatible() ? pass() : fail("outcome is not discordant");
            } else {
                return fail("quantum witness attached to a classical verdict");
            }
        },
        v.witness);
}

} // namespace qsc
