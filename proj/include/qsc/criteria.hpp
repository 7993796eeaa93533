#pragma once

// General compatibility criteria for N density operators: equal support (ES),
// shared firm beliefs (BFM), two-party and pairwise post-Peierls (PP), the weak
// criteria W / W', and their classical specializations.

#include <algorithm>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "qsc/linalg.hpp"
#include "qsc/measurement.hpp"
#include "qsc/random.hpp"
#include "qsc/states.hpp"
#include "qsc/verdict.hpp"

namespace qsc {

/// Compatible iff the supports share a nonzero vector. The intersection is
/// computed as the orthocomplement of the span of all null spaces.
inline Verdict check_bfm(const StateEnsemble& ensemble, const Tolerances& tol = {})
{
    std::vector<Subspace> nulls;
    for (const auto& s : ensemble) {
        nulls.push_back(s.null_space(tol));
    }
    const Subspace spanned = span_union(nulls, tol);
    const Subspace shared = orthocomplement(spanned);

    Verdict v{Criterion::BFM, Status::Incompatible, {}, double(shared.dim())};
    if (!shared.empty()) {
        v.status = Status::Compatible;
        v.witness = witness::SharedSupportVector{shared.basis_vector(0)};
        return v;
    }
    witness::NullSpan span;
    for (std::size_t a = 0; a < ensemble.size(); ++a) {
        for (Index c = 0; c < nulls[a].dim(); ++c) {
            span.vectors.emplace_back(ensemble[a].label(), nulls[a].basis_vector(c));
        }
    }
    v.witness = std::move(span);
    return v;
}

/// Compatible iff every support projector agrees with every other.
inline Verdict check_es(const StateEnsemble& ensemble, const Tolerances& tol = {})
{
    std::vector<Subspace> supports;
    for (const auto& s : ensemble) {
        supports.push_back(s.support(tol));
    }
    double worst = 0.0;
    std::size_t wa = 0;
    std::size_t wb = 0;
    for (std::size_t a = 0; a < supports.size(); ++a) {
        for (std::size_t b = a + 1; b < supports.size(); ++b) {
            const double dist = supports[a].dim() == supports[b].dim()
                                    ? projector_distance(supports[a], supports[b])
                                    : std::numeric_limits<double>::infinity();
            if (dist > worst) {
                worst = dist;
                wa = a;
                wb = b;
            }
        }
    }
    Verdict v{Criterion::ES, Status::Compatible, witness::CommonSupport{supports.front().frame()},
              worst};
    if (worst <= tol.orth) {
        return v;
    }
    v.status = Status::Incompatible;
    if (!std::isfinite(v.margin)) {
        v.margin = std::abs(double(supports[wa].dim() - supports[wb].dim()));
    }

    // Find v in null(zero) maximizing <v|rho_pos|v>; one of the two orders works.
    witness::DiscordantVector best;
    double best_p = -1.0;
    for (auto [pos, zero] : {std::pair{wa, wb}, std::pair{wb, wa}}) {
        const Subspace n = ensemble[zero].null_space(tol);
        if (n.empty()) {
            continue;
        }
        const Matrix restricted = n.frame().adjoint() * ensemble[pos].matrix() * n.frame();
        const Eigensystem es = hermitian_eigendecomposition(restricted, Tolerances::uniform(1e-6));
        if (es.values(0) > best_p) {
            best_p = es.values(0);
            best = {n.frame() * es.vector(0), ensemble[pos].label(), ensemble[zero].label()};
            best.vector.normalize();
        }
    }
    v.witness = std::move(best);
    return v;
}

/// Two-party post-Peierls: compatible iff tr(rho_A rho_B) > tol.zero. The
/// verdict is the same for ODOPs and POVMs.
inline Verdict check_two_party_pp(const DensityOperator& a, const DensityOperator& b,
                                  const Tolerances& tol = {})
{
    if (a.dim() != b.dim()) {
        throw Error(ErrorCode::DimensionMismatch, "states live in different dimensions");
    }
    const double overlap = std::max(0.0, (a.matrix() * b.matrix()).trace().real());
    Verdict v{Criterion::PP_ODOP, Status::Compatible,
              witness::PairOverlap{a.label(), b.label(), overlap}, overlap};
    if (overlap > tol.zero) {
        return v;
    }
    v.status = Status::Incompatible;
    // Outcomes inside supp(A) are impossible for B, the rest are impossible for A.
    const Subspace sa = a.support(tol);
    witness::ContradictingMeasurement m;
    m.odop = true;
    m.povm = Povm::from_basis(complete_basis(sa.frame()));
    for (Index k = 0; k < a.dim(); ++k) {
        m.contradicted.push_back(k < sa.dim() ? b.label() : a.label());
    }
    v.witness = std::move(m);
    return v;
}

/// Pairwise PP: every unordered pair passes the two-party test. On failure the
/// witness is the first orthogonal pair in label order.
inline Verdict check_pairwise_pp(const StateEnsemble& ensemble, const Tolerances& tol = {})
{
    if (ensemble.size() < 2) {
        throw Error(ErrorCode::WrongPartyCount, "pairwise PP needs at least two parties");
    }
    std::vector<std::size_t> order(ensemble.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        order[i] = i;
    }
    std::sort(order.begin(), order.end(),
              [&](auto x, auto y) { return ensemble[x].label() < ensemble[y].label(); });

    witness::PairOverlap least{"", "", std::numeric_limits<double>::infinity()};
    for (std::size_t i = 0; i < order.size(); ++i) {
        for (std::size_t j = i + 1; j < order.size(); ++j) {
            const auto& a = ensemble[order[i]];
            const auto& b = ensemble[order[j]];
            const Verdict two = check_two_party_pp(a, b, tol);
            if (two.incompatible()) {
                return {Criterion::PAIRWISE_PP, Status::Incompatible,
                        witness::OrthogonalPair{a.label(), b.label(), two.margin}, two.margin};
            }
            if (two.margin < least.overlap) {
                least = {a.label(), b.label(), two.margin};
            }
        }
    }
    return {Criterion::PAIRWISE_PP, Status::Compatible, least, least.overlap};
}

// ---------------------------------------------------------------------------
// W / W': constructive basis

struct WConstructionOptions {
    int draws_per_step = 64;
    int iterations_per_dim = 10;
};

struct WConstruction {
    Matrix basis;
    int rotations = 0; ///< number of basis rotations that were applied
};

namespace detail {

/// Distance budget of a vector relative to the excluded set S: the smallest
/// d(psi, S_alpha) - floor_alpha over the parties, where S_alpha is the
/// hyperplane orthogonal to phi_alpha and floor_alpha is the distance below
/// which the probability lambda_alpha |<phi_alpha|psi>|^2 would drop under
/// the threshold. Positive means psi is safely off S.
struct ExcludedSet {
    std::vector<Vector> phis;
    std::vector<double> floors;

    double gap(const Vector& psi) const
    {
        double g = std::numeric_limits<double>::infinity();
        for (std::size_t a = 0; a < phis.size(); ++a) {
            // d(psi, S_alpha) = arccos sqrt(1 - |<phi|psi>|^2) = arcsin |<phi|psi>|
            const double s = std::min(1.0, std::abs(phis[a].dot(psi)));
            g = std::min(g, std::asin(s) - floors[a]);
        }
        return g;
    }
};

} // namespace detail

/// Orthonormal basis all of whose vectors have nonzero probability for every
/// party. Starts from the standard basis and repairs it front to back: the
/// first offending vector |m> is moved to a nearby |m'> off the excluded set
/// by a rotation in the plane of |m> and a random |m_perp>, small enough
/// (below half the smallest gap of the earlier vectors) to keep those clear.
inline WConstruction construct_w_basis(const StateEnsemble& ensemble, std::uint64_t seed,
                                       const Tolerances& tol = {},
                                       const WConstructionOptions& opts = {})
{
    const Index d = ensemble.dim();
    detail::ExcludedSet excluded;
    for (const auto& s : ensemble) {
        excluded.phis.push_back(s.leading_vector());
        const double floor_prob = std::min(1.0, 4.0 * tol.zero / s.leading_value());
        excluded.floors.push_back(std::asin(std::sqrt(floor_prob)));
    }

    WConstruction out{Matrix::Identity(d, d), 0};
    if (d == 1) {
        return out;
    }

    Rng rng = make_stream(seed, 0, 0x77);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const int cap = opts.iterations_per_dim * int(d);
    for (int iteration = 0;; ++iteration) {
        Index m = 0;
        while (m < d && excluded.gap(out.basis.col(m)) > 0.0) {
            ++m;
        }
        if (m == d) {
            break;
        }
        if (iteration >= cap) {
            throw Error(ErrorCode::IterationLimit,
                        "W basis construction did not converge in " + std::to_string(cap) +
                            " steps");
        }

        double eps = std::numbers::pi / 4.0;
        for (Index k = 0; k < m; ++k) {
            eps = std::min(eps, 0.5 * excluded.gap(out.basis.col(k)));
        }

        const Vector vm = out.basis.col(m);
        for (int draw = 0; draw < opts.draws_per_step; ++draw) {
            Vector perp = gaussian_vector(d, rng);
            perp -= vm.dot(perp) * vm;
            perp.normalize();
            // Radius of a uniform point in the 2(d-1)-dimensional ball of radius eps.
            const double dist = eps * std::pow(unit(rng), 1.0 / double(2 * d - 2));
            const Complex phase = std::polar(1.0, 2.0 * std::numbers::pi * unit(rng));
            const Vector moved = vm * phase * std::cos(dist) + perp * std::sin(dist);
            if (!(excluded.gap(moved) > 0.0)) {
                continue;
            }
            // U = |m'><m| + |m_perp'><m_perp| + 1 - |m><m| - |m_perp><m_perp|
            const Vector perp_moved = -vm * phase * std::sin(dist) + perp * std::cos(dist);
            const Matrix u = moved * vm.adjoint() + perp_moved * perp.adjoint() +
                             Matrix::Identity(d, d) - vm * vm.adjoint() - perp * perp.adjoint();
            out.basis = u * out.basis;
            ++out.rotations;
            break;
        }
    }
    orthonormalize_columns(out.basis);
    return out;
}

inline Verdict check_w(const StateEnsemble& ensemble, std::uint64_t seed = 0,
                       const Tolerances& tol = {})
{
    const WConstruction w = construct_w_basis(ensemble, seed, tol);
    double floor = std::numeric_limits<double>::infinity();
    for (Index k = 0; k < w.basis.cols(); ++k) {
        for (const auto& s : ensemble) {
            floor = std::min(floor, s.probability(Vector(w.basis.col(k))));
        }
    }
    return {Criterion::W, Status::Compatible, witness::WBasis{w.basis}, floor};
}

/// W' is implied by W; the same basis witnesses it.
inline Verdict check_w_prime(const StateEnsemble& ensemble, std::uint64_t seed = 0,
                             const Tolerances& tol = {})
{
    return relabel(check_w(ensemble, seed, tol), Criterion::W_PRIME);
}

// ---------------------------------------------------------------------------
// Classical assignments

/// The five classical verdicts, in the order ES, BFM, PP, W, W'. BFM, PP and
/// W' share one decision (some outcome is possible for everyone); ES and W
/// share the other (identical zero sets).
inline std::vector<Verdict> check_classical(const ClassicalAssignment& assignment,
                                            const Tolerances& tol = {})
{
    assignment.validate();
    const std::size_t k_count = assignment.outcomes;
    const auto& parties = assignment.parties;

    // Compatible side: some outcome possible for everyone.
    double best_floor = -1.0;
    std::optional<std::size_t> shared;
    witness::OutcomeContradiction contradiction;
    for (std::size_t k = 0; k < k_count; ++k) {
        double floor = std::numeric_limits<double>::infinity();
        std::string culprit;
        for (const auto& p : parties) {
            if (p.probs[k] < floor) {
                floor = p.probs[k];
                culprit = p.label;
            }
        }
        contradiction.contradicted.push_back(culprit);
        if (floor > best_floor) {
            best_floor = floor;
        }
        if (floor > tol.zero && !shared) {
            shared = k;
        }
    }
    Verdict compat{Criterion::CLASSICAL_BFM, Status::Incompatible, contradiction, best_floor};
    if (shared) {
        compat.status = Status::Compatible;
        compat.witness = witness::SharedOutcome{*shared};
    }

    // Concordance: identical zero sets.
    Verdict concord{Criterion::CLASSICAL_ES, Status::Compatible, {}, 0.0};
    std::size_t discordant = 0;
    std::optional<witness::DiscordantOutcome> first;
    witness::CommonOutcomeSupport common;
    for (std::size_t k = 0; k < k_count; ++k) {
        const ClassicalParty* pos = nullptr;
        const ClassicalParty* zero = nullptr;
        for (const auto& p : parties) {
            (p.probs[k] > tol.zero ? pos : zero) = &p;
        }
        if (pos && zero) {
            ++discordant;
            if (!first) {
                first = witness::DiscordantOutcome{k, pos->label, zero->label};
            }
        } else if (pos) {
            common.outcomes.push_back(k);
        }
    }
    concord.margin = double(discordant);
    if (first) {
        concord.status = Status::Incompatible;
        concord.witness = *first;
    } else {
        concord.witness = common;
    }

    return {concord, compat, relabel(compat, Criterion::CLASSICAL_PP),
            relabel(concord, Criterion::CLASSICAL_W), relabel(compat, Criterion::CLASSICAL_W_PRIME)};
}

} // namespace qsc
