#pragma once

// Qubit PP-POVM: pure qubit states are PP-POVM incompatible exactly when the
// origin lies in the convex hull of their Bloch vectors. The hull test is an
// exhaustive Carathéodory search over simplices of at most d+1 points.

#include <optional>
#include <vector>

#include "qsc/criteria.hpp"
#include "qsc/linalg.hpp"
#include "qsc/measurement.hpp"
#include "qsc/states.hpp"
#include "qsc/verdict.hpp"

namespace qsc {

inline constexpr double kHullContainTol = 1e-9;
inline constexpr double kHullBoundaryTol = 1e-6;

struct HullDistance {
    double distance = std::numeric_limits<double>::infinity(); ///< dist(0, hull)
    std::vector<double> weights; ///< convex weights of the nearest point
};

namespace detail {

template <typename F>
void for_each_subset(std::size_t n, std::size_t k, F&& f)
{
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) {
        idx[i] = i;
    }
    while (true) {
        f(idx);
        std::size_t i = k;
        while (i > 0 && idx[i - 1] == n - k + i - 1) {
            --i;
        }
        if (i == 0) {
            return;
        }
        ++idx[i - 1];
        for (std::size_t j = i; j < k; ++j) {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

} // namespace detail

/// Euclidean distance from the origin to the convex hull of `vectors`, with
/// the convex weights of the nearest point. The nearest point lies in the
/// relative interior of a simplex spanned by an affinely independent subset,
/// so it suffices to project the origin onto every such subset's affine hull
/// and keep projections with nonnegative barycentric coordinates.
inline HullDistance hull_distance(const std::vector<Eigen::VectorXd>& vectors)
{
    HullDistance best;
    const std::size_t n = vectors.size();
    if (n == 0) {
        return best;
    }
    const Index d = vectors.front().size();
    const std::size_t max_k = std::min<std::size_t>(n, std::size_t(d) + 1);
    for (std::size_t k = 1; k <= max_k; ++k) {
        detail::for_each_subset(n, k, [&](const std::vector<std::size_t>& idx) {
            const Eigen::VectorXd& v0 = vectors[idx[0]];
            Eigen::VectorXd lambda = Eigen::VectorXd::Zero(Index(k));
            Eigen::VectorXd point = v0;
            if (k == 1) {
                lambda(0) = 1.0;
            } else {
                Eigen::MatrixXd a(d, Index(k) - 1);
                for (std::size_t i = 1; i < k; ++i) {
                    a.col(Index(i) - 1) = vectors[idx[i]] - v0;
                }
                Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
                qr.setThreshold(1e-12);
                if (qr.rank() < Index(k) - 1) {
                    return; // affinely dependent; a smaller subset covers it
                }
                const Eigen::VectorXd t = qr.solve(Eigen::VectorXd(-v0));
                lambda.tail(Index(k) - 1) = t;
                lambda(0) = 1.0 - t.sum();
                point = v0 + a * t;
            }
            if (lambda.minCoeff() < -1e-12) {
                return;
            }
            const double dist = point.norm();
            if (dist < best.distance) {
                best.distance = dist;
                best.weights.assign(n, 0.0);
                const double total = lambda.cwiseMax(0.0).sum();
                for (std::size_t i = 0; i < k; ++i) {
                    best.weights[idx[i]] = std::max(0.0, lambda(Index(i))) / total;
                }
            }
        });
    }
    return best;
}

/// Convex weights q with sum_a q_a v_a = 0 (residual <= 1e-9), if any exist.
inline std::optional<std::vector<double>> zero_in_hull(const std::vector<Eigen::VectorXd>& vectors)
{
    const HullDistance h = hull_distance(vectors);
    if (h.distance <= kHullContainTol) {
        return h.weights;
    }
    return std::nullopt;
}

inline std::optional<std::vector<double>> zero_in_hull(const std::vector<Eigen::Vector3d>& vectors)
{
    std::vector<Eigen::VectorXd> dyn(vectors.begin(), vectors.end());
    return zero_in_hull(dyn);
}

/// Qubit PP-POVM verdict. Full-rank states are dropped first; the remaining
/// states must be pure. When incompatible the witness is the POVM
/// {q_a (1 - n_a . sigma)}, whose element a is orthogonal to state a.
inline Verdict check_qubit_pp_povm(const StateEnsemble& ensemble, const Tolerances& tol = {})
{
    if (ensemble.dim() != 2) {
        throw Error(ErrorCode::WrongDimension, "qubit PP-POVM needs dim = 2");
    }
    std::vector<const DensityOperator*> pure;
    for (const auto& s : ensemble) {
        if (s.is_full_rank(tol)) {
            continue;
        }
        if (!s.is_pure(tol)) {
            throw Error(ErrorCode::MixedStateRemains,
                        "state '" + s.label() + "' is neither pure nor full rank");
        }
        pure.push_back(&s);
    }

    std::vector<Eigen::VectorXd> bloch;
    for (const auto* s : pure) {
        // Pure by the rank test; normalize away residual mixedness.
        bloch.push_back(to_bloch(outer(s->leading_vector())).n);
    }
    const HullDistance h = hull_distance(bloch);

    Verdict v{Criterion::PP_POVM, Status::Compatible,
              witness::ClosedForm{"qubit_bloch_hull", {{"hull_distance", h.distance}}},
              h.distance};
    v.boundary = h.distance > kHullContainTol && h.distance <= kHullBoundaryTol;
    if (!(h.distance <= kHullContainTol)) {
        if (pure.empty()) {
            v.note = "no non-full-rank states";
        }
        return v;
    }

    v.status = Status::Incompatible;
    witness::ContradictingMeasurement m;
    for (std::size_t a = 0; a < pure.size(); ++a) {
        if (h.weights[a] <= 0.0) {
            continue;
        }
        const Eigen::Vector3d n = bloch[a];
        m.povm.elements.push_back(h.weights[a] * 2.0 * from_bloch(-n));
        m.contradicted.push_back(pure[a]->label());
    }
    v.witness = std::move(m);
    return v;
}

} // namespace qsc
