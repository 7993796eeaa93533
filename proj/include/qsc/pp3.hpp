#pragma once

// Three parties in three dimensions. After full-rank states are dropped the
// remaining states have rank 1 or 2, and PP compatibility is decided case by
// case on the rank pattern.

#include <array>
#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "qsc/atomic_write.hpp"
#include "qsc/criteria.hpp"
#include "qsc/linalg.hpp"
#include "qsc/povm.hpp"
#include "qsc/states.hpp"
#include "qsc/verdict.hpp"

namespace qsc {

/// Verdicts for both measurement classes.
struct PpVerdicts {
    Verdict odop;
    Verdict povm;
};

/// Margins closer to zero than this are flagged as boundary cases.
inline constexpr double kBoundaryMargin = 1e-9;

namespace pp3 {

struct ThreeRank2 {
    std::array<std::string, 3> labels;
    std::array<Vector, 3> e; ///< null vector of each state
};

struct OnePureTwoRank2 {
    std::array<std::string, 3> labels; ///< pure state first
    Vector psi;
    bool same_support = false;
    Matrix s2; ///< support projector of party 2
    Vector e2;
    Vector chi;                ///< spans S2 ∩ S3 (unset when same_support)
    std::array<Vector, 2> phi; ///< in S2, S3 and orthogonal to chi
    Matrix r;                  ///< 3x2 orthonormal frame of chi^⊥
};

struct TwoPureOneRank2 {
    std::array<std::string, 3> labels; ///< pure states first
    Vector psi1;
    Vector psi2;
    Matrix s3;
    Vector e3;
};

struct ThreePure {
    std::array<std::string, 3> labels;
    std::array<Vector, 3> psi;
    double a = 0.0; ///< |<psi1|psi2>|^2
    double b = 0.0; ///< |<psi2|psi3>|^2
    double c = 0.0; ///< |<psi3|psi1>|^2
};

/// Fewer than three states left after stripping full-rank ones.
struct Reduced {
    std::vector<const DensityOperator*> remaining;
};

using Case = std::variant<ThreeRank2, OnePureTwoRank2, TwoPureOneRank2, ThreePure, Reduced>;

inline std::string_view case_name(const Case& c)
{
    static constexpr std::string_view names[] = {"THREE_RANK2", "ONE_PURE_TWO_RANK2",
                                                 "TWO_PURE_ONE_RANK2", "THREE_PURE", "REDUCED"};
    return names[c.index()];
}

inline Vector leading_eigenvector(const Matrix& m)
{
    Eigen::SelfAdjointEigenSolver<Matrix> es(m);
    return es.eigenvectors().col(m.rows() - 1);
}

inline Case classify(const StateEnsemble& ensemble, const Tolerances& tol = {})
{
    if (ensemble.dim() != 3) {
        throw Error(ErrorCode::WrongDimension, "three-party analysis needs dim = 3");
    }
    if (ensemble.size() != 3) {
        throw Error(ErrorCode::WrongPartyCount, "three-party analysis needs N = 3");
    }
    std::vector<const DensityOperator*> pure;
    std::vector<const DensityOperator*> rank2;
    for (const auto& s : ensemble) {
        const Index r = s.rank(tol);
        if (r == 3) {
            continue;
        }
        (r == 1 ? pure : rank2).push_back(&s);
    }
    if (pure.size() + rank2.size() < 3) {
        Reduced red;
        red.remaining = pure;
        red.remaining.insert(red.remaining.end(), rank2.begin(), rank2.end());
        return red;
    }

    switch (pure.size()) {
    case 0: {
        ThreeRank2 c;
        for (int k = 0; k < 3; ++k) {
            c.labels[k] = rank2[k]->label();
            c.e[k] = rank2[k]->null_space(tol).basis_vector(0);
        }
        return c;
    }
    case 1: {
        OnePureTwoRank2 c;
        c.labels = {pure[0]->label(), rank2[0]->label(), rank2[1]->label()};
        c.psi = pure[0]->leading_vector();
        const Subspace s2 = rank2[0]->support(tol);
        const Subspace s3 = rank2[1]->support(tol);
        c.s2 = s2.projector();
        c.e2 = rank2[0]->null_space(tol).basis_vector(0);
        const Subspace shared = intersect(s2, s3, tol);
        c.same_support = projector_distance(s2, s3) <= tol.orth || shared.dim() != 1;
        if (!c.same_support) {
            c.chi = shared.basis_vector(0);
            const Matrix chi_proj = outer(c.chi);
            c.phi[0] = leading_eigenvector(c.s2 - chi_proj);
            c.phi[1] = leading_eigenvector(s3.projector() - chi_proj);
            c.r = orthocomplement(Subspace::from_orthonormal(c.chi)).frame();
        }
        return c;
    }
    case 2: {
        TwoPureOneRank2 c;
        c.labels = {pure[0]->label(), pure[1]->label(), rank2[0]->label()};
        c.psi1 = pure[0]->leading_vector();
        c.psi2 = pure[1]->leading_vector();
        c.s3 = rank2[0]->support(tol).projector();
        c.e3 = rank2[0]->null_space(tol).basis_vector(0);
        return c;
    }
    default: {
        ThreePure c;
        for (int k = 0; k < 3; ++k) {
            c.labels[k] = pure[k]->label();
            c.psi[k] = pure[k]->leading_vector();
        }
        c.a = std::min(1.0, std::norm(c.psi[0].dot(c.psi[1])));
        c.b = std::min(1.0, std::norm(c.psi[1].dot(c.psi[2])));
        c.c = std::min(1.0, std::norm(c.psi[2].dot(c.psi[0])));
        return c;
    }
    }
}

namespace detail {

inline witness::ContradictingMeasurement odop_witness(const std::array<Vector, 3>& basis,
                                                      std::array<std::string, 3> contradicted)
{
    Matrix u(3, 3);
    for (int k = 0; k < 3; ++k) {
        u.col(k) = basis[k].normalized();
    }
    orthonormalize_columns(u);
    witness::ContradictingMeasurement m;
    m.odop = true;
    m.povm = Povm::from_basis(u);
    m.contradicted.assign(contradicted.begin(), contradicted.end());
    return m;
}

inline PpVerdicts both(Verdict odop)
{
    return {odop, relabel(odop, Criterion::PP_POVM)};
}

} // namespace detail

/// Incompatible iff the three null vectors are mutually orthogonal. The margin
/// is the largest pairwise overlap |<e_a|e_b>|. ODOP and POVM verdicts agree.
inline PpVerdicts check_three_rank2(const ThreeRank2& c, const Tolerances& tol = {})
{
    double worst = 0.0;
    for (int i = 0; i < 3; ++i) {
        for (int j = i + 1; j < 3; ++j) {
            worst = std::max(worst, std::abs(c.e[i].dot(c.e[j])));
        }
    }
    Verdict v{Criterion::PP_ODOP, Status::Compatible,
              witness::ClosedForm{"null_vectors_orthogonal", {{"max_null_overlap", worst}}}, worst};
    if (worst <= tol.zero) {
        v.status = Status::Incompatible;
        v.witness = detail::odop_witness(c.e, c.labels);
    }
    return detail::both(std::move(v));
}

inline PpVerdicts check_one_pure_two_rank2(const OnePureTwoRank2& c, const Tolerances& tol = {})
{
    if (c.same_support) {
        const double weight = std::max(0.0, c.psi.dot(c.s2 * c.psi).real());
        Verdict v{Criterion::PP_ODOP, Status::Compatible,
                  witness::ClosedForm{"pure_in_shared_support", {{"support_weight", weight}}},
                  weight};
        if (weight <= tol.zero) {
            v.status = Status::Incompatible;
            const Matrix frame = Subspace::from_orthonormal(
                                     complete_basis(c.e2.normalized()).rightCols(2))
                                     .frame();
            v.witness = detail::odop_witness({c.e2, frame.col(0), frame.col(1)},
                                             {c.labels[1], c.labels[0], c.labels[0]});
        }
        return detail::both(std::move(v));
    }

    const double chi_overlap = std::abs(c.psi.dot(c.chi));
    const std::array<Vector, 3> in_plane{c.psi, c.phi[0], c.phi[1]};

    // ODOP: chi must be orthogonal to psi and two of the in-plane vectors orthogonal.
    double best_pair = std::numeric_limits<double>::infinity();
    int px = 0;
    int py = 1;
    for (int i = 0; i < 3; ++i) {
        for (int j = i + 1; j < 3; ++j) {
            const double o = std::abs(in_plane[i].dot(in_plane[j]));
            if (o < best_pair) {
                best_pair = o;
                px = i;
                py = j;
            }
        }
    }
    const double odop_margin = std::max(chi_overlap, best_pair);
    Verdict odop{Criterion::PP_ODOP, Status::Compatible,
                 witness::ClosedForm{"chi_orthogonal_and_plane_pair",
                                     {{"chi_overlap", chi_overlap}, {"min_plane_overlap", best_pair}}},
                 odop_margin};
    if (odop_margin <= tol.zero) {
        odop.status = Status::Incompatible;
        // Outcome x rules out y's party and vice versa; chi rules out the pure state.
        odop.witness = detail::odop_witness({c.chi, in_plane[px], in_plane[py]},
                                            {c.labels[0], c.labels[py], c.labels[px]});
    }

    // POVM: chi orthogonal to psi and the in-plane Bloch vectors surround zero.
    std::vector<Eigen::VectorXd> bloch;
    for (const auto& v : in_plane) {
        const Vector q = (c.r.adjoint() * v).normalized();
        bloch.push_back(to_bloch(outer(q)).n);
    }
    const HullDistance h = hull_distance(bloch);
    Verdict povm{Criterion::PP_POVM, Status::Compatible,
                 witness::ClosedForm{"chi_orthogonal_and_plane_hull",
                                     {{"chi_overlap", chi_overlap}, {"hull_distance", h.distance}}},
                 std::max(chi_overlap, h.distance)};
    povm.boundary = chi_overlap <= tol.zero && h.distance > kHullContainTol &&
                    h.distance <= kHullBoundaryTol;
    if (chi_overlap <= tol.zero && h.distance <= kHullContainTol) {
        povm.status = Status::Incompatible;
        witness::ContradictingMeasurement m;
        for (int a = 0; a < 3; ++a) {
            const Eigen::Vector3d n = bloch[a];
            Matrix e = c.r * (h.weights[a] * 2.0 * from_bloch(-n)) * c.r.adjoint();
            if (a == 0) {
                e += outer(c.chi);
            } else if (h.weights[a] <= 0.0) {
                continue;
            }
            m.povm.elements.push_back(e);
            m.contradicted.push_back(c.labels[a]);
        }
        povm.witness = std::move(m);
    }
    return {std::move(odop), std::move(povm)};
}

/// ODOP verdict only; the POVM question stays open for this case.
inline Verdict check_two_pure_one_rank2(const TwoPureOneRank2& c, const Tolerances& tol = {})
{
    const double cross = std::abs(c.psi1.dot(c.s3 * c.psi2));
    Verdict v{Criterion::PP_ODOP, Status::Compatible,
              witness::ClosedForm{"projected_cross_overlap", {{"cross_overlap", cross}}}, cross};
    if (cross > tol.zero) {
        return v;
    }
    const Vector p2 = c.s3 * c.psi2;
    const Vector p1 = c.s3 * c.psi1;
    if (p1.norm() <= tol.zero || p2.norm() <= tol.zero) {
        throw Error(ErrorCode::PremiseViolation, "a pure state is orthogonal to the rank-2 support");
    }
    v.status = Status::Incompatible;
    v.witness = detail::odop_witness({c.e3, p2, p1}, {c.labels[2], c.labels[0], c.labels[1]});
    return v;
}

// ---------------------------------------------------------------------------
// Three pure states

struct InnerProductTriple {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
};

/// (a+b+c-1)^2 - 4abc.
inline double discriminant(const InnerProductTriple& t)
{
    const double s = t.a + t.b + t.c - 1.0;
    return s * s - 4.0 * t.a * t.b * t.c;
}

/// Positive exactly when the triple is incompatible.
inline double three_pure_margin(const InnerProductTriple& t)
{
    return std::min(1.0 - (t.a + t.b + t.c), discriminant(t));
}

/// Ellipse form of the same condition.
inline bool ellipse_condition(const InnerProductTriple& t)
{
    const double u = t.a + t.b - 1.0;
    const double v = t.a - t.b;
    return std::abs(v) < 1.0 - t.c && t.a + t.b < 1.0 + t.c &&
           u * u / t.c + v * v / (1.0 - t.c) > 1.0;
}

/// sin^2 of the three angles of a canonical witness frame.
struct AngleSolution {
    std::array<double, 3> x{};
};

/// Solves x1(1-x2)=a, x2(1-x3)=b, x3(1-x1)=c through the quadratic for x2.
/// Returns a solution with every x_k in (0,1), preferring the smaller root.
inline std::optional<AngleSolution> solve_angles(const InnerProductTriple& t)
{
    const double disc = discriminant(t);
    if (disc < 0.0 || t.c >= 1.0) {
        return std::nullopt;
    }
    const double root = std::sqrt(disc);
    const double mid = 1.0 - t.a + t.b - t.c;
    for (const double x2 : {(mid - root) / (2.0 * (1.0 - t.c)), (mid + root) / (2.0 * (1.0 - t.c))}) {
        if (!(x2 > 0.0 && x2 < 1.0)) {
            continue;
        }
        const double x3 = 1.0 - t.b / x2;
        if (!(x3 > 0.0 && x3 < 1.0)) {
            continue;
        }
        const double x1 = 1.0 - t.c / x3;
        if (!(x1 > 0.0 && x1 < 1.0)) {
            continue;
        }
        return AngleSolution{{x1, x2, x3}};
    }
    return std::nullopt;
}

/// Both roots for x2, in ascending order (NaN when the discriminant is negative).
inline std::array<double, 2> x2_roots(const InnerProductTriple& t)
{
    const double root = std::sqrt(discriminant(t));
    const double mid = 1.0 - t.a + t.b - t.c;
    return {(mid - root) / (2.0 * (1.0 - t.c)), (mid + root) / (2.0 * (1.0 - t.c))};
}

/// The three vectors of a canonical witness frame as columns. Vector k has no
/// component along basis vector k, so measuring in the standard basis rules
/// out state k on outcome k. `phases` are arguments of <1|2>, <2|3>, <3|1>.
inline Matrix canonical_vectors(const AngleSolution& s, const std::array<double, 3>& phases = {})
{
    Matrix m = Matrix::Zero(3, 3);
    for (int k = 0; k < 3; ++k) {
        const double th = std::asin(std::sqrt(s.x[k]));
        const Complex tilt = std::polar(1.0, phases[k]);
        // psi_k = cos th |k+1> + e^{-i phase} sin th |k+2>, indices mod 3.
        m((k + 1) % 3, k) = std::cos(th);
        m((k + 2) % 3, k) = std::conj(tilt) * std::sin(th);
    }
    return m;
}

/// Decision on the squared overlaps alone. The witness records the triple,
/// the margin terms and, when incompatible, the angle solution.
inline Verdict check_three_pure(const InnerProductTriple& t)
{
    for (double v : {t.a, t.b, t.c}) {
        if (!(v > 0.0 && v < 1.0)) {
            throw Error(ErrorCode::PremiseViolation, "squared overlaps must lie in (0,1)");
        }
    }
    const double margin = three_pure_margin(t);
    witness::ClosedForm cf{"three_pure_overlaps",
                           {{"a", t.a},
                            {"b", t.b},
                            {"c", t.c},
                            {"one_minus_sum", 1.0 - (t.a + t.b + t.c)},
                            {"discriminant", discriminant(t)}}};
    Verdict v{Criterion::PP_ODOP, Status::Compatible, {}, margin};
    v.boundary = std::abs(margin) < kBoundaryMargin;
    if (margin > 0.0) {
        v.status = Status::Incompatible;
        if (const auto s = solve_angles(t)) {
            for (int k = 0; k < 3; ++k) {
                cf.values.emplace_back("x" + std::to_string(k + 1), s->x[k]);
            }
        }
    }
    v.witness = std::move(cf);
    return v;
}

/// Measurement basis that rules out each pure state on one outcome. The
/// canonical frame is given the phases of the actual overlaps so that its Gram
/// matrix equals that of the states; the map between them is then unitary.
inline std::optional<Matrix> three_pure_witness_basis(const std::array<Vector, 3>& psi,
                                                      const InnerProductTriple& t)
{
    const auto s = solve_angles(t);
    if (!s) {
        return std::nullopt;
    }
    const std::array<double, 3> phases{std::arg(psi[0].dot(psi[1])), std::arg(psi[1].dot(psi[2])),
                                       std::arg(psi[2].dot(psi[0]))};
    const Matrix canon = canonical_vectors(*s, phases);
    Matrix states(3, 3);
    for (int k = 0; k < 3; ++k) {
        states.col(k) = psi[k];
    }
    Eigen::FullPivLU<Matrix> lu(canon);
    if (!lu.isInvertible()) {
        return std::nullopt;
    }
    // V canon = states, and the witness outcomes are V e_k.
    Matrix v = states * lu.inverse();
    orthonormalize_columns(v);
    return v;
}

inline Verdict check_three_pure(const ThreePure& c, const Tolerances& tol = {})
{
    const InnerProductTriple t{c.a, c.b, c.c};
    if (std::min({t.a, t.b, t.c}) <= tol.zero) {
        throw Error(ErrorCode::PremiseViolation, "an orthogonal pair must be handled pairwise");
    }
    if (std::max({t.a, t.b, t.c}) >= 1.0) {
        // Two identical states: a+b+c >= 1, so the triple cannot be incompatible.
        return {Criterion::PP_ODOP, Status::Compatible,
                witness::ClosedForm{"three_pure_overlaps", {{"a", t.a}, {"b", t.b}, {"c", t.c}}},
                three_pure_margin(t)};
    }
    Verdict v = check_three_pure(t);
    if (!v.incompatible()) {
        return v;
    }
    if (const auto basis = three_pure_witness_basis(c.psi, t)) {
        witness::ContradictingMeasurement m;
        m.odop = true;
        m.povm = Povm::from_basis(*basis);
        m.contradicted.assign(c.labels.begin(), c.labels.end());
        v.witness = std::move(m);
    } else {
        v.note = "witness frame unavailable at this margin";
    }
    return v;
}

/// Full three-party analysis: stripping, pairwise short-circuit, then the
/// rank-pattern case. Cases without a closed-form POVM answer report the
/// POVM verdict as undecided unless the ODOP verdict already settles it.
inline PpVerdicts check(const StateEnsemble& ensemble, const Tolerances& tol = {})
{
    const Case kase = classify(ensemble, tol);

    if (const auto* red = std::get_if<Reduced>(&kase)) {
        if (red->remaining.size() == 2) {
            return detail::both(check_two_party_pp(*red->remaining[0], *red->remaining[1], tol));
        }
        return detail::both({Criterion::PP_ODOP, Status::Compatible,
                             witness::ClosedForm{"at_most_one_relevant_state", {}}, 0.0});
    }

    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = i + 1; j < 3; ++j) {
            Verdict two = check_two_party_pp(ensemble[i], ensemble[j], tol);
            if (two.incompatible()) {
                return detail::both(std::move(two));
            }
        }
    }

    const auto undecided_unless = [](const Verdict& odop) {
        if (odop.incompatible()) {
            return relabel(odop, Criterion::PP_POVM);
        }
        Verdict v{Criterion::PP_POVM, Status::Undecided, odop.witness, odop.margin};
        v.note = "closed form unavailable; run the oracle for evidence";
        return v;
    };

    return std::visit(
        [&](const auto& c) -> PpVerdicts {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, ThreeRank2>) {
                return check_three_rank2(c, tol);
            } else if constexpr (std::is_same_v<T, OnePureTwoRank2>) {
                return check_one_pure_two_rank2(c, tol);
            } else if constexpr (std::is_same_v<T, TwoPureOneRank2>) {
                Verdict odop = check_two_pure_one_rank2(c, tol);
                Verdict povm = undecided_unless(odop);
                return {std::move(odop), std::move(povm)};
            } else if constexpr (std::is_same_v<T, ThreePure>) {
                Verdict odop = check_three_pure(c, tol);
                Verdict povm = undecided_unless(odop);
                return {std::move(odop), std::move(povm)};
            } else {
                throw Error(ErrorCode::CaseMismatch, "unreachable case");
            }
        },
        kase);
}

// ---------------------------------------------------------------------------
// Region of incompatibility in the (a, b) plane at fixed c

struct RegionCell {
    double a = 0.0;
    double b = 0.0;
    bool incompatible = false;
};

struct Region {
    double c = 0.0;
    int resolution = 0;
    std::vector<RegionCell> cells;                 ///< a-major, cell centres
    std::vector<std::array<double, 2>> ellipse;    ///< closed polyline
};

inline Region figure1_region(double c, int resolution)
{
    if (!(c > 0.0 && c < 1.0)) {
        throw Error(ErrorCode::BadParameter, "c must lie in (0,1)");
    }
    if (resolution < 2) {
        throw Error(ErrorCode::BadParameter, "resolution must be at least 2");
    }
    Region r;
    r.c = c;
    r.resolution = resolution;
    r.cells.reserve(std::size_t(resolution) * std::size_t(resolution));
    for (int i = 0; i < resolution; ++i) {
        const double a = (i + 0.5) / resolution;
        for (int j = 0; j < resolution; ++j) {
            const double b = (j + 0.5) / resolution;
            r.cells.push_back({a, b, three_pure_margin({a, b, c}) > 0.0});
        }
    }
    // (a+b-1, a-b) = (sqrt(c) cos t, sqrt(1-c) sin t).
    const int samples = std::max(720, 16 * resolution);
    r.ellipse.reserve(std::size_t(samples) + 1);
    for (int k = 0; k <= samples; ++k) {
        const double t = 2.0 * std::numbers::pi * k / samples;
        const double u = std::sqrt(c) * std::cos(t);
        const double v = std::sqrt(1.0 - c) * std::sin(t);
        r.ellipse.push_back({(1.0 + u + v) / 2.0, (1.0 + u - v) / 2.0});
    }
    return r;
}

namespace detail {

inline std::string fmt_double(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace detail

inline std::string region_csv(const Region& r)
{
    std::string out = "a,b,incompatible\n";
    for (const auto& cell : r.cells) {
        out += detail::fmt_double(cell.a) + "," + detail::fmt_double(cell.b) + "," +
               (cell.incompatible ? "1" : "0") + "\n";
    }
    return out;
}

inline std::string ellipse_csv(const Region& r)
{
    std::string out = "a,b\n";
    for (const auto& p : r.ellipse) {
        out += detail::fmt_double(p[0]) + "," + detail::fmt_double(p[1]) + "\n";
    }
    return out;
}

/// Writes PREFIX_region.csv and PREFIX_ellipse.csv.
inline void write_region(const Region& r, const std::string& prefix)
{
    write_atomically(prefix + "_region.csv", region_csv(r));
    write_atomically(prefix + "_ellipse.csv", ellipse_csv(r));
}

} // namespace pp3
} // namespace qsc
