#pragma once

// Small dense complex linear algebra with explicit tolerances. Every rank
// decision in the library goes through the helpers in this header.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qsc/error.hpp"

namespace qsc {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

struct Tolerances {
    double rank = 1e-10; ///< relative eigenvalue cutoff (times the largest eigenvalue)
    double orth = 1e-10; ///< hermiticity / orthonormality slack
    double zero = 1e-10; ///< absolute threshold for "probability is zero"

    static Tolerances uniform(double t) { return {t, t, t}; }

    void validate() const
    {
        for (double t : {rank, orth, zero}) {
            if (!(t > 0.0 && t < 1e-2)) {
                throw Error(ErrorCode::BadParameter,
                            "tolerances must lie in (0, 1e-2), got " + std::to_string(t));
            }
        }
    }
};

inline bool all_finite(const Matrix& m)
{
    for (Index j = 0; j < m.cols(); ++j) {
        for (Index i = 0; i < m.rows(); ++i) {
            if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) {
                return false;
            }
        }
    }
    return true;
}

inline void require_square(const Matrix& m)
{
    if (m.rows() != m.cols() || m.rows() == 0) {
        throw Error(ErrorCode::NotSquare, "expected a non-empty square matrix, got " +
                                              std::to_string(m.rows()) + "x" +
                                              std::to_string(m.cols()));
    }
    if (!all_finite(m)) {
        throw Error(ErrorCode::NotFinite, "matrix has NaN or infinite entries");
    }
}

inline double hermiticity_defect(const Matrix& m) { return (m - m.adjoint()).norm(); }

inline void require_hermitian(const Matrix& m, const Tolerances& tol)
{
    require_square(m);
    const double defect = hermiticity_defect(m);
    if (defect > tol.orth * m.norm()) {
        throw Error(ErrorCode::NotHermitian,
                    "||m - m^dagger||_F = " + std::to_string(defect) + " exceeds tolerance");
    }
}

/// Eigenvalues in descending order with the matching orthonormal eigenvectors as columns.
struct Eigensystem {
    RealVector values;
    Matrix vectors;

    Index size() const { return values.size(); }
    Vector vector(Index i) const { return vectors.col(i); }
};

inline Eigensystem hermitian_eigendecomposition(const Matrix& m, const Tolerances& tol = {})
{
    require_hermitian(m, tol);
    const Matrix sym = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
    if (solver.info() != Eigen::Success) {
        throw Error(ErrorCode::NotHermitian, "eigensolver failed to converge");
    }
    // Eigen returns ascending order.
    const Index n = sym.rows();
    Eigensystem es{RealVector(n), Matrix(n, n)};
    for (Index i = 0; i < n; ++i) {
        es.values(i) = solver.eigenvalues()(n - 1 - i);
        es.vectors.col(i) = solver.eigenvectors().col(n - 1 - i);
    }
    return es;
}

/// Number of leading eigenvalues above the relative cutoff tol.rank * lambda_max.
inline Index numerical_rank(const RealVector& descending, const Tolerances& tol)
{
    if (descending.size() == 0 || !(descending(0) > 0.0)) {
        return 0;
    }
    const double cutoff = tol.rank * descending(0);
    Index r = 0;
    while (r < descending.size() && descending(r) > cutoff) {
        ++r;
    }
    return r;
}

/// A linear subspace of C^D held as an orthonormal column frame. Compare two
/// subspaces through projector(), never through the frames themselves.
class Subspace {
public:
    explicit Subspace(Index ambient_dim = 0)
        : frame_(Matrix::Zero(ambient_dim, 0))
    {
    }

    /// Wraps a frame that is already orthonormal (checked against tol.orth).
    static Subspace from_orthonormal(Matrix frame, const Tolerances& tol = {})
    {
        if (frame.cols() > frame.rows()) {
            throw Error(ErrorCode::NotUnit, "frame has more columns than rows");
        }
        const Matrix gram = frame.adjoint() * frame;
        const double err = (gram - Matrix::Identity(frame.cols(), frame.cols())).norm();
        if (err > tol.orth * std::max<double>(1.0, double(frame.cols())) * 10.0) {
            throw Error(ErrorCode::NotUnit,
                        "frame columns are not orthonormal (error " + std::to_string(err) + ")");
        }
        Subspace s;
        s.frame_ = std::move(frame);
        return s;
    }

    /// Span of arbitrary columns; the dimension is the numerical rank at tol.rank.
    static Subspace span_of(const Matrix& vectors, const Tolerances& tol = {})
    {
        const Index d = vectors.rows();
        if (vectors.cols() == 0) {
            return Subspace(d);
        }
        const Matrix gram = vectors * vectors.adjoint();
        const Eigensystem es = hermitian_eigendecomposition(gram, Tolerances::uniform(1e-3));
        const Index r = numerical_rank(es.values, tol);
        Subspace s;
        s.frame_ = es.vectors.leftCols(r);
        return s;
    }

    Index ambient_dim() const { return frame_.rows(); }
    Index dim() const { return frame_.cols(); }
    bool empty() const { return frame_.cols() == 0; }
    const Matrix& frame() const { return frame_; }
    Vector basis_vector(Index i) const { return frame_.col(i); }

    Matrix projector() const { return frame_ * frame_.adjoint(); }

    /// Norm of the component of v orthogonal to this subspace.
    double residual(const Vector& v) const
    {
        return (v - frame_ * (frame_.adjoint() * v)).norm();
    }

    bool contains(const Vector& v, const Tolerances& tol = {}) const
    {
        return residual(v) <= tol.orth * std::max(1.0, v.norm()) * 100.0;
    }

private:
    Matrix frame_;
};

inline void require_same_ambient(const Subspace& a, const Subspace& b)
{
    if (a.ambient_dim() != b.ambient_dim()) {
        throw Error(ErrorCode::AmbientMismatch, "subspaces live in C^" +
                                                    std::to_string(a.ambient_dim()) + " and C^" +
                                                    std::to_string(b.ambient_dim()));
    }
}

inline Subspace orthocomplement(const Subspace& s)
{
    const Index d = s.ambient_dim();
    const Index k = s.dim();
    if (k == 0) {
        return Subspace::from_orthonormal(Matrix::Identity(d, d));
    }
    if (k == d) {
        return Subspace(d);
    }
    // Eigenvalues of the projector are k ones followed by d-k zeros.
    const Eigensystem es = hermitian_eigendecomposition(s.projector(), Tolerances::uniform(1e-3));
    return Subspace::from_orthonormal(es.vectors.rightCols(d - k), Tolerances::uniform(1e-6));
}

/// Eigenvectors whose eigenvalue exceeds tol.rank * lambda_max.
inline Subspace support(const Matrix& rho, const Tolerances& tol = {})
{
    const Eigensystem es = hermitian_eigendecomposition(rho, tol);
    const Index r = numerical_rank(es.values, tol);
    return Subspace::from_orthonormal(es.vectors.leftCols(r), Tolerances::uniform(1e-6));
}

inline Subspace null_space(const Matrix& rho, const Tolerances& tol = {})
{
    const Eigensystem es = hermitian_eigendecomposition(rho, tol);
    const Index r = numerical_rank(es.values, tol);
    return Subspace::from_orthonormal(es.vectors.rightCols(es.size() - r),
                                      Tolerances::uniform(1e-6));
}

inline Subspace span_union(std::span<const Subspace> subs, const Tolerances& tol = {})
{
    if (subs.empty()) {
        return Subspace(0);
    }
    const Index d = subs.front().ambient_dim();
    Index total = 0;
    for (const auto& s : subs) {
        require_same_ambient(subs.front(), s);
        total += s.dim();
    }
    Matrix stacked(d, total);
    Index col = 0;
    for (const auto& s : subs) {
        stacked.middleCols(col, s.dim()) = s.frame();
        col += s.dim();
    }
    return Subspace::span_of(stacked, tol);
}

inline Subspace span_union(std::initializer_list<Subspace> subs, const Tolerances& tol = {})
{
    return span_union(std::span<const Subspace>(subs.begin(), subs.size()), tol);
}

/// a ∩ b computed as the orthocomplement of span(a^⊥, b^⊥).
inline Subspace intersect(const Subspace& a, const Subspace& b, const Tolerances& tol = {})
{
    require_same_ambient(a, b);
    const Subspace perp = span_union({orthocomplement(a), orthocomplement(b)}, tol);
    return orthocomplement(perp);
}

/// Frobenius distance between the orthogonal projectors of two subspaces.
inline double projector_distance(const Subspace& a, const Subspace& b)
{
    require_same_ambient(a, b);
    return (a.projector() - b.projector()).norm();
}

inline void require_unit(const Vector& v, const Tolerances& tol)
{
    if (std::abs(v.norm() - 1.0) > tol.orth * 100.0) {
        throw Error(ErrorCode::NotUnit, "vector norm " + std::to_string(v.norm()) + " is not 1");
    }
}

/// d(psi, chi) = arccos |<psi|chi>|, a metric on rays with values in [0, pi/2].
inline double projective_distance(const Vector& psi, const Vector& chi, const Tolerances& tol = {})
{
    if (psi.size() != chi.size()) {
        throw Error(ErrorCode::DimensionMismatch, "vectors of different length");
    }
    require_unit(psi, tol);
    require_unit(chi, tol);
    const double overlap = std::min(1.0, std::abs(psi.dot(chi)));
    return std::acos(overlap);
}

/// Modified Gram-Schmidt on the columns, in place. Columns are assumed independent.
inline void orthonormalize_columns(Matrix& m)
{
    for (Index j = 0; j < m.cols(); ++j) {
        for (Index i = 0; i < j; ++i) {
            m.col(j) -= m.col(i).dot(m.col(j)) * m.col(i);
        }
        m.col(j).normalize();
    }
}

/// Completes an orthonormal frame (D x k) to a unitary D x D basis. The new
/// columns span the orthocomplement of the given ones.
inline Matrix complete_basis(const Matrix& frame)
{
    const Index d = frame.rows();
    Matrix basis(d, d);
    basis.leftCols(frame.cols()) = frame;
    const Subspace rest = orthocomplement(Subspace::from_orthonormal(frame, Tolerances::uniform(1e-6)));
    basis.rightCols(d - frame.cols()) = rest.frame();
    return basis;
}

inline Matrix outer(const Vector& v) { return v * v.adjoint(); }

inline bool is_unitary(const Matrix& u, double tol)
{
    return u.rows() == u.cols() &&
           (u.adjoint() * u - Matrix::Identity(u.rows(), u.cols())).norm() <= tol;
}

} // namespace qsc
