#pragma once

#include <string>
#include <vector>

#include "qsc/linalg.hpp"
#include "qsc/states.hpp"

namespace qsc {

/// Positive operators summing to the identity. An ODOP is the special case of
/// D rank-one orthogonal projectors; Povm::from_basis builds one.
struct Povm {
    std::vector<Matrix> elements;

    Index dim() const { return elements.empty() ? 0 : elements.front().rows(); }
    std::size_t size() const { return elements.size(); }

    static Povm from_basis(const Matrix& basis)
    {
        Povm p;
        for (Index k = 0; k < basis.cols(); ++k) {
            p.elements.push_back(outer(basis.col(k)));
        }
        return p;
    }

    Matrix total() const
    {
        Matrix sum = Matrix::Zero(dim(), dim());
        for (const auto& e : elements) {
            sum += e;
        }
        return sum;
    }

    /// ||sum_b E_b - 1||_F.
    double completeness_error() const
    {
        return (total() - Matrix::Identity(dim(), dim())).norm();
    }

    double min_eigenvalue() const
    {
        double lowest = 0.0;
        for (const auto& e : elements) {
            const Eigensystem es = hermitian_eigendecomposition(e, Tolerances::uniform(1e-6));
            lowest = std::min(lowest, es.values.minCoeff());
        }
        return lowest;
    }

    void validate(const Tolerances& tol = {}) const
    {
        if (elements.empty()) {
            throw Error(ErrorCode::InvalidPovm, "a POVM needs at least one element");
        }
        for (const auto& e : elements) {
            if (e.rows() != dim() || e.cols() != dim()) {
                throw Error(ErrorCode::InvalidPovm, "POVM elements differ in shape");
            }
            if (!all_finite(e) || hermiticity_defect(e) > tol.orth * std::max(1.0, e.norm())) {
                throw Error(ErrorCode::InvalidPovm, "POVM element is not Hermitian");
            }
        }
        if (min_eigenvalue() < -tol.rank) {
            throw Error(ErrorCode::InvalidPovm, "POVM element is not positive semidefinite");
        }
        const double err = completeness_error();
        if (err > tol.orth * std::sqrt(double(dim()))) {
            throw Error(ErrorCode::InvalidPovm,
                        "elements sum to identity only within " + std::to_string(err));
        }
    }

    std::vector<double> probabilities(const DensityOperator& rho) const
    {
        std::vector<double> p;
        p.reserve(elements.size());
        for (const auto& e : elements) {
            p.push_back(rho.probability(e));
        }
        return p;
    }
};

/// Rank-one refinement of a POVM together with the index of the element each
/// piece came from.
struct RefinedPovm {
    Povm povm;
    std::vector<std::size_t> origin;
};

/// Splits every element into its eigen-pieces lambda |v><v|. Zero probabilities
/// only spread under refinement, so a contradicting POVM stays contradicting.
inline RefinedPovm refine_povm(const Povm& povm, const Tolerances& tol = {})
{
    povm.validate(tol);
    RefinedPovm out;
    for (std::size_t b = 0; b < povm.elements.size(); ++b) {
        const Eigensystem es = hermitian_eigendecomposition(povm.elements[b], tol);
        const Index r = numerical_rank(es.values, tol);
        for (Index i = 0; i < r; ++i) {
            out.povm.elements.push_back(es.values(i) * outer(es.vector(i)));
            out.origin.push_back(b);
        }
    }
    return out;
}

} // namespace qsc
