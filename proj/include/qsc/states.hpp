#pragma once

#include <array>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "qsc/linalg.hpp"

namespace qsc {

/// A validated density operator: Hermitian, positive semidefinite, unit trace.
/// Construct through validate(); the cached eigensystem is descending.
class DensityOperator {
public:
    DensityOperator() = default;

    const std::string& label() const { return label_; }
    Index dim() const { return matrix_.rows(); }
    const Matrix& matrix() const { return matrix_; }
    const Eigensystem& eigensystem() const { return eig_; }

    Index rank(const Tolerances& tol = {}) const { return numerical_rank(eig_.values, tol); }
    bool is_pure(const Tolerances& tol = {}) const { return rank(tol) == 1; }
    bool is_full_rank(const Tolerances& tol = {}) const { return rank(tol) == dim(); }

    Subspace support(const Tolerances& tol = {}) const
    {
        return Subspace::from_orthonormal(eig_.vectors.leftCols(rank(tol)), Tolerances::uniform(1e-6));
    }

    Subspace null_space(const Tolerances& tol = {}) const
    {
        return Subspace::from_orthonormal(eig_.vectors.rightCols(dim() - rank(tol)),
                                          Tolerances::uniform(1e-6));
    }

    /// Eigenvector with the largest eigenvalue (first index on ties).
    Vector leading_vector() const { return eig_.vectors.col(0); }
    double leading_value() const { return eig_.values(0); }

    /// <v|rho|v> for a unit vector v.
    double probability(const Vector& v) const { return std::max(0.0, v.dot(matrix_ * v).real()); }

    /// tr(rho E) for an arbitrary positive operator E.
    double probability(const Matrix& element) const
    {
        return (matrix_ * element).trace().real();
    }

private:
    friend DensityOperator validate(const Matrix&, std::string, const Tolerances&);

    std::string label_;
    Matrix matrix_;
    Eigensystem eig_;
};

/// Checks the density-operator invariants. Violations below tolerance
/// (eigenvalues in [-tol.rank, 0), trace within 1e-8 of one) are repaired by
/// clipping the spectrum to [0, 1] and renormalizing.
inline DensityOperator validate(const Matrix& raw, std::string label, const Tolerances& tol = {})
{
    require_hermitian(raw, tol);
    const Matrix sym = 0.5 * (raw + raw.adjoint());
    Eigensystem es = hermitian_eigendecomposition(sym, tol);

    const double lowest = es.values.minCoeff();
    if (lowest < -tol.rank) {
        throw Error(ErrorCode::NotPSD, "state '" + label + "' has eigenvalue " +
                                           std::to_string(lowest) + " < -" +
                                           std::to_string(tol.rank));
    }
    const double trace = sym.trace().real();
    if (std::abs(trace - 1.0) > 1e-8) {
        throw Error(ErrorCode::TraceNotOne,
                    "state '" + label + "' has trace " + std::to_string(trace));
    }

    DensityOperator rho;
    rho.label_ = std::move(label);
    // Float noise (|defect| <= 1e-13) is left alone so that validation is
    // idempotent on its own output.
    constexpr double noise = 1e-13;
    const bool needs_repair =
        lowest < -noise || es.values.maxCoeff() > 1.0 + noise || std::abs(trace - 1.0) > noise;
    if (needs_repair) {
        RealVector clipped = es.values.cwiseMax(0.0).cwiseMin(1.0);
        clipped /= clipped.sum();
        rho.matrix_ = es.vectors * clipped.cast<Complex>().asDiagonal() * es.vectors.adjoint();
        es.values = clipped;
    } else {
        rho.matrix_ = sym;
    }
    rho.eig_ = std::move(es);
    return rho;
}

/// N >= 1 density operators of a common dimension with unique labels.
class StateEnsemble {
public:
    StateEnsemble() = default;

    explicit StateEnsemble(std::vector<DensityOperator> states)
        : states_(std::move(states))
    {
        if (states_.empty()) {
            throw Error(ErrorCode::EmptyEnsemble, "an ensemble needs at least one state");
        }
        std::set<std::string> seen;
        for (const auto& s : states_) {
            if (s.dim() != states_.front().dim()) {
                throw Error(ErrorCode::DimensionMismatch, "state '" + s.label() +
                                                              "' has dimension " +
                                                              std::to_string(s.dim()));
            }
            if (s.label().empty()) {
                throw Error(ErrorCode::ParseError, "state labels are mandatory");
            }
            if (!seen.insert(s.label()).second) {
                throw Error(ErrorCode::DuplicateLabel, "label '" + s.label() + "' repeats");
            }
        }
    }

    Index dim() const { return states_.front().dim(); }
    std::size_t size() const { return states_.size(); }
    const std::vector<DensityOperator>& states() const { return states_; }
    const DensityOperator& operator[](std::size_t i) const { return states_[i]; }
    auto begin() const { return states_.begin(); }
    auto end() const { return states_.end(); }

    const DensityOperator* find(const std::string& label) const
    {
        for (const auto& s : states_) {
            if (s.label() == label) {
                return &s;
            }
        }
        return nullptr;
    }

private:
    std::vector<DensityOperator> states_;
};

/// Builds and validates an ensemble from labelled raw matrices.
inline StateEnsemble make_ensemble(const std::vector<std::pair<std::string, Matrix>>& raw,
                                   const Tolerances& tol = {})
{
    std::vector<DensityOperator> states;
    states.reserve(raw.size());
    for (const auto& [label, m] : raw) {
        states.push_back(validate(m, label, tol));
    }
    return StateEnsemble(std::move(states));
}

inline Matrix pure_state(const Vector& psi) { return outer(psi.normalized()); }

// ---------------------------------------------------------------------------
// Qubits

struct BlochVector {
    Eigen::Vector3d n = Eigen::Vector3d::Zero();

    double length() const { return n.norm(); }
    bool is_pure(double tol = 1e-9) const { return std::abs(n.norm() - 1.0) <= tol; }
};

inline const std::array<Matrix, 3>& pauli_matrices()
{
    static const std::array<Matrix, 3> paulis = [] {
        const Complex i(0.0, 1.0);
        std::array<Matrix, 3> p{Matrix(2, 2), Matrix(2, 2), Matrix(2, 2)};
        p[0] << 0.0, 1.0, 1.0, 0.0;
        p[1] << 0.0, -i, i, 0.0;
        p[2] << 1.0, 0.0, 0.0, -1.0;
        return p;
    }();
    return paulis;
}

/// n_i = tr(rho sigma_i).
inline BlochVector to_bloch(const Matrix& rho)
{
    if (rho.rows() != 2 || rho.cols() != 2) {
        throw Error(ErrorCode::WrongDimension, "Bloch vectors exist only for qubits");
    }
    BlochVector b;
    for (int k = 0; k < 3; ++k) {
        b.n(k) = (rho * pauli_matrices()[k]).trace().real();
    }
    if (b.n.norm() > 1.0 + 1e-9) {
        throw Error(ErrorCode::NotPSD, "Bloch vector longer than one");
    }
    return b;
}

inline BlochVector to_bloch(const DensityOperator& rho) { return to_bloch(rho.matrix()); }

/// rho = (1 + n.sigma) / 2.
inline Matrix from_bloch(const Eigen::Vector3d& n)
{
    Matrix rho = 0.5 * Matrix::Identity(2, 2);
    for (int k = 0; k < 3; ++k) {
        rho += 0.5 * n(k) * pauli_matrices()[k];
    }
    return rho;
}

/// Pure-state vector whose Bloch vector is the unit vector n.
inline Vector bloch_state(const Eigen::Vector3d& n)
{
    const Eigensystem es = hermitian_eigendecomposition(from_bloch(n.normalized()));
    return es.vector(0);
}

// ---------------------------------------------------------------------------
// Commuting ensembles

/// Returns a unitary whose columns simultaneously diagonalize every state, or
/// nothing if some pair of states fails to commute within tol.orth.
inline std::optional<Matrix> commuting_eigenbasis(const StateEnsemble& ensemble,
                                                  const Tolerances& tol = {})
{
    const auto& states = ensemble.states();
    for (std::size_t i = 0; i < states.size(); ++i) {
        for (std::size_t j = i + 1; j < states.size(); ++j) {
            const Matrix comm = states[i].matrix() * states[j].matrix() -
                                states[j].matrix() * states[i].matrix();
            if (comm.norm() > tol.orth) {
                return std::nullopt;
            }
        }
    }

    const Index d = ensemble.dim();
    std::mt19937_64 rng(0x5eed);
    std::uniform_real_distribution<double> coeff(0.5, 1.5);
    Matrix combo = Matrix::Zero(d, d);
    for (const auto& s : states) {
        combo += coeff(rng) * s.matrix();
    }
    Matrix basis = hermitian_eigendecomposition(combo, Tolerances::uniform(1e-6)).vectors;

    // Refine: inside every block where all states seen so far are degenerate,
    // diagonalize the next state and split the block by its eigenvalues.
    std::vector<std::vector<Index>> blocks{{}};
    for (Index k = 0; k < d; ++k) {
        blocks.front().push_back(k);
    }
    for (const auto& s : states) {
        std::vector<std::vector<Index>> next;
        for (const auto& block : blocks) {
            const Index m = Index(block.size());
            Matrix sub(d, m);
            for (Index c = 0; c < m; ++c) {
                sub.col(c) = basis.col(block[c]);
            }
            const Matrix block_op = sub.adjoint() * s.matrix() * sub;
            // Exactly Hermitian even when the block is zero and any defect is too large.
            const Matrix restricted = 0.5 * (block_op + block_op.adjoint());
            const Eigensystem es = hermitian_eigendecomposition(restricted, Tolerances::uniform(1e-6));
            const Matrix rotated = sub * es.vectors;
            for (Index c = 0; c < m; ++c) {
                basis.col(block[c]) = rotated.col(c);
            }
            std::vector<Index> current{block[0]};
            for (Index c = 1; c < m; ++c) {
                if (std::abs(es.values(c) - es.values(c - 1)) > 1e-8) {
                    next.push_back(current);
                    current.clear();
                }
                current.push_back(block[c]);
            }
            next.push_back(current);
        }
        blocks = std::move(next);
    }
    orthonormalize_columns(basis);
    return basis;
}

// ---------------------------------------------------------------------------
// Classical probability assignments

struct ClassicalParty {
    std::string label;
    std::vector<double> probs;
};

struct ClassicalAssignment {
    std::size_t outcomes = 0;
    std::vector<ClassicalParty> parties;

    void validate() const
    {
        if (outcomes == 0 || parties.empty()) {
            throw Error(ErrorCode::InvalidProbabilities, "need at least one outcome and one party");
        }
        std::set<std::string> seen;
        for (const auto& p : parties) {
            if (p.label.empty() || !seen.insert(p.label).second) {
                throw Error(ErrorCode::DuplicateLabel, "labels must be unique and non-empty");
            }
            if (p.probs.size() != outcomes) {
                throw Error(ErrorCode::InvalidProbabilities,
                            "party '" + p.label + "' has " + std::to_string(p.probs.size()) +
                                " probabilities, expected " + std::to_string(outcomes));
            }
            double sum = 0.0;
            for (double q : p.probs) {
                if (!std::isfinite(q) || q < 0.0) {
                    throw Error(ErrorCode::InvalidProbabilities,
                                "party '" + p.label + "' has a negative probability");
                }
                sum += q;
            }
            if (std::abs(sum - 1.0) > 1e-9) {
                throw Error(ErrorCode::InvalidProbabilities,
                            "party '" + p.label + "' probabilities sum to " + std::to_string(sum));
            }
        }
    }
};

/// Diagonal probabilities of every state in a common eigenbasis.
inline ClassicalAssignment diagonal_assignment(const StateEnsemble& ensemble, const Matrix& basis)
{
    ClassicalAssignment a;
    a.outcomes = std::size_t(ensemble.dim());
    for (const auto& s : ensemble) {
        ClassicalParty p{s.label(), {}};
        double sum = 0.0;
        for (Index k = 0; k < basis.cols(); ++k) {
            p.probs.push_back(s.probability(Vector(basis.col(k))));
            sum += p.probs.back();
        }
        for (double& q : p.probs) {
            q /= sum;
        }
        a.parties.push_back(std::move(p));
    }
    return a;
}

} // namespace qsc
