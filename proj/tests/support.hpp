#pragma once

#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include <gtest/gtest.h>

#include "qsc/qsc.hpp"

namespace qsc::test {

inline Vector vec(std::initializer_list<Complex> xs)
{
    Vector v(Index(xs.size()));
    Index i = 0;
    for (Complex x : xs) {
        v(i++) = x;
    }
    return v;
}

inline Vector basis(Index d, Index k)
{
    Vector v = Vector::Zero(d);
    v(k) = 1.0;
    return v;
}

inline Matrix diag(std::initializer_list<double> xs)
{
    Matrix m = Matrix::Zero(Index(xs.size()), Index(xs.size()));
    Index i = 0;
    for (double x : xs) {
        m(i, i) = x;
        ++i;
    }
    return m;
}

inline Matrix proj(const Vector& v) { return pure_state(v); }

inline StateEnsemble ensemble(std::vector<Matrix> ms)
{
    std::vector<std::pair<std::string, Matrix>> raw;
    for (std::size_t i = 0; i < ms.size(); ++i) {
        raw.emplace_back("P" + std::to_string(i + 1), std::move(ms[i]));
    }
    return make_ensemble(raw);
}

/// The three rank-two states that are pairwise but not jointly compatible.
inline StateEnsemble threestates()
{
    return make_ensemble({{"rho1", diag({0, 0.5, 0.5})},
                          {"rho2", diag({0.5, 0, 0.5})},
                          {"rho3", diag({0.5, 0.5, 0})}});
}

/// Pure qubit states with Bloch vectors at 120 degrees in the x-z plane.
inline StateEnsemble trine()
{
    std::vector<Matrix> ms;
    for (int k = 0; k < 3; ++k) {
        const double t = 2.0 * M_PI * k / 3.0;
        ms.push_back(from_bloch(Eigen::Vector3d(std::sin(t), 0.0, std::cos(t))));
    }
    return ensemble(ms);
}

inline Matrix bloch_matrix(double x, double y, double z) { return from_bloch(Eigen::Vector3d(x, y, z)); }

inline void expect_witness(const StateEnsemble& e, const Verdict& v, const Tolerances& tol = {})
{
    const WitnessCheck chk = verify_witness(e, v, tol);
    EXPECT_TRUE(chk.ok) << to_string(v.criterion) << " " << witness_kind(v.witness) << ": "
                        << chk.reason;
}

inline void expect_witness(const ClassicalAssignment& a, const Verdict& v)
{
    const WitnessCheck chk = verify_witness(a, v);
    EXPECT_TRUE(chk.ok) << to_string(v.criterion) << ": " << chk.reason;
}

/// Random ensemble of dimension d with n parties and ranks drawn in [1, d].
inline StateEnsemble random_ensemble(Index d, std::size_t n, Rng& rng)
{
    std::uniform_int_distribution<int> rank(1, int(d));
    std::vector<Matrix> ms;
    for (std::size_t i = 0; i < n; ++i) {
        ms.push_back(random_density(d, rank(rng), rng));
    }
    return ensemble(ms);
}

} // namespace qsc::test
