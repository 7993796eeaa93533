#pragma once

#include <array>
#include <cstdint>
#include <random>

#include "qsc/linalg.hpp"

namespace qsc {

using Rng = std::mt19937_64;

/// Independent generator for stream `index` of a seeded computation. The
/// three keys are mixed through seed_seq into one 64-bit engine seed; asking
/// seed_seq for the full engine state is an order of magnitude slower.
inline Rng make_stream(std::uint64_t seed, std::uint64_t index = 0, std::uint64_t salt = 0)
{
    std::seed_seq seq{std::uint32_t(seed), std::uint32_t(seed >> 32), std::uint32_t(index),
                      std::uint32_t(index >> 32), std::uint32_t(salt), std::uint32_t(salt >> 32)};
    std::array<std::uint32_t, 2> key{};
    seq.generate(key.begin(), key.end());
    return Rng((std::uint64_t(key[0]) << 32) | key[1]);
}

inline Vector gaussian_vector(Index d, Rng& rng)
{
    std::normal_distribution<double> normal;
    Vector v(d);
    for (Index i = 0; i < d; ++i) {
        const double re = normal(rng);
        const double im = normal(rng);
        v(i) = Complex(re, im);
    }
    return v;
}

/// Uniformly distributed unit vector in C^d.
inline Vector random_unit_vector(Index d, Rng& rng)
{
    Vector v = gaussian_vector(d, rng);
    return v / v.norm();
}

/// Haar-distributed unitary: QR of a complex Ginibre matrix with the phases of
/// R's diagonal pushed into Q.
inline Matrix haar_unitary(Index d, Rng& rng)
{
    Matrix g(d, d);
    for (Index j = 0; j < d; ++j) {
        g.col(j) = gaussian_vector(d, rng);
    }
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Index j = 0; j < d; ++j) {
        const double mag = std::abs(r(j, j));
        if (mag > 0.0) {
            q.col(j) *= r(j, j) / mag;
        }
    }
    return q;
}

/// Random density operator of the requested rank (mixture of `rank` random pure
/// states with random weights).
inline Matrix random_density(Index d, Index rank, Rng& rng)
{
    std::uniform_real_distribution<double> weight(0.1, 1.0);
    const Matrix u = haar_unitary(d, rng);
    Matrix rho = Matrix::Zero(d, d);
    double total = 0.0;
    for (Index k = 0; k < rank; ++k) {
        const double w = weight(rng);
        rho += w * outer(u.col(k));
        total += w;
    }
    return rho / total;
}

} // namespace qsc
