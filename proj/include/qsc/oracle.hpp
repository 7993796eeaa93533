#pragma once

// Randomized search for a measurement on which every outcome is ruled out by
// some party. A hit is a proof of incompatibility; a miss is only evidence.

#include <algorithm>
#include <complex>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "qsc/linalg.hpp"
#include "qsc/measurement.hpp"
#include "qsc/random.hpp"
#include "qsc/states.hpp"

namespace qsc {

struct OracleConfig {
    int trials = 10000;
    int refine_steps = 200; ///< sweeps over all rotation planes per trial
    std::uint64_t seed = 0;
    int extra_dims = 0;
    double score_tol = 1e-9;
    int threads = 0; ///< 0 = hardware concurrency

    void validate() const
    {
        if (trials < 1) {
            throw Error(ErrorCode::BadParameter, "trials must be at least 1");
        }
        if (refine_steps < 0 || extra_dims < 0) {
            throw Error(ErrorCode::BadParameter, "refine_steps and extra_dims must be >= 0");
        }
        if (!(score_tol > 0.0)) {
            throw Error(ErrorCode::BadParameter, "score_tol must be positive");
        }
    }
};

struct OracleMeasurement {
    Povm povm;                             ///< ODOP when extra_dims == 0
    std::vector<std::string> contradicted; ///< party with the least probability per outcome
    std::vector<double> min_probability;
};

struct OracleResult {
    bool found = false;
    double best_score = std::numeric_limits<double>::infinity();
    std::optional<OracleMeasurement> measurement;
    int trials_used = 0;
    int extra_dims = 0;
};

namespace detail {

/// Flat state for one search: per-party projections Y = F^dagger B where
/// F F^dagger = rho, so p(k, alpha) = ||Y_alpha[:, k]||^2.
class OdopSearch {
public:
    OdopSearch(const StateEnsemble& ensemble, int extra_dims)
        : d_(ensemble.dim()), n_(ensemble.dim() + extra_dims), parties_(ensemble.size())
    {
        const Tolerances tol;
        for (const auto& s : ensemble) {
            const Eigensystem& es = s.eigensystem();
            const Index r = std::max<Index>(1, numerical_rank(es.values, tol));
            row_begin_.push_back(rows_);
            for (Index i = 0; i < r; ++i) {
                const double w = std::sqrt(std::max(0.0, es.values(i)));
                std::vector<Complex> row(std::size_t(n_), Complex(0.0));
                for (Index j = 0; j < d_; ++j) {
                    row[std::size_t(j)] = w * std::conj(es.vectors(j, i));
                }
                factors_.insert(factors_.end(), row.begin(), row.end());
                ++rows_;
            }
        }
        row_begin_.push_back(rows_);
        y_.assign(std::size_t(rows_ * n_), Complex(0.0));
        basis_.assign(std::size_t(n_ * n_), Complex(0.0));
        col_i_.resize(std::size_t(rows_));
        col_j_.resize(std::size_t(rows_));
        mins_.resize(std::size_t(n_));
    }

    Index n() const { return n_; }
    int last_sweeps() const { return sweeps_; }

    static constexpr double kInitialStep = 0.5;
    static constexpr double kGrow = 1.5;
    static constexpr double kStallRatio = 0.1;

    /// Restart from a Haar-random basis and refine. Returns the final score.
    double run(Rng& rng, int sweeps, double stop_score)
    {
        const Matrix u = haar_unitary(n_, rng);
        for (Index c = 0; c < n_; ++c) {
            for (Index r = 0; r < n_; ++r) {
                basis_[idx(r, c)] = u(r, c);
            }
        }
        for (Index row = 0; row < rows_; ++row) {
            for (Index c = 0; c < n_; ++c) {
                Complex acc = 0.0;
                for (Index r = 0; r < d_; ++r) {
                    acc += factors_[std::size_t(row * n_ + r)] * u(r, c);
                }
                y_[std::size_t(row * n_ + c)] = acc;
            }
        }
        double score = 0.0;
        for (Index k = 0; k < n_; ++k) {
            mins_[std::size_t(k)] = column_min(&y_[0], k, n_);
            score += mins_[std::size_t(k)];
        }

        std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
        double step = kInitialStep;
        sweeps_ = 0;
        for (int sweep = 0; sweep < sweeps && score > stop_score; ++sweep) {
            ++sweeps_;
            const double c = std::cos(step);
            const double s = std::sin(step);
            bool improved = false;
            for (Index i = 0; i < n_; ++i) {
                for (Index j = i + 1; j < n_; ++j) {
                    const Complex w = std::polar(1.0, phase(rng));
                    for (const Complex dir : {w, Complex(0.0, 1.0) * w}) {
                        improved |= try_rotation(i, j, c, s * dir, score) ||
                                     try_rotation(i, j, c, -s * dir, score);
                    }
                }
            }
            if (improved) {
                step = std::min(kInitialStep, step * kGrow);
            } else {
                step *= 0.5;
                // Moves of this size cannot close the remaining gap.
                if (step < 1e-9 || step < kStallRatio * std::sqrt(score)) {
                    break;
                }
            }
        }
        // The running score is updated incrementally; recompute it exactly.
        score = 0.0;
        for (Index k = 0; k < n_; ++k) {
            score += column_min(&y_[0], k, n_);
        }
        return score;
    }

    Matrix basis() const
    {
        Matrix b(n_, n_);
        for (Index c = 0; c < n_; ++c) {
            for (Index r = 0; r < n_; ++r) {
                b(r, c) = basis_[idx(r, c)];
            }
        }
        return b;
    }

private:
    // Plain product; operator* on std::complex carries inf/nan recovery that
    // dominates the inner loop.
    static Complex mul(Complex x, Complex y)
    {
        return {x.real() * y.real() - x.imag() * y.imag(), x.real() * y.imag() + x.imag() * y.real()};
    }

    std::size_t idx(Index r, Index c) const { return std::size_t(c * n_ + r); }

    /// min over parties of the probability of column k of a rows x stride array.
    double column_min(const Complex* y, Index k, Index stride) const
    {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t a = 0; a < parties_; ++a) {
            double p = 0.0;
            for (Index row = row_begin_[a]; row < row_begin_[a + 1]; ++row) {
                p += std::norm(y[std::size_t(row * stride + k)]);
            }
            best = std::min(best, p);
        }
        return best;
    }

    double vector_min(const std::vector<Complex>& col) const { return column_min(col.data(), 0, 1); }

    bool try_rotation(Index i, Index j, double c, Complex s, double& score)
    {
        // b_i' = c b_i + s b_j, b_j' = -conj(s) b_i + c b_j
        for (Index row = 0; row < rows_; ++row) {
            const Complex yi = y_[std::size_t(row * n_ + i)];
            const Complex yj = y_[std::size_t(row * n_ + j)];
            col_i_[std::size_t(row)] = c * yi + mul(s, yj);
            col_j_[std::size_t(row)] = c * yj - mul(std::conj(s), yi);
        }
        const double mi = vector_min(col_i_);
        const double mj = vector_min(col_j_);
        const double next = score - mins_[std::size_t(i)] - mins_[std::size_t(j)] + mi + mj;
        if (!(next < score)) {
            return false;
        }
        for (Index row = 0; row < rows_; ++row) {
            y_[std::size_t(row * n_ + i)] = col_i_[std::size_t(row)];
            y_[std::size_t(row * n_ + j)] = col_j_[std::size_t(row)];
        }
        for (Index r = 0; r < n_; ++r) {
            const Complex bi = basis_[idx(r, i)];
            const Complex bj = basis_[idx(r, j)];
            basis_[idx(r, i)] = c * bi + mul(s, bj);
            basis_[idx(r, j)] = c * bj - mul(std::conj(s), bi);
        }
        mins_[std::size_t(i)] = mi;
        mins_[std::size_t(j)] = mj;
        score = std::max(0.0, next);
        return true;
    }

    Index d_;
    Index n_;
    std::size_t parties_;
    Index rows_ = 0;
    std::vector<Index> row_begin_;
    std::vector<Complex> factors_; ///< rows x n, zero-padded
    std::vector<Complex> y_;       ///< rows x n
    std::vector<Complex> basis_;   ///< n x n, column-major
    std::vector<Complex> col_i_, col_j_;
    std::vector<double> mins_;
    int sweeps_ = 0;
};

/// Rank-one POVM on the original space from a basis of the enlarged one.
inline OracleMeasurement project_measurement(const StateEnsemble& ensemble, const Matrix& basis)
{
    const Index d = ensemble.dim();
    OracleMeasurement m;
    for (Index k = 0; k < basis.cols(); ++k) {
        const Vector v = basis.col(k).head(d);
        if (v.squaredNorm() < 1e-15) {
            continue; // outcome lives entirely in the added dimensions
        }
        m.povm.elements.push_back(outer(v));
    }
    for (const auto& e : m.povm.elements) {
        double least = std::numeric_limits<double>::infinity();
        std::string who;
        for (const auto& s : ensemble) {
            const double p = std::max(0.0, s.probability(e));
            if (p < least) {
                least = p;
                who = s.label();
            }
        }
        m.contradicted.push_back(who);
        m.min_probability.push_back(least);
    }
    return m;
}

} // namespace detail

/// Minimizes sum_k min_alpha p_k(alpha) over orthonormal bases, embedding the
/// states in D + extra_dims dimensions. Trials run in fixed blocks so the
/// result does not depend on the thread count.
inline OracleResult search_contradicting_odop(const StateEnsemble& ensemble, const OracleConfig& cfg)
{
    cfg.validate();
    constexpr int kBlock = 64;
    const std::uint64_t salt = 0x6f7261636c65ULL + std::uint64_t(cfg.extra_dims);
    int workers = cfg.threads > 0 ? cfg.threads : int(std::thread::hardware_concurrency());
    workers = std::clamp(workers, 1, kBlock);

    struct Best {
        double score = std::numeric_limits<double>::infinity();
        int trial = -1;
        Matrix basis;
    };

    OracleResult result;
    result.extra_dims = cfg.extra_dims;
    Best best;
    const double stop = 0.01 * cfg.score_tol;

    for (int start = 0; start < cfg.trials; start += kBlock) {
        const int end = std::min(cfg.trials, start + kBlock);
        std::vector<Best> local(static_cast<std::size_t>(workers));
        const auto work = [&](int w) {
            detail::OdopSearch search(ensemble, cfg.extra_dims);
            Best& mine = local[std::size_t(w)];
            for (int t = start + w; t < end; t += workers) {
                Rng rng = make_stream(cfg.seed, std::uint64_t(t), salt);
                const double score = search.run(rng, cfg.refine_steps, stop);
                if (score < mine.score || (score == mine.score && t < mine.trial)) {
                    mine = {score, t, search.basis()};
                }
            }
        };
        if (workers == 1) {
            work(0);
        } else {
            std::vector<std::thread> pool;
            for (int w = 0; w < workers; ++w) {
                pool.emplace_back(work, w);
            }
            for (auto& th : pool) {
                th.join();
            }
        }
        for (auto& b : local) {
            if (b.trial >= 0 &&
                (b.score < best.score || (b.score == best.score && b.trial < best.trial))) {
                best = std::move(b);
            }
        }
        result.trials_used = end;
        if (best.score <= cfg.score_tol) {
            break;
        }
    }

    result.best_score = best.score;
    if (best.score <= cfg.score_tol) {
        OracleMeasurement m = detail::project_measurement(ensemble, best.basis);
        const bool verified =
            std::all_of(m.min_probability.begin(), m.min_probability.end(),
                        [&](double p) { return p <= cfg.score_tol; }) &&
            m.povm.completeness_error() <= 1e-8;
        if (verified) {
            result.found = true;
            result.measurement = std::move(m);
        }
    }
    return result;
}

struct PovmEvidence {
    std::vector<OracleResult> per_k; ///< one entry per embedding tried, k = 0, 1, ...
    bool found() const { return !per_k.empty() && per_k.back().found; }
    const OracleResult& last() const { return per_k.back(); }
};

/// Runs the ODOP search for k = 0 .. cfg.extra_dims extra dimensions and stops
/// at the first hit. A hit at any k is a rank-one POVM ruling out every outcome.
inline PovmEvidence search_contradicting_povm_evidence(const StateEnsemble& ensemble,
                                                       const OracleConfig& cfg)
{
    cfg.validate();
    PovmEvidence ev;
    for (int k = 0; k <= cfg.extra_dims; ++k) {
        OracleConfig c = cfg;
        c.extra_dims = k;
        ev.per_k.push_back(search_contradicting_odop(ensemble, c));
        if (ev.per_k.back().found) {
            break;
        }
    }
    return ev;
}

} // namespace qsc
