#include "support.hpp"

using namespace qsc;
using namespace qsc::test;

namespace {

std::vector<Eigen::VectorXd> vs(std::initializer_list<Eigen::Vector3d> xs)
{
    return {xs.begin(), xs.end()};
}

void expect_weights(const std::vector<double>& q, const std::vector<Eigen::VectorXd>& v)
{
    double sum = 0.0;
    Eigen::VectorXd total = Eigen::VectorXd::Zero(v.front().size());
    for (std::size_t i = 0; i < q.size(); ++i) {
        EXPECT_GE(q[i], 0.0);
        sum += q[i];
        total += q[i] * v[i];
    }
    EXPECT_NEAR(sum, 1.0, 1e-12);
    EXPECT_LE(total.norm(), 1e-9);
}

} // namespace

TEST(ZeroInHull, AntipodalPair)
{
    const auto v = vs({{1, 0, 0}, {-1, 0, 0}});
    const auto q = zero_in_hull(v);
    ASSERT_TRUE(q.has_value());
    EXPECT_NEAR((*q)[0], 0.5, 1e-12);
    EXPECT_NEAR((*q)[1], 0.5, 1e-12);
}

TEST(ZeroInHull, OrthogonalPairHasNone)
{
    EXPECT_FALSE(zero_in_hull(vs({{1, 0, 0}, {0, 1, 0}})).has_value());
    EXPECT_NEAR(hull_distance(vs({{1, 0, 0}, {0, 1, 0}})).distance, std::sqrt(0.5), 1e-12);
}

TEST(ZeroInHull, Trine)
{
    const double h = std::sqrt(3.0) / 2;
    const auto v = vs({{1, 0, 0}, {-0.5, h, 0}, {-0.5, -h, 0}});
    const auto q = zero_in_hull(v);
    ASSERT_TRUE(q.has_value());
    for (double x : *q) {
        EXPECT_NEAR(x, 1.0 / 3, 1e-12);
    }
    expect_weights(*q, v);
}

TEST(ZeroInHull, TwoDimensionalInput)
{
    std::vector<Eigen::VectorXd> v(3, Eigen::VectorXd(2));
    v[0] << 1, 0;
    v[1] << -1, 1;
    v[2] << -1, -1;
    const auto q = zero_in_hull(v);
    ASSERT_TRUE(q.has_value());
    expect_weights(*q, v);
}

TEST(QubitPovm, TrineIncompatible)
{
    const StateEnsemble e = trine();
    const Verdict v = check_qubit_pp_povm(e);
    ASSERT_TRUE(v.incompatible());
    const auto& m = std::get<witness::ContradictingMeasurement>(v.witness);
    EXPECT_LE(m.povm.completeness_error(), 1e-8);
    for (const auto& el : m.povm.elements) {
        EXPECT_NEAR(el.trace().real(), 2.0 / 3, 1e-12); // q = 1/3 each
    }
    expect_witness(e, v);
}

TEST(QubitPovm, NonorthogonalPairCompatible)
{
    Rng rng = make_stream(51);
    for (int t = 0; t < 200; ++t) {
        const Vector a = random_unit_vector(2, rng);
        const Vector b = random_unit_vector(2, rng);
        const StateEnsemble e = ensemble({proj(a), proj(b)});
        const Verdict v = check_qubit_pp_povm(e);
        EXPECT_TRUE(v.compatible());
        expect_witness(e, v);
    }
}

TEST(QubitPovm, Tetrahedron)
{
    const double s = 1.0 / std::sqrt(3.0);
    const StateEnsemble e = ensemble({bloch_matrix(s, s, s), bloch_matrix(s, -s, -s),
                                      bloch_matrix(-s, s, -s), bloch_matrix(-s, -s, s)});
    const Verdict v = check_qubit_pp_povm(e);
    ASSERT_TRUE(v.incompatible());
    const auto& m = std::get<witness::ContradictingMeasurement>(v.witness);
    ASSERT_EQ(m.povm.size(), 4u);
    for (const auto& el : m.povm.elements) {
        EXPECT_NEAR(el.trace().real(), 0.5, 1e-12); // q = 1/4 each
    }
    expect_witness(e, v);
}

TEST(QubitPovm, Errors)
{
    try {
        check_qubit_pp_povm(threestates());
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::WrongDimension);
    }
}

TEST(QubitPovm, PropertiesOnRandomPureSets)
{
    Rng rng = make_stream(52);
    int hits = 0;
    int hits_below_four = 0;
    for (int t = 0; t < 500; ++t) {
        std::vector<Matrix> ms;
        for (int k = 0; k < 2 + t % 4; ++k) {
            ms.push_back(proj(random_unit_vector(2, rng)));
        }
        const StateEnsemble e = ensemble(ms);
        const Verdict v = check_qubit_pp_povm(e);
        expect_witness(e, v);

        // Rotating every Bloch vector together keeps the verdict.
        const Matrix u = haar_unitary(2, rng);
        std::vector<Matrix> rotated;
        for (const auto& m : ms) {
            rotated.push_back(u * m * u.adjoint());
        }
        EXPECT_EQ(check_qubit_pp_povm(ensemble(rotated)).status, v.status);

        // So does adding a full-rank state.
        ms.push_back(random_density(2, 2, rng));
        EXPECT_EQ(check_qubit_pp_povm(ensemble(ms)).status, v.status);

        if (v.incompatible()) {
            ++hits;
            hits_below_four += ms.size() - 1 < 4;
            const auto& m = std::get<witness::ContradictingMeasurement>(v.witness);
            EXPECT_LE(m.povm.completeness_error(), 1e-8);
            for (std::size_t b = 0; b < m.povm.size(); ++b) {
                EXPECT_GE(hermitian_eigendecomposition(m.povm.elements[b]).values.minCoeff(), -1e-12);
                EXPECT_LE(e.find(m.contradicted[b])->probability(m.povm.elements[b]), 1e-9);
            }
        }
    }
    // Wendel: n uniform points on the sphere surround the origin with
    // probability 1 - (n^2 - n + 2) / 2^n, i.e. 0, 0, 1/8, 5/16 for n = 2..5.
    // 125 sets of each size give 54.7 expected hits, standard deviation 6.4.
    EXPECT_EQ(hits_below_four, 0);
    EXPECT_NEAR(hits, 54.7, 26.0);
}

TEST(QubitPovm, OdopAndPovmDiffer)
{
    const StateEnsemble e = trine();
    const PpVerdicts v = check_pp(e);
    EXPECT_TRUE(v.odop.compatible());
    EXPECT_TRUE(v.povm.incompatible());
    expect_witness(e, v.odop);
    expect_witness(e, v.povm);
}
