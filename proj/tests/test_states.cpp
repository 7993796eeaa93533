#include "support.hpp"

using namespace qsc;
using namespace qsc::test;

namespace {

ErrorCode code_of(const std::function<void()>& f)
{
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "expected an error";
    return ErrorCode::ParseError;
}

} // namespace

TEST(Validate, MaximallyMixedQutrit)
{
    const DensityOperator rho = validate(Matrix::Identity(3, 3) / 3.0, "A");
    EXPECT_EQ(rho.rank(), 3);
    EXPECT_TRUE(rho.is_full_rank());
}

TEST(Validate, TraceNotOne)
{
    EXPECT_EQ(code_of([] { validate(diag({0.5, 0.6}), "A"); }), ErrorCode::TraceNotOne);
}

TEST(Validate, ClipsSubToleranceNegativeEigenvalue)
{
    const DensityOperator rho = validate(diag({1.0, -1e-12}), "A");
    EXPECT_EQ((rho.matrix() - diag({1.0, 0.0})).norm(), 0.0);
    EXPECT_TRUE(rho.is_pure());
}

TEST(Validate, RejectsNegativeAndNonHermitian)
{
    EXPECT_EQ(code_of([] { validate(diag({1.1, -0.1}), "A"); }), ErrorCode::NotPSD);
    Matrix m = diag({0.5, 0.5});
    m(0, 1) = 0.3;
    EXPECT_EQ(code_of([&] { validate(m, "A"); }), ErrorCode::NotHermitian);
}

TEST(Ensemble, Invariants)
{
    EXPECT_EQ(code_of([] { StateEnsemble(std::vector<DensityOperator>{}); }),
              ErrorCode::EmptyEnsemble);
    EXPECT_EQ(code_of([] {
                  make_ensemble({{"A", diag({1, 0})}, {"A", diag({0, 1})}});
              }),
              ErrorCode::DuplicateLabel);
    EXPECT_EQ(code_of([] {
                  make_ensemble({{"A", diag({1, 0})}, {"B", diag({0, 0, 1})}});
              }),
              ErrorCode::DimensionMismatch);
    const StateEnsemble e = threestates();
    ASSERT_NE(e.find("rho2"), nullptr);
    EXPECT_EQ(e.find("nobody"), nullptr);
}

TEST(Bloch, Examples)
{
    EXPECT_LE(to_bloch(Matrix(Matrix::Identity(2, 2) / 2.0)).n.norm(), 1e-15);
    EXPECT_LE((to_bloch(diag({1, 0})).n - Eigen::Vector3d(0, 0, 1)).norm(), 1e-15);
    // tr(rho sigma_x) for (1 + sigma_x)/2 is 1, the others vanish.
    Matrix plus(2, 2);
    plus << 0.5, 0.5, 0.5, 0.5;
    EXPECT_LE((to_bloch(plus).n - Eigen::Vector3d(1, 0, 0)).norm(), 1e-15);
}

TEST(Bloch, WrongDimension)
{
    EXPECT_EQ(code_of([] { to_bloch(Matrix(Matrix::Identity(3, 3) / 3.0)); }),
              ErrorCode::WrongDimension);
}

TEST(Bloch, RoundTripAndAffine)
{
    Rng rng = make_stream(21);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int t = 0; t < 500; ++t) {
        const Matrix r1 = random_density(2, 1 + t % 2, rng);
        const Matrix r2 = random_density(2, 1 + (t / 2) % 2, rng);
        const Eigen::Vector3d n1 = to_bloch(r1).n;
        const Eigen::Vector3d n2 = to_bloch(r2).n;
        EXPECT_LE((from_bloch(n1) - r1).norm(), 1e-12);
        EXPECT_LE(n1.norm(), 1.0 + 1e-9);
        const double l = unit(rng);
        const Matrix mix = l * r1 + (1 - l) * r2;
        EXPECT_LE((to_bloch(mix).n - (l * n1 + (1 - l) * n2)).norm(), 1e-12);
    }
}

TEST(Bloch, PureStatesHaveUnitLength)
{
    Rng rng = make_stream(22);
    for (int t = 0; t < 100; ++t) {
        EXPECT_TRUE(to_bloch(pure_state(random_unit_vector(2, rng))).is_pure());
    }
}

TEST(CommutingBasis, ThreeStatesGiveStandardBasis)
{
    const auto b = commuting_eigenbasis(threestates());
    ASSERT_TRUE(b.has_value());
    // Each column is a standard basis vector up to phase.
    for (Index k = 0; k < 3; ++k) {
        EXPECT_NEAR(b->col(k).cwiseAbs().maxCoeff(), 1.0, 1e-12);
    }
}

TEST(CommutingBasis, NonCommutingPair)
{
    const StateEnsemble e = ensemble({bloch_matrix(1, 0, 0), bloch_matrix(0, 0, 1)});
    EXPECT_FALSE(commuting_eigenbasis(e).has_value());
}

TEST(CommutingBasis, SingleStateAndRandomCommuting)
{
    Rng rng = make_stream(23);
    const Matrix rho = random_density(3, 3, rng);
    const auto b = commuting_eigenbasis(ensemble({rho}));
    ASSERT_TRUE(b.has_value());
    const Matrix d = b->adjoint() * rho * *b;
    EXPECT_LE((d - Matrix(d.diagonal().asDiagonal())).norm(), 1e-10);

    for (int t = 0; t < 50; ++t) {
        const Index dim = 2 + t % 3;
        const Matrix u = haar_unitary(dim, rng);
        std::vector<Matrix> ms;
        std::uniform_int_distribution<int> pick(0, 2);
        for (int k = 0; k < 3; ++k) {
            RealVector w(dim);
            for (Index i = 0; i < dim; ++i) {
                w(i) = pick(rng) == 0 ? 0.0 : 1.0; // degenerate spectra on purpose
            }
            if (w.sum() == 0.0) {
                w(0) = 1.0;
            }
            w /= w.sum();
            ms.push_back(u * w.cast<Complex>().asDiagonal() * u.adjoint());
        }
        const StateEnsemble e = ensemble(ms);
        const auto basis = commuting_eigenbasis(e);
        ASSERT_TRUE(basis.has_value());
        EXPECT_TRUE(is_unitary(*basis, 1e-10));
        for (const auto& s : e) {
            const Matrix dd = basis->adjoint() * s.matrix() * *basis;
            EXPECT_LE((dd - Matrix(dd.diagonal().asDiagonal())).norm(), 1e-9);
        }
    }
}

TEST(Classical, Validate)
{
    ClassicalAssignment a{2, {{"A", {0.5, 0.5}}, {"B", {1.0, 0.0}}}};
    EXPECT_NO_THROW(a.validate());
    a.parties[1].probs = {0.7, 0.2};
    EXPECT_EQ(code_of([&] { a.validate(); }), ErrorCode::InvalidProbabilities);
    a.parties[1].probs = {1.2, -0.2};
    EXPECT_EQ(code_of([&] { a.validate(); }), ErrorCode::InvalidProbabilities);
}

TEST(FileFormat, RoundTripIsIdentity)
{
    Rng rng = make_stream(24);
    for (int t = 0; t < 100; ++t) {
        const StateEnsemble e = random_ensemble(2 + t % 3, 1 + t % 4, rng);
        const io::Json j = io::serialize_states(e);
        const StateEnsemble back = io::parse_states(io::parse_text(j.dump()));
        ASSERT_EQ(back.size(), e.size());
        for (std::size_t i = 0; i < e.size(); ++i) {
            EXPECT_EQ(back[i].label(), e[i].label());
            EXPECT_EQ((back[i].matrix() - e[i].matrix()).norm(), 0.0);
        }
        EXPECT_EQ(io::serialize_states(back).dump(), j.dump());
    }
}

TEST(FileFormat, RejectsUnknownKeysAndBadShapes)
{
    EXPECT_EQ(code_of([] {
                  io::parse_states(io::parse_text(R"({"dim":1,"states":[],"extra":0})"));
              }),
              ErrorCode::ParseError);
    EXPECT_EQ(code_of([] {
                  io::parse_states(io::parse_text(
                      R"({"dim":2,"states":[{"label":"A","matrix":[[[1,0],[0,0]]]}]})"));
              }),
              ErrorCode::NotSquare);
    EXPECT_EQ(code_of([] { io::parse_text("{not json"); }), ErrorCode::ParseError);
    EXPECT_EQ(code_of([] {
                  io::parse_classical(io::parse_text(R"({"outcomes":2,"parties":[],"x":1})"));
              }),
              ErrorCode::ParseError);
}

TEST(FileFormat, ClassicalRoundTrip)
{
    const ClassicalAssignment a{3, {{"A", {0.25, 0.25, 0.5}}, {"B", {0.0, 1.0, 0.0}}}};
    const io::Json j = io::serialize_classical(a);
    EXPECT_EQ(io::detect_kind(j), io::InputKind::Classical);
    const ClassicalAssignment back = io::parse_classical(io::parse_text(j.dump()));
    EXPECT_EQ(back.parties[0].probs, a.parties[0].probs);
    EXPECT_EQ(back.parties[1].label, "B");
}

TEST(FileFormat, SampleFilesParse)
{
    for (const char* name : {"threestates.json", "orthogonal_pair.json", "nonorthogonal_pair.json",
                             "trine.json", "single_state.json", "three_pure_02.json"}) {
        const std::string path = std::string(QSC_TEST_DATA) + "/" + name;
        EXPECT_NO_THROW(io::parse_states(io::parse_text(io::read_file(path)))) << name;
    }
}
