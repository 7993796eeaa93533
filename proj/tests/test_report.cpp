#include "support.hpp"

using namespace qsc;
using namespace qsc::test;

namespace {

Verdict round_trip(const Verdict& v, const StateEnsemble* e)
{
    return report::verdict_from_json(io::parse_text(report::verdict_to_json(v, e).dump()));
}

} // namespace

TEST(ExitCode, Contract)
{
    Verdict c{Criterion::ES, Status::Compatible};
    Verdict i{Criterion::BFM, Status::Incompatible};
    Verdict u{Criterion::PP_POVM, Status::Undecided};
    EXPECT_EQ(report::exit_code(std::vector<Verdict>{c, c}), 0);
    EXPECT_EQ(report::exit_code(std::vector<Verdict>{c, u}), 2);
    EXPECT_EQ(report::exit_code(std::vector<Verdict>{u, i, c}), 1);
}

TEST(RoundTrip, QuantumVerdictsReverify)
{
    Rng rng = make_stream(81);
    for (int t = 0; t < 60; ++t) {
        const StateEnsemble e = random_ensemble(2 + t % 3, 1 + t % 3, rng);
        const StateEnsemble back = io::parse_states(io::parse_text(io::serialize_states(e).dump()));
        for (const auto& v : run_check(e, Selection::ALL, {}, std::uint64_t(t))) {
            const Verdict r = round_trip(v, &e);
            EXPECT_EQ(r.criterion, v.criterion);
            EXPECT_EQ(r.status, v.status);
            EXPECT_EQ(r.boundary, v.boundary);
            EXPECT_EQ(r.note, v.note);
            EXPECT_EQ(witness_kind(r.witness), witness_kind(v.witness));
            if (std::isfinite(v.margin)) {
                EXPECT_EQ(r.margin, v.margin);
            }
            expect_witness(back, r);
        }
    }
}

TEST(RoundTrip, NamedExamples)
{
    for (const StateEnsemble& e : {threestates(), trine()}) {
        for (const auto& v : run_check(e, Selection::ALL)) {
            expect_witness(e, round_trip(v, &e));
        }
    }
}

TEST(RoundTrip, ClassicalVerdicts)
{
    const ClassicalAssignment a{6, {{"A", {0, 0.5, 0.5, 0, 0, 0}},
                                    {"B", {0, 0, 0.5, 0.5, 0, 0}},
                                    {"C", {0.5, 0, 0, 0, 0, 0.5}}}};
    for (const auto& v : run_check(a, Selection::ALL)) {
        const Verdict r = round_trip(v, nullptr);
        EXPECT_EQ(r.status, v.status);
        expect_witness(a, r);
    }
}

TEST(RoundTrip, MeasurementProbabilities)
{
    const StateEnsemble e = trine();
    const Verdict v = check_qubit_pp_povm(e);
    const io::Json j = io::parse_text(report::verdict_to_json(v, &e).dump());
    const auto& table = j.at("witness").at("probabilities");
    const Povm p = std::get<witness::ContradictingMeasurement>(report::verdict_from_json(j).witness).povm;
    ASSERT_EQ(table.size(), e.size());
    for (std::size_t s = 0; s < e.size(); ++s) {
        for (std::size_t b = 0; b < p.size(); ++b) {
            EXPECT_NEAR(table[s].at("probs")[b].get<double>(), e[s].probability(p.elements[b]), 1e-10);
        }
    }
}

TEST(CheckReport, Schema)
{
    const StateEnsemble e = threestates();
    report::CheckReport r{report::InputDigest::of("x.json", "abc"), {}, io::serialize_states(e),
                          run_check(e, Selection::ALL)};
    const io::Json j = report::to_json(r, &e);
    EXPECT_EQ(j.at("schema"), report::kSchema);
    EXPECT_EQ(j.at("exit_code"), 1);
    EXPECT_EQ(j.at("input").at("fnv1a64"), io::hex64(io::fnv1a64("abc")));
    EXPECT_NE(report::to_text(r, &e, true).find("exit code: 1"), std::string::npos);
}

TEST(OracleReport, EvidenceOnlyWording)
{
    const StateEnsemble e = make_ensemble({{"A", diag({1, 0})}, {"B", Matrix(Matrix::Constant(2, 2, 0.5))}});
    OracleConfig cfg;
    cfg.trials = 50;
    cfg.threads = 1;
    report::OracleReport r{report::InputDigest::of("p.json", ""), cfg,
                           search_contradicting_povm_evidence(e, cfg)};
    EXPECT_EQ(report::exit_code(r), 0);
    EXPECT_EQ(report::to_json(r, e).at("conclusion"), report::kEvidenceOnly);
    EXPECT_NE(report::to_text(r).find(report::kEvidenceOnly), std::string::npos);
}

TEST(DutchbookReport, ExitCodes)
{
    io::DutchbookInput in;
    in.exclusive.push_back({"ok", {0.5, 0.3, 0.8}});
    EXPECT_EQ(report::exit_code(report::evaluate_dutchbook(in)), 0);
    in.exclusive.push_back({"bad", {0.5, 0.3, 0.9}});
    const auto r = report::evaluate_dutchbook(in);
    EXPECT_EQ(report::exit_code(r), 1);
    EXPECT_TRUE(r.pairs[1].book.has_value());
    EXPECT_NO_THROW(report::to_json(r).dump());
}

TEST(DutchbookReport, UnmatchedDeclaration)
{
    io::DutchbookInput in;
    in.distributions.push_back({"coin", {0.5, 0.5}});
    EXPECT_THROW(report::evaluate_dutchbook(in, {{"die", {{true, true}}}}), Error);
    const auto r = report::evaluate_dutchbook(in, {{"coin", {{true, false}}}});
    EXPECT_EQ(report::exit_code(r), 1);
}
