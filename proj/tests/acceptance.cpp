// Acceptance gate: prints one PASS/FAIL line per criterion and exits nonzero
// when any criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

#include "qsc/qsc.hpp"

using namespace qsc;

namespace {

struct Tally {
    long checked = 0;
    long failed = 0;
    std::string first_failure;

    void record(const WitnessCheck& c, const std::string& where)
    {
        ++checked;
        if (!c.ok) {
            if (failed++ == 0) {
                first_failure = where + ": " + c.reason;
            }
        }
    }
};

Tally g_witnesses;

void verify(const StateEnsemble& e, const Verdict& v, const std::string& where)
{
    g_witnesses.record(verify_witness(e, v), where + " " + std::string(to_string(v.criterion)));
}

void verify(const ClassicalAssignment& a, const Verdict& v, const std::string& where)
{
    g_witnesses.record(verify_witness(a, v), where + " " + std::string(to_string(v.criterion)));
}

void verify_book(const Eigen::Matrix3d& g, const dutchbook::BetBook& b, const std::string& where)
{
    const Eigen::Vector3d gains = g * b.payoffs;
    const bool ok = (gains - b.gains).cwiseAbs().maxCoeff() <= 1e-12 && gains.maxCoeff() <= -1.0 + 1e-9;
    g_witnesses.record({ok, ok ? "" : "gains not all <= -1+1e-9"}, where);
}

StateEnsemble ensemble_of(const std::vector<Matrix>& ms)
{
    std::vector<std::pair<std::string, Matrix>> raw;
    for (std::size_t i = 0; i < ms.size(); ++i) {
        raw.emplace_back("P" + std::to_string(i + 1), ms[i]);
    }
    return make_ensemble(raw);
}

StateEnsemble random_ensemble(Index d, std::size_t n, Rng& rng)
{
    std::uniform_int_distribution<int> rank(1, int(d));
    std::vector<Matrix> ms;
    for (std::size_t i = 0; i < n; ++i) {
        ms.push_back(random_density(d, rank(rng), rng));
    }
    return ensemble_of(ms);
}

Matrix basis_state(Index d, Index k)
{
    Vector v = Vector::Zero(d);
    v(k) = 1.0;
    return pure_state(v);
}

struct Outcome {
    bool pass = true;
    std::string detail;
};

Outcome fail(std::string why) { return {false, std::move(why)}; }

// ---------------------------------------------------------------------------

Outcome ac1()
{
    int compared = 0;
    int skipped = 0;
    int incompatible = 0;
    int disagreements = 0;
    std::string first;
    for (int i = 0; compared + skipped < 1000; ++i) {
        Rng rng = make_stream(2026, std::uint64_t(i), 0xac1);
        const StateEnsemble e = ensemble_of({pure_state(random_unit_vector(3, rng)),
                                             pure_state(random_unit_vector(3, rng)),
                                             pure_state(random_unit_vector(3, rng))});
        const pp3::Case kase = pp3::classify(e);
        const auto* tp = std::get_if<pp3::ThreePure>(&kase);
        if (!tp) {
            return fail("triple " + std::to_string(i) + " not classified as three pure");
        }
        const Verdict closed = pp3::check_three_pure(*tp);
        if (std::abs(closed.margin) < 1e-6) {
            ++skipped;
            continue;
        }
        ++compared;
        verify(e, closed, "AC1");

        OracleConfig cfg;
        cfg.trials = 10000;
        cfg.refine_steps = 200;
        cfg.seed = std::uint64_t(i);
        cfg.threads = 1;
        const OracleResult r = search_contradicting_odop(e, cfg);
        if (r.found) {
            const auto& m = *r.measurement;
            g_witnesses.record(verify_measurement(e, {m.povm, true, m.contradicted}), "AC1 oracle");
        }
        incompatible += closed.incompatible();
        if (r.found != closed.incompatible()) {
            if (disagreements++ == 0) {
                first = "triple " + std::to_string(i) + " margin " + std::to_string(closed.margin);
            }
        }
    }
    const std::string d = std::to_string(compared) + " triples, " + std::to_string(incompatible) +
                          " incompatible, " + std::to_string(skipped) + " near boundary skipped, " +
                          std::to_string(disagreements) + " disagreements";
    if (disagreements > 0) {
        return fail(d + "; first " + first);
    }
    return {true, d};
}

Outcome ac2()
{
    const int n = 50;
    long compared = 0;
    long disagreements = 0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            for (int k = 0; k < n; ++k) {
                const auto at = [&](int q) { return 0.02 + 0.96 * q / (n - 1); };
                const pp3::InnerProductTriple t{at(i), at(j), at(k)};
                const double m = pp3::three_pure_margin(t);
                if (std::abs(m) < 1e-9) {
                    continue;
                }
                ++compared;
                const bool peierls = m > 0;
                disagreements += (peierls != pp3::ellipse_condition(t)) +
                                 (peierls != pp3::solve_angles(t).has_value());
            }
        }
    }
    const std::string d = std::to_string(compared) + " grid points, " +
                          std::to_string(disagreements) + " disagreements";
    return {disagreements == 0, d};
}

Outcome ac3()
{
    const double c = 0.25;
    const int res = 400;
    const pp3::Region r = pp3::figure1_region(c, res);
    if (r.cells.size() != std::size_t(res) * res) {
        return fail("region has " + std::to_string(r.cells.size()) + " cells");
    }
    long inside = 0;
    long misplaced = 0;
    for (const auto& cell : r.cells) {
        const double u = cell.a + cell.b - 1.0;
        const double v = cell.a - cell.b;
        const double q = u * u / c + v * v / (1.0 - c);
        const bool between = cell.a + cell.b < 1.0 - c && q > 1.0;
        if (std::abs(pp3::three_pure_margin({cell.a, cell.b, c})) < 1e-9) {
            continue;
        }
        inside += cell.incompatible;
        misplaced += cell.incompatible != between;
    }
    double to_a = std::numeric_limits<double>::infinity();
    double to_b = to_a;
    double lowest = to_a;
    for (const auto& p : r.ellipse) {
        to_a = std::min(to_a, std::hypot(p[0] - (1.0 - c), p[1]));
        to_b = std::min(to_b, std::hypot(p[0], p[1] - (1.0 - c)));
        lowest = std::min({lowest, p[0], p[1]});
    }
    const double h = 1.0 / res;
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "%ld incompatible cells, %ld outside ellipse/axes corner; a-axis hit %.2e from "
                  "0.75, b-axis hit %.2e from 0.75, min coordinate %.2e",
                  inside, misplaced, to_a, to_b, lowest);
    const bool ok = inside > 0 && misplaced == 0 && to_a <= h && to_b <= h && lowest >= -h;
    return {ok, buf};
}

Outcome ac4()
{
    Rng rng = make_stream(2026, 4, 0xac4);
    long broken = 0;
    std::string first;
    const auto note = [&](bool ok, const std::string& what) {
        if (!ok && broken++ == 0) {
            first = what;
        }
    };
    for (int t = 0; t < 2000; ++t) {
        const Index d = 2 + t % 2;
        const std::size_t n = 1 + std::size_t(t / 2) % 3;
        const StateEnsemble e = random_ensemble(d, n, rng);
        const Verdict es = check_es(e);
        const Verdict bfm = check_bfm(e);
        const PpVerdicts pp = check_pp(e);
        const Verdict w = check_w(e, std::uint64_t(t));
        const Verdict wp = check_w_prime(e, std::uint64_t(t));
        const std::string tag = "quantum " + std::to_string(t);
        note(!es.compatible() || bfm.compatible(), tag + " ES=>BFM");
        note(!bfm.compatible() || !pp.odop.incompatible(), tag + " BFM=>PP-ODOP");
        note(!bfm.compatible() || !pp.povm.incompatible(), tag + " BFM=>PP-POVM");
        note(!pp.povm.compatible() || pp.odop.compatible(), tag + " PP-POVM=>PP-ODOP");
        note(wp.compatible() && w.compatible(), tag + " W and W'");
        for (const auto* v : {&es, &bfm, &pp.odop, &pp.povm, &w, &wp}) {
            verify(e, *v, "AC4 " + tag);
        }
    }

    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int t = 0; t < 2000; ++t) {
        const std::size_t k = 1 + std::size_t(t) % 6;
        ClassicalAssignment a{k, {}};
        for (std::size_t p = 0; p < 1 + std::size_t(t / 6) % 4; ++p) {
            std::vector<double> probs(k);
            double s = 0.0;
            for (auto& x : probs) {
                x = unit(rng) < 0.35 ? 0.0 : unit(rng);
                s += x;
            }
            if (s == 0.0) {
                probs[0] = s = 1.0;
            }
            for (auto& x : probs) {
                x /= s;
            }
            a.parties.push_back({"P" + std::to_string(p + 1), probs});
        }
        const std::vector<Verdict> v = check_classical(a); // ES, BFM, PP, W, W'
        const std::string tag = "classical " + std::to_string(t);
        note(v[3].status == v[0].status, tag + " W<=>ES");
        note(!v[0].compatible() || v[1].compatible(), tag + " ES=>BFM");
        note(v[1].status == v[2].status, tag + " BFM<=>PP");
        note(v[2].status == v[4].status, tag + " PP<=>W'");
        for (const auto& x : v) {
            verify(a, x, "AC4 " + tag);
        }
    }
    const std::string d = "2000 quantum + 2000 classical, " + std::to_string(broken) + " counterexamples";
    return {broken == 0, broken ? d + "; first " + first : d};
}

Outcome ac5()
{
    std::vector<std::string> bad;
    const auto expect = [&](bool ok, const std::string& what) {
        if (!ok) {
            bad.push_back(what);
        }
    };

    const StateEnsemble three = make_ensemble({{"rho1", Matrix(Eigen::Vector3d(0, 0.5, 0.5).cast<Complex>().asDiagonal())},
                                               {"rho2", Matrix(Eigen::Vector3d(0.5, 0, 0.5).cast<Complex>().asDiagonal())},
                                               {"rho3", Matrix(Eigen::Vector3d(0.5, 0.5, 0).cast<Complex>().asDiagonal())}});
    const Verdict pw = check_pairwise_pp(three);
    const PpVerdicts pp = check_pp(three);
    const Verdict bfm = check_bfm(three);
    expect(pw.compatible(), "threestates pairwise PP");
    expect(pp.odop.incompatible() && pp.povm.incompatible(), "threestates PP");
    expect(bfm.incompatible(), "threestates BFM");
    for (const auto* v : {&pw, &pp.odop, &pp.povm, &bfm}) {
        verify(three, *v, "AC5 threestates");
    }

    Vector plus(2);
    plus << 1.0, 1.0;
    const StateEnsemble nonorth = ensemble_of({basis_state(2, 0), pure_state(plus)});
    const PpVerdicts npp = check_pp(nonorth);
    const Verdict nbfm = check_bfm(nonorth);
    expect(npp.odop.compatible() && npp.povm.compatible(), "nonorthogonal pair PP");
    expect(nbfm.incompatible(), "nonorthogonal pair BFM");
    for (const auto* v : {&npp.odop, &npp.povm, &nbfm}) {
        verify(nonorth, *v, "AC5 nonorthogonal");
    }

    const StateEnsemble orth = ensemble_of({basis_state(2, 0), basis_state(2, 1)});
    const PpVerdicts opp = check_pp(orth);
    const Verdict owp = check_w_prime(orth);
    expect(opp.odop.incompatible() && opp.povm.incompatible(), "orthogonal pair PP");
    expect(owp.compatible() && std::holds_alternative<witness::WBasis>(owp.witness),
           "orthogonal pair W' basis");
    for (const auto* v : {&opp.odop, &opp.povm, &owp}) {
        verify(orth, *v, "AC5 orthogonal");
    }

    std::string d = "threestates, nonorthogonal pair, orthogonal pair";
    for (const auto& b : bad) {
        d += "; wrong: " + b;
    }
    return {bad.empty(), d};
}

Outcome ac6()
{
    std::vector<Matrix> ms;
    for (int k = 0; k < 3; ++k) {
        const double t = 2.0 * M_PI * k / 3.0;
        ms.push_back(from_bloch(Eigen::Vector3d(std::sin(t), 0.0, std::cos(t))));
    }
    const StateEnsemble trine = ensemble_of(ms);
    const Verdict povm = check_qubit_pp_povm(trine);
    verify(trine, povm, "AC6 trine");
    double completeness = std::numeric_limits<double>::infinity();
    if (const auto* m = std::get_if<witness::ContradictingMeasurement>(&povm.witness)) {
        completeness = m->povm.completeness_error();
    }
    const PpVerdicts pp = check_pp(trine);
    verify(trine, pp.odop, "AC6 trine");
    verify(trine, pp.povm, "AC6 trine");

    Rng rng = make_stream(2026, 6, 0xac6);
    int pairs_ok = 0;
    for (int t = 0; t < 1000; ++t) {
        const StateEnsemble e = ensemble_of({pure_state(random_unit_vector(2, rng)),
                                             pure_state(random_unit_vector(2, rng))});
        const Verdict v = check_qubit_pp_povm(e);
        verify(e, v, "AC6 pair");
        pairs_ok += v.compatible();
    }

    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "trine POVM %s (completeness residual %.1e), %d/1000 nonorthogonal pairs compatible, "
                  "trine ODOP %s vs POVM %s",
                  std::string(to_string(povm.status)).c_str(), completeness, pairs_ok,
                  std::string(to_string(pp.odop.status)).c_str(),
                  std::string(to_string(pp.povm.status)).c_str());
    const bool ok = povm.incompatible() && completeness <= 1e-8 && pairs_ok == 1000 &&
                    pp.odop.compatible() && pp.povm.incompatible();
    return {ok, buf};
}

Outcome ac7()
{
    Rng rng = make_stream(2026, 7, 0xac7);
    const Tolerances tol;
    int built = 0;
    double worst = std::numeric_limits<double>::infinity();
    std::string first;
    for (int t = 0; t < 500; ++t) {
        const Index d = 2 + t % 3;
        const std::size_t n = 1 + std::size_t(t / 3) % 4;
        const StateEnsemble e = random_ensemble(d, n, rng);
        try {
            const WConstruction w = construct_w_basis(e, std::uint64_t(t), tol);
            double least = std::numeric_limits<double>::infinity();
            for (const auto& s : e) {
                for (Index k = 0; k < d; ++k) {
                    least = std::min(least, s.probability(Vector(w.basis.col(k))));
                }
            }
            worst = std::min(worst, least);
            built += least > tol.zero && is_unitary(w.basis, 1e-10);
            verify(e, check_w(e, std::uint64_t(t), tol), "AC7");
        } catch (const Error& err) {
            if (first.empty()) {
                first = "ensemble " + std::to_string(t) + ": " + err.what();
            }
        }
    }
    char buf[256];
    std::snprintf(buf, sizeof buf, "%d/500 bases built, least probability %.3e", built, worst);
    return {built == 500, first.empty() ? buf : std::string(buf) + "; " + first};
}

Outcome ac8()
{
    using namespace dutchbook;
    const int n = 100;
    long excl_needed = 0, excl_missing = 0, excl_spurious = 0;
    long cond_needed = 0, cond_missing = 0, cond_spurious = 0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            for (int k = 0; k < n; ++k) {
                const double x = double(i) / (n - 1);
                const double y = double(j) / (n - 1);
                const double z = double(k) / (n - 1);

                const ExclusivePairAssignment ea{x, y, z};
                const auto eb = dutch_book_exclusive(ea);
                if (std::abs(x + y - z) > 1e-6) {
                    ++excl_needed;
                    if (eb) {
                        verify_book(gain_matrix(ea), *eb, "AC8 exclusive");
                    } else {
                        ++excl_missing;
                    }
                } else if (std::abs(x + y - z) <= 1e-12 && eb) {
                    ++excl_spurious;
                }

                const ConditionalAssignment ca{x, y, z};
                const auto cb = dutch_book_conditional(ca);
                if (std::abs(y - z * x) > 1e-6) {
                    ++cond_needed;
                    if (cb) {
                        verify_book(gain_matrix(ca), *cb, "AC8 conditional");
                    } else {
                        ++cond_missing;
                    }
                } else if (std::abs(y - z * x) <= 1e-12 && cb) {
                    ++cond_spurious;
                }
            }
        }
    }

    Rng rng = make_stream(2026, 8, 0xac8);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> pay(-10.0, 10.0);
    double kemeny = 0.0;
    for (int t = 0; t < 1000; ++t) {
        const Eigen::Vector3d x(pay(rng), pay(rng), pay(rng));
        const double pe = unit(rng);
        const double pf = (1.0 - pe) * unit(rng);
        kemeny = std::max(kemeny, std::abs(kemeny_expected_gain(ExclusivePairAssignment{pe, pf, pe + pf}, x)));
        const double f = unit(rng);
        const double g = unit(rng);
        kemeny = std::max(kemeny, std::abs(kemeny_expected_gain(ConditionalAssignment{f, g * f, g}, x)));
    }

    char buf[320];
    std::snprintf(buf, sizeof buf,
                  "exclusive %ld/%ld witnessed, conditional %ld/%ld witnessed, %ld spurious, "
                  "max |Kemeny gain| %.1e",
                  excl_needed - excl_missing, excl_needed, cond_needed - cond_missing, cond_needed,
                  excl_spurious + cond_spurious, kemeny);
    const bool ok = excl_missing == 0 && cond_missing == 0 && excl_spurious + cond_spurious == 0 &&
                    kemeny <= 1e-10;
    return {ok, buf};
}

Outcome ac9()
{
    const std::string d = std::to_string(g_witnesses.checked - g_witnesses.failed) + "/" +
                          std::to_string(g_witnesses.checked) + " witnesses re-verified";
    if (g_witnesses.checked == 0) {
        return fail("no witnesses checked");
    }
    if (g_witnesses.failed > 0) {
        return fail(d + "; first failure " + g_witnesses.first_failure);
    }
    return {true, d};
}

} // namespace

int main()
{
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
        {"AC1", ac1}, {"AC2", ac2}, {"AC3", ac3}, {"AC4", ac4}, {"AC5", ac5},
        {"AC6", ac6}, {"AC7", ac7}, {"AC8", ac8}, {"AC9", ac9}};
    int failures = 0;
    for (const auto& [name, run] : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o = fail(std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("%s %s  %s  (%.1fs)\n", name, o.pass ? "PASS" : "FAIL", o.detail.c_str(), secs);
        std::fflush(stdout);
        failures += !o.pass;
    }
    return failures == 0 ? 0 : 1;
}
