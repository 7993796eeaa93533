#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "qsc/qsc.hpp"

namespace {

using namespace qsc;

constexpr int kErrorExit = 3;

void emit(const std::string& text, const std::string& output)
{
    if (output.empty()) {
        std::cout << text;
    } else {
        write_atomically(output, text);
    }
}

Tolerances tolerances_for(std::optional<double> t)
{
    Tolerances tol = t ? Tolerances::uniform(*t) : Tolerances{};
    tol.validate();
    return tol;
}

struct CheckFlags {
    std::string input;
    std::string criterion = "all";
    std::optional<double> tolerance;
    bool witness = false;
    std::string format = "text";
    std::uint64_t seed = 0;
    std::string output;
};

int cmd_check(const CheckFlags& f)
{
    const Tolerances tol = tolerances_for(f.tolerance);
    const Selection sel = selection_from_string(f.criterion);
    const std::string bytes = io::read_file(f.input);
    const io::Json j = io::parse_text(bytes, f.input);

    report::CheckReport r{report::InputDigest::of(f.input, bytes), tol, {}, {}};
    std::optional<StateEnsemble> ensemble;
    if (io::detect_kind(j) == io::InputKind::Quantum) {
        ensemble = io::parse_states(j, tol);
        r.serialized_input = io::serialize_states(*ensemble);
        r.verdicts = run_check(*ensemble, sel, tol, f.seed);
    } else {
        const ClassicalAssignment a = io::parse_classical(j);
        r.serialized_input = io::serialize_classical(a);
        r.verdicts = run_check(a, sel, tol);
    }
    const StateEnsemble* e = ensemble ? &*ensemble : nullptr;
    emit(f.format == "json" ? report::dump(report::to_json(r, e)) : report::to_text(r, e, f.witness),
         f.output);
    return report::exit_code(r.verdicts);
}

struct OracleFlags {
    std::string input;
    OracleConfig cfg = [] {
        OracleConfig c;
        c.extra_dims = 3; // k = 0..3 unless asked otherwise
        return c;
    }();
    std::string format = "json";
    std::string output;
};

int cmd_oracle(const OracleFlags& f)
{
    const std::string bytes = io::read_file(f.input);
    const StateEnsemble ensemble = io::parse_states(io::parse_text(bytes, f.input));
    report::OracleReport r{report::InputDigest::of(f.input, bytes), f.cfg,
                           search_contradicting_povm_evidence(ensemble, f.cfg)};
    emit(f.format == "json" ? report::dump(report::to_json(r, ensemble)) : report::to_text(r),
         f.output);
    return report::exit_code(r);
}

struct Figure1Flags {
    double c = 0.25;
    int resolution = 200;
    std::string out;
};

int cmd_figure1(const Figure1Flags& f)
{
    const pp3::Region region = pp3::figure1_region(f.c, f.resolution);
    pp3::write_region(region, f.out);
    std::size_t hits = 0;
    for (const auto& cell : region.cells) {
        hits += cell.incompatible ? 1 : 0;
    }
    std::cout << "wrote " << f.out << "_region.csv (" << region.cells.size() << " cells, " << hits
              << " incompatible) and " << f.out << "_ellipse.csv (" << region.ellipse.size()
              << " points)\n";
    return 0;
}

struct DutchbookFlags {
    std::string input;
    std::string possible;
    std::string format = "text";
    std::string output;
};

int cmd_dutchbook(const DutchbookFlags& f)
{
    const std::string bytes = io::read_file(f.input);
    const io::DutchbookInput in = io::parse_dutchbook(io::parse_text(bytes, f.input));
    std::map<std::string, dutchbook::PossibilityDeclaration> decl;
    std::optional<report::InputDigest> pdigest;
    if (!f.possible.empty()) {
        const std::string pbytes = io::read_file(f.possible);
        decl = io::parse_possibility(io::parse_text(pbytes, f.possible));
        pdigest = report::InputDigest::of(f.possible, pbytes);
    }
    report::DutchbookReport r = report::evaluate_dutchbook(in, decl);
    r.input = report::InputDigest::of(f.input, bytes);
    r.possibility = pdigest;
    emit(f.format == "json" ? report::dump(report::to_json(r)) : report::to_text(r), f.output);
    return report::exit_code(r);
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Compatibility checks for quantum state assignments"};
    app.require_subcommand(1);

    CheckFlags check;
    auto* c = app.add_subcommand("check", "Run compatibility criteria on a state file");
    c->add_option("--input", check.input, "State or classical probability file")->required();
    c->add_option("--criterion", check.criterion)
        ->check(CLI::IsMember({"es", "bfm", "pp", "pairwise-pp", "w", "all"}));
    c->add_option("--tolerance", check.tolerance, "Sets the rank, orth and zero tolerances");
    c->add_flag("--witness", check.witness, "Print witnesses in text output");
    c->add_option("--format", check.format)->check(CLI::IsMember({"text", "json"}));
    c->add_option("--seed", check.seed);
    c->add_option("--output", check.output, "Write the report here instead of stdout");

    OracleFlags oracle;
    auto* o = app.add_subcommand("oracle", "Randomized search for a contradicting measurement");
    o->add_option("--input", oracle.input)->required();
    o->add_option("--trials", oracle.cfg.trials);
    o->add_option("--seed", oracle.cfg.seed);
    o->add_option("--extra-dims", oracle.cfg.extra_dims, "Largest embedding k to try, default 3");
    o->add_option("--refine-steps", oracle.cfg.refine_steps);
    o->add_option("--score-tol", oracle.cfg.score_tol);
    o->add_option("--threads", oracle.cfg.threads, "Worker threads, 0 = all cores");
    o->add_option("--format", oracle.format)->check(CLI::IsMember({"text", "json"}));
    o->add_option("--output", oracle.output);

    Figure1Flags fig;
    auto* g = app.add_subcommand("figure1", "Write the three-pure-state region at fixed c");
    g->add_option("--c", fig.c);
    g->add_option("--resolution", fig.resolution);
    g->add_option("--out", fig.out, "Output prefix")->required();

    DutchbookFlags db;
    auto* d = app.add_subcommand("dutchbook", "Look for sure-loss books against betting records");
    d->add_option("--input", db.input)->required();
    d->add_option("--possible", db.possible, "Possibility declarations");
    d->add_option("--format", db.format)->check(CLI::IsMember({"text", "json"}));
    d->add_option("--output", db.output);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kErrorExit;
    }

    try {
        if (*c) {
            return cmd_check(check);
        }
        if (*o) {
            return cmd_oracle(oracle);
        }
        if (*g) {
            return cmd_figure1(fig);
        }
        return cmd_dutchbook(db);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kErrorExit + (e.code() == ErrorCode::ParseError ? 1 : 0);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kErrorExit + 2;
    }
}
