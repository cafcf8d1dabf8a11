#include "atomec/cli.hpp"

#include "atomec/audit.hpp"
#include "atomec/errors.hpp"
#include "atomec/recoding.hpp"
#include "atomec/scalarmul.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>

namespace atomec {

namespace {

struct MulOptions {
    std::string curve = "p192";
    std::string k, x, y;
    std::string strategy = "rtl-p4";
    unsigned window = 0;
    std::string cm = "none";
    std::uint64_t seed = 1;
    std::string trace_out;
};

struct AuditOptions {
    std::string trace;
    std::string pattern;
};

struct TablesOptions {
    double a_over_m = 0.2;
    unsigned bits = 0;
    std::vector<double> s_over_m{0.8, 1.0};
    std::string out_dir = ".";
    bool no_write = false;
};

struct RecodeOptions {
    std::string k;
    unsigned window = 0;
    bool rtl = false;
};

struct CatalogOptions {
    std::string curve = "p192";
    std::size_t trials = 1000;
    std::uint64_t seed = 1;
    bool print = false;
};

void write_file(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream f(path);
    if (!f || !(f << text))
        throw ValidationError("cannot write '" + path.string() + "'");
}

void print_census(std::ostream& out, const char* label, const OpTrace& t, bool all)
{
    out << label;
    for (auto op : {FieldOp::Mul, FieldOp::Sqr, FieldOp::Add, FieldOp::Sub, FieldOp::Neg, FieldOp::Inv})
        out << ' ' << mnemonic(op) << '=' << t.count(op, all);
    out << '\n';
}

int cmd_mul(const MulOptions& o, std::ostream& out)
{
    const CurveParams c = resolve_curve(o.curve);
    MulStrategy s = parse_strategy(o.strategy);
    s.window = o.window;
    parse_countermeasure(o.cm, s.countermeasure);
    const BigInt k = parse_hex(o.k);

    AffinePoint P;
    if (o.x.empty() && o.y.empty()) {
        if (!c.g)
            throw ValidationError("curve '" + c.name + "' has no base point; pass --x and --y");
        P = *c.g;
    } else {
        P = make_affine(c, parse_hex(o.x), parse_hex(o.y));
    }

    RandomSource rng(o.seed);
    OpRecorder rec;
    const AffinePoint R = scalar_mul(k, P, s, c, rng, &rec);
    const OpTrace& t = rec.trace();

    out << "curve " << c.name << '\n';
    out << "strategy " << s.name() << " window " << s.window << " countermeasure "
        << countermeasure_name(s.countermeasure) << '\n';
    if (R.infinity) {
        out << "result O\n";
    } else {
        out << "x 0x" << to_hex(R.x.value()) << '\n';
        out << "y 0x" << to_hex(R.y.value()) << '\n';
    }
    print_census(out, "census-protected", t, false);
    print_census(out, "census-total", t, true);
    if (s.pattern) {
        const auto rep = verify_uniformity(t, *s.pattern);
        out << "patterns " << rep.pattern_count << ' ' << pattern_name(*s.pattern) << '\n';
        out << "uniform " << (rep.uniform ? "yes" : "no") << '\n';
    } else {
        out << "patterns n/a\n";
    }
    if (!o.trace_out.empty())
        write_file(o.trace_out, to_text(t));
    return 0;
}

int cmd_audit(const AuditOptions& o, std::ostream& out)
{
    PatternId p;
    parse_pattern(o.pattern, p);
    const OpTrace t = load_trace(o.trace);
    const auto rep = verify_uniformity(t, p);
    out << "pattern " << pattern_name(p) << '\n';
    out << "protected-ops " << rep.protected_ops << '\n';
    out << "patterns " << rep.pattern_count << '\n';
    out << "uniform " << (rep.uniform ? "yes" : "no") << '\n';
    if (!rep.uniform) {
        out << "mismatch-offset " << *rep.mismatch_offset << '\n';
        out << "detail " << rep.detail << '\n';
        return 2;
    }
    return 0;
}

int cmd_tables(const TablesOptions& o, std::ostream& out)
{
    const double am = o.bits ? am_ratio_for_bits(o.bits) : o.a_over_m;
    const GainTable t = gain_table(am, o.s_over_m);
    out << format_tables(t);
    if (!o.no_write) {
        std::filesystem::create_directories(o.out_dir);
        const std::filesystem::path dir(o.out_dir);
        write_file(dir / "table3.csv", table3_csv(t));
        write_file(dir / "table4.csv", table4_csv(t));
        out << "wrote " << (dir / "table3.csv").string() << ' ' << (dir / "table4.csv").string() << '\n';
    }
    return 0;
}

int cmd_recode(const RecodeOptions& o, std::ostream& out)
{
    const BigInt k = parse_hex(o.k);
    std::vector<int> digits;
    if (o.rtl) {
        if (o.window != 0)
            throw ValidationError("right-to-left recoding has no window");
        if (k < 1)
            throw ContractViolation("scalar must be at least 1");
        digits = rtl_digits(k);
        out << "order lsb-first, then a final 1\n";
    } else {
        digits = window_naf_recode(k, o.window).digits;
        out << "order msb-first\n";
    }
    out << "digits";
    std::size_t nonzero = 0;
    for (int d : digits) {
        out << ' ' << d;
        nonzero += d != 0;
    }
    out << "\nlength " << digits.size() << "\nnonzero " << nonzero << '\n';
    return 0;
}

int cmd_validate_catalog(const CatalogOptions& o, std::ostream& out)
{
    const CurveParams c = resolve_curve(o.curve);
    bool all_ok = true;
    for (const auto& [key, prog] : load_catalog()) {
        const auto rep = validate_program(prog, key.op, c, o.trials, o.seed);
        out << rep.summary() << '\n';
        if (o.print)
            out << to_text(prog) << '\n';
        all_ok = all_ok && rep.ok();
    }
    return all_ok ? 0 : 2;
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Atomic elliptic-curve scalar multiplication toolkit"};
    app.name("atomec-cli");
    app.require_subcommand(1);

    std::vector<std::string> strategies = strategy_names();
    const std::vector<std::string> cms{"none", "projective", "isomorphism"};
    const std::vector<std::string> patterns{"P1", "P2", "P3", "P4", "p1", "p2", "p3", "p4"};

    MulOptions mo;
    auto* mul = app.add_subcommand("mul", "scalar multiplication k*P");
    mul->add_option("--curve", mo.curve, "builtin name or curve file")->capture_default_str();
    mul->add_option("--k", mo.k, "scalar, hex")->required();
    mul->add_option("--x", mo.x, "base point x, hex (default: curve generator)");
    mul->add_option("--y", mo.y, "base point y, hex");
    mul->add_option("--strategy", mo.strategy)->check(CLI::IsMember(strategies))->capture_default_str();
    mul->add_option("--window", mo.window, "precomputed odd multiples")->check(CLI::Range(0u, 4u));
    mul->add_option("--cm", mo.cm, "countermeasure")->check(CLI::IsMember(cms))->capture_default_str();
    mul->add_option("--seed", mo.seed)->capture_default_str();
    mul->add_option("--trace", mo.trace_out, "write the opcode trace here");

    AuditOptions ao;
    auto* audit = app.add_subcommand("audit", "check a trace for atomic uniformity");
    audit->add_option("--trace", ao.trace)->required();
    audit->add_option("--pattern", ao.pattern)->required()->check(CLI::IsMember(patterns));

    TablesOptions to;
    auto* tables = app.add_subcommand("tables", "per-bit cost tables");
    tables->add_option("--a-over-m", to.a_over_m)->capture_default_str();
    tables->add_option("--bits", to.bits, "take A/M from the smart-card measurements for this modulus size");
    tables->add_option("--s-over-m", to.s_over_m)->capture_default_str();
    tables->add_option("--out-dir", to.out_dir)->capture_default_str();
    tables->add_flag("--no-write", to.no_write, "print only");

    RecodeOptions ro;
    auto* recode = app.add_subcommand("recode", "NAF / window NAF / right-to-left digits");
    recode->add_option("--k", ro.k)->required();
    recode->add_option("--window", ro.window)->check(CLI::Range(0u, 4u));
    recode->add_flag("--rtl", ro.rtl);

    CatalogOptions co;
    auto* catalog = app.add_subcommand("validate-catalog", "check every atomic program");
    catalog->add_option("--curve", co.curve)->capture_default_str();
    catalog->add_option("--trials", co.trials)->capture_default_str();
    catalog->add_option("--seed", co.seed)->capture_default_str();
    catalog->add_flag("--print", co.print, "also print each program");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? 0 : 1;
    }
    if (!mo.x.empty() != !mo.y.empty()) {
        err << "error: --x and --y go together\n";
        return 1;
    }

    try {
        if (*mul)
            return cmd_mul(mo, out);
        if (*audit)
            return cmd_audit(ao, out);
        if (*tables)
            return cmd_tables(to, out);
        if (*recode)
            return cmd_recode(ro, out);
        if (*catalog)
            return cmd_validate_catalog(co, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
    return 1;
}

} // namespace atomec
