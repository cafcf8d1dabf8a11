#include "atomec/atomic.hpp"

#include "atomec/errors.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

namespace atomec {

namespace {

using enum FieldOp;

constexpr FieldOp kP1[] = {Mul, Add, Neg, Add};
constexpr FieldOp kP2[] = {Mul, Neg, Add, Mul, Neg, Add, Add};
constexpr FieldOp kP3[] = {Sqr, Neg, Add, Mul, Neg, Add, Add};
constexpr FieldOp kP4[] = {Sqr, Add, Mul, Add, Mul, Add, Mul, Add, Add,
                           Sqr, Mul, Add, Sub, Mul, Sub, Sub, Mul, Sub};

constexpr std::string_view kRegNames[kRegCount] = {
    "X1", "Y1", "Z1", "W1", "X2", "Y2", "Z2", "W2", "X3", "Y3", "Z3", "ZZ1", "ZZZ1",
    "R1", "R2", "R3", "R4", "R5", "R6", "R7", "a",  "S1", "S2", "S3", "S4",
};

std::vector<std::string> split_ws(const std::string& line)
{
    std::istringstream in(line);
    std::vector<std::string> out;
    std::string tok;
    while (in >> tok)
        out.push_back(tok);
    return out;
}

AtomicInstruction canonical_dummy(FieldOp op)
{
    // Dummies read S2/S3 and write S1 (additive) or S4 (multiplicative).
    bool mult = op == Mul || op == Sqr;
    return {op, mult ? Reg::S4 : Reg::S1, Reg::S2, Reg::S3, true};
}

} // namespace

std::string_view pattern_name(PatternId id)
{
    static constexpr std::string_view names[] = {"P1", "P2", "P3", "P4"};
    return names[static_cast<std::size_t>(id)];
}

bool parse_pattern(std::string_view text, PatternId& out)
{
    for (auto id : {PatternId::P1, PatternId::P2, PatternId::P3, PatternId::P4}) {
        auto n = pattern_name(id);
        if (text == n || (text.size() == 2 && (text[0] == 'p') && text[1] == n[1])) {
            out = id;
            return true;
        }
    }
    return false;
}

std::span<const FieldOp> skeleton(PatternId id)
{
    switch (id) {
    case PatternId::P1: return kP1;
    case PatternId::P2: return kP2;
    case PatternId::P3: return kP3;
    case PatternId::P4: return kP4;
    }
    return {};
}

std::string_view reg_name(Reg r)
{
    return kRegNames[static_cast<std::size_t>(r)];
}

bool parse_reg(std::string_view text, Reg& out)
{
    for (std::size_t i = 0; i < kRegCount; ++i) {
        if (kRegNames[i] == text) {
            out = static_cast<Reg>(i);
            return true;
        }
    }
    return false;
}

bool is_scratch(Reg r)
{
    return r >= Reg::S1 && r <= Reg::S4;
}

bool is_intermediate(Reg r)
{
    return r >= Reg::R1 && r <= Reg::R7;
}

bool is_unary(FieldOp op)
{
    return op == Sqr || op == Neg;
}

std::size_t AtomicProgram::pattern_count() const
{
    auto len = skeleton(pattern).size();
    return code.size() / len;
}

AtomicProgram parse_program(const std::string& text, std::string name, PatternId pattern, std::vector<Reg> inputs,
                            std::vector<Reg> outputs)
{
    AtomicProgram prog{std::move(name), pattern, {}, std::move(inputs), std::move(outputs)};
    const auto len = skeleton(pattern).size();
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    auto fail = [&](const std::string& msg) {
        throw ParseError(prog.name + " line " + std::to_string(lineno) + ": " + msg);
    };
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        auto tok = split_ws(line);
        if (tok.empty())
            continue;
        if (tok[0] == "---") {
            if (prog.code.size() % len != 0)
                fail("pattern boundary after " + std::to_string(prog.code.size()) + " instructions");
            continue;
        }
        FieldOp op;
        if (!parse_mnemonic(tok[0], op) || op == Inv)
            fail("unknown opcode '" + tok[0] + "'");
        bool dummy = tok.back() == "dummy";
        if (dummy)
            tok.pop_back();
        if (dummy && tok.size() == 1) {
            prog.code.push_back(canonical_dummy(op));
            continue;
        }
        std::size_t want = is_unary(op) ? 3 : 4;
        if (tok.size() != want)
            fail("expected " + std::to_string(want - 1) + " register operands");
        AtomicInstruction ins{op, Reg::S1, Reg::S1, Reg::S1, dummy};
        Reg* slots[] = {&ins.dst, &ins.src1, &ins.src2};
        for (std::size_t i = 1; i < tok.size(); ++i)
            if (!parse_reg(tok[i], *slots[i - 1]))
                fail("unknown register '" + tok[i] + "'");
        if (is_unary(op))
            ins.src2 = ins.src1;
        prog.code.push_back(ins);
    }
    return prog;
}

std::string to_text(const AtomicProgram& prog)
{
    std::ostringstream out;
    const auto len = skeleton(prog.pattern).size();
    for (std::size_t i = 0; i < prog.code.size(); ++i) {
        if (i && i % len == 0)
            out << "---\n";
        const auto& ins = prog.code[i];
        out << mnemonic(ins.op) << ' ' << reg_name(ins.dst) << ' ' << reg_name(ins.src1);
        if (!is_unary(ins.op))
            out << ' ' << reg_name(ins.src2);
        if (ins.dummy)
            out << " dummy";
        out << '\n';
    }
    return out.str();
}

AtomicProgram squarings_as_multiplications(const AtomicProgram& prog, std::string name)
{
    AtomicProgram out = prog;
    out.name = std::move(name);
    if (prog.pattern == PatternId::P3)
        out.pattern = PatternId::P2;
    for (auto& ins : out.code) {
        if (ins.op == Sqr) {
            ins.op = Mul;
            ins.src2 = ins.src1;
        }
    }
    return out;
}

bool ValidationReport::has(std::string_view check) const
{
    return std::any_of(issues.begin(), issues.end(), [&](const Issue& i) { return i.check == check; });
}

std::string ValidationReport::summary() const
{
    std::ostringstream out;
    out << program << ": " << (ok() ? "ok" : "FAILED");
    if (random_trials || exhaustive_cases)
        out << " (" << random_trials << " random, " << exhaustive_cases << " exhaustive)";
    for (const auto& i : issues) {
        out << "\n  [" << i.check << "]";
        if (i.index >= 0)
            out << " at instruction " << i.index;
        out << ": " << i.detail;
    }
    return out.str();
}

ValidationReport check_structure(const AtomicProgram& prog)
{
    ValidationReport rep;
    rep.program = prog.name;
    auto skel = skeleton(prog.pattern);
    auto add = [&](const char* check, long idx, std::string detail) {
        rep.issues.push_back({check, idx, std::move(detail)});
    };
    if (prog.code.size() % skel.size() != 0)
        add("skeleton", static_cast<long>(prog.code.size()),
            "length " + std::to_string(prog.code.size()) + " is not a multiple of " + std::to_string(skel.size()));
    std::set<Reg> io(prog.inputs.begin(), prog.inputs.end());
    io.insert(prog.outputs.begin(), prog.outputs.end());
    std::set<Reg> init(prog.inputs.begin(), prog.inputs.end());
    init.insert(Reg::A);
    for (std::size_t i = 0; i < prog.code.size(); ++i) {
        const auto& ins = prog.code[i];
        long idx = static_cast<long>(i);
        FieldOp want = skel[i % skel.size()];
        if (ins.op != want)
            add("skeleton", idx,
                "expected " + std::string(mnemonic(want)) + ", found " + std::string(mnemonic(ins.op)));
        std::vector<Reg> srcs{ins.src1};
        if (!is_unary(ins.op))
            srcs.push_back(ins.src2);
        if (ins.dummy) {
            bool clean = is_scratch(ins.dst);
            for (Reg s : srcs)
                clean = clean && is_scratch(s);
            if (!clean)
                add("dummy-isolation", idx, "dummy touches a live register");
            continue;
        }
        for (Reg s : srcs) {
            if (is_scratch(s))
                add("dummy-isolation", idx, "live instruction reads scratch " + std::string(reg_name(s)));
            else if (!io.count(s) && !is_intermediate(s) && s != Reg::A)
                add("register-bank", idx, std::string(reg_name(s)) + " is not in the io-map or R1..R7");
            else if (!init.count(s))
                add("uninitialized", idx, "read of " + std::string(reg_name(s)) + " before any write");
        }
        if (is_scratch(ins.dst))
            add("dummy-isolation", idx, "live instruction writes scratch " + std::string(reg_name(ins.dst)));
        else if (ins.dst == Reg::A)
            add("register-bank", idx, "curve constant a is read-only");
        else if (!io.count(ins.dst) && !is_intermediate(ins.dst))
            add("register-bank", idx, std::string(reg_name(ins.dst)) + " is not in the io-map or R1..R7");
        init.insert(ins.dst);
    }
    for (Reg o : prog.outputs)
        if (!init.count(o))
            add("uninitialized", -1, "output " + std::string(reg_name(o)) + " never written");
    return rep;
}

RegisterFile::RegisterFile(const CurveParams& c)
{
    set(Reg::A, c.a);
    reset_scratch(c.field);
}

const FieldElement& RegisterFile::get(Reg r) const
{
    const auto& v = regs_[static_cast<std::size_t>(r)];
    if (!v.bound())
        throw ContractViolation("read of empty register " + std::string(reg_name(r)));
    return v;
}

void RegisterFile::reset_scratch(const Field& f)
{
    set(Reg::S1, f.element(2));
    set(Reg::S2, f.element(3));
    set(Reg::S3, f.element(5));
    set(Reg::S4, f.element(7));
}

void run_program(const AtomicProgram& prog, RegisterFile& regs, const Field& f)
{
    regs.reset_scratch(f);
    for (const auto& ins : prog.code) {
        const auto& a = regs.get(ins.src1);
        FieldElement r;
        switch (ins.op) {
        case Mul: r = f.mul(a, regs.get(ins.src2)); break;
        case Sqr: r = f.sqr(a); break;
        case Add: r = f.add(a, regs.get(ins.src2)); break;
        case Sub: r = f.sub(a, regs.get(ins.src2)); break;
        case Neg: r = f.neg(a); break;
        case Inv: throw ContractViolation("INV is not an atomic opcode");
        }
        regs.set(ins.dst, r);
    }
}

namespace {

void require_inputs(const AtomicProgram& prog, const RegisterFile& regs)
{
    for (Reg r : prog.inputs)
        if (!regs.has(r))
            throw ContractViolation(prog.name + ": input " + std::string(reg_name(r)) + " not supplied");
}

void load(RegisterFile& regs, Reg x, Reg y, Reg z, const JacobianPoint& P)
{
    regs.set(x, P.X);
    regs.set(y, P.Y);
    regs.set(z, P.Z);
}

JacobianPoint run_to(const AtomicProgram& prog, const CurveParams& c, RegisterFile& regs, OpObserver* obs, Reg x,
                     Reg y, Reg z)
{
    require_inputs(prog, regs);
    run_program(prog, regs, c.field.with_observer(obs));
    return {regs.get(x), regs.get(y), regs.get(z)};
}

} // namespace

JacobianPoint atomic_add_general(const AtomicProgram& prog, const CurveParams& c, const JacobianPoint& P,
                                 const JacobianPoint& Q, OpObserver* obs)
{
    RegisterFile regs(c);
    load(regs, Reg::X1, Reg::Y1, Reg::Z1, P);
    load(regs, Reg::X2, Reg::Y2, Reg::Z2, Q);
    return run_to(prog, c, regs, obs, Reg::X3, Reg::Y3, Reg::Z3);
}

JacobianPoint atomic_readd(const AtomicProgram& prog, const CurveParams& c, const ReadditionCache& P,
                           const JacobianPoint& Q, OpObserver* obs)
{
    RegisterFile regs(c);
    load(regs, Reg::X1, Reg::Y1, Reg::Z1, P.point);
    regs.set(Reg::ZZ1, P.zz);
    regs.set(Reg::ZZZ1, P.zzz);
    load(regs, Reg::X2, Reg::Y2, Reg::Z2, Q);
    return run_to(prog, c, regs, obs, Reg::X3, Reg::Y3, Reg::Z3);
}

JacobianPoint atomic_add_mixed(const AtomicProgram& prog, const CurveParams& c, const AffinePoint& P,
                               const JacobianPoint& Q, OpObserver* obs)
{
    RegisterFile regs(c);
    load(regs, Reg::X1, Reg::Y1, Reg::Z1, Q);
    regs.set(Reg::X2, P.x);
    regs.set(Reg::Y2, P.y);
    return run_to(prog, c, regs, obs, Reg::X3, Reg::Y3, Reg::Z3);
}

JacobianPoint atomic_double(const AtomicProgram& prog, const CurveParams& c, const JacobianPoint& P,
                            OpObserver* obs)
{
    RegisterFile regs(c);
    load(regs, Reg::X1, Reg::Y1, Reg::Z1, P);
    return run_to(prog, c, regs, obs, Reg::X2, Reg::Y2, Reg::Z2);
}

ModJacobianPoint atomic_modjac_double(const AtomicProgram& prog, const CurveParams& c, const ModJacobianPoint& P,
                                      OpObserver* obs)
{
    RegisterFile regs(c);
    load(regs, Reg::X1, Reg::Y1, Reg::Z1, P.jacobian());
    regs.set(Reg::W1, P.W);
    auto J = run_to(prog, c, regs, obs, Reg::X2, Reg::Y2, Reg::Z2);
    return {J.X, J.Y, J.Z, regs.get(Reg::W2)};
}

Extension extend_pattern(unsigned m, unsigned m_min, unsigned n, unsigned n_min)
{
    if (m == 0 || n == 0 || m_min > m || n_min > n)
        throw ContractViolation("extend_pattern: need m, n >= 1, m' <= m, n' <= n");
    unsigned d = std::gcd(m, n);
    // e*m/d <= m - m'  and  e*n/d <= n - n'
    unsigned e = std::min((m - m_min) * d / m, (n - n_min) * d / n);
    return {d, e};
}

} // namespace atomec
