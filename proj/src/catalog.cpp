#include "atomec/atomic.hpp"

#include "atomec/errors.hpp"
#include "atomec/formulas.hpp"

#include <mutex>

namespace atomec {

namespace {

// Modified Jacobian doubling, 8 x (1).
const char* kModjacDoubleP1 = R"(
MUL R1 X1 X1
ADD R2 Y1 Y1
NEG dummy
ADD dummy
---
MUL Z2 R2 Z1
ADD R4 R1 R1
NEG dummy
ADD dummy
---
MUL R3 R2 Y1
ADD R6 R3 R3
NEG dummy
ADD dummy
---
MUL R2 R6 R3
ADD R1 R4 R1
NEG dummy
ADD R1 R1 W1
---
MUL R3 R1 R1
ADD dummy
NEG dummy
ADD dummy
---
MUL R4 R6 X1
ADD R5 W1 W1
NEG R4 R4
ADD R3 R3 R4
---
MUL W2 R2 R5
ADD X2 R3 R4
NEG R2 R2
ADD R6 R4 X2
---
MUL R4 R6 R1
ADD dummy
NEG R4 R4
ADD Y2 R4 R2
)";

// General Jacobian addition, 16 x (1): the Add.1 and Add.2 columns of the extended
// arrangement with squarings written as multiplications. Result is (X3 : -Y3 : -Z3).
const char* kAddGeneralP1 = R"(
MUL R1 Z2 Z2
ADD dummy
NEG dummy
ADD dummy
---
MUL R2 X1 R1
ADD dummy
NEG dummy
ADD dummy
---
MUL R1 R1 Z2
ADD dummy
NEG dummy
ADD dummy
---
MUL R3 Y1 R1
ADD dummy
NEG dummy
ADD dummy
---
MUL R1 Z1 Z1
ADD dummy
NEG dummy
ADD dummy
---
MUL R4 R1 X2
ADD dummy
NEG R4 R4
ADD R4 R2 R4
---
MUL R1 Z1 R1
ADD dummy
NEG dummy
ADD dummy
---
MUL R1 R1 Y2
ADD dummy
NEG R1 R1
ADD R1 R3 R1
---
MUL R6 R4 R4
ADD dummy
NEG dummy
ADD dummy
---
MUL R5 Z1 Z2
ADD dummy
NEG dummy
ADD dummy
---
MUL Z3 R5 R4
ADD dummy
NEG dummy
ADD dummy
---
MUL R2 R2 R6
ADD dummy
NEG R1 R1
ADD dummy
---
MUL R5 R1 R1
ADD dummy
NEG R3 R3
ADD dummy
---
MUL R4 R4 R6
ADD R6 R5 R4
NEG R2 R2
ADD R6 R6 R2
---
MUL R3 R3 R4
ADD X3 R2 R6
NEG dummy
ADD R2 X3 R2
---
MUL R1 R1 R2
ADD Y3 R3 R1
NEG dummy
ADD dummy
)";

// General doubling, 5 x (3).
const char* kDoubleGeneralP3 = R"(
SQR R1 X1
NEG dummy
ADD R3 R1 R1
MUL R2 Z1 Z1
NEG dummy
ADD R1 R1 R3
ADD R4 X1 X1
---
SQR R2 R2
NEG dummy
ADD dummy
MUL R2 a R2
NEG dummy
ADD R1 R1 R2
ADD R2 Y1 Y1
---
SQR R3 Y1
NEG dummy
ADD dummy
MUL Z2 Z1 R2
NEG dummy
ADD R3 R3 R3
ADD dummy
---
SQR R2 R1
NEG dummy
ADD dummy
MUL R4 R4 R3
NEG R4 R4
ADD R2 R2 R4
ADD X2 R2 R4
---
SQR R3 R3
NEG R1 R1
ADD R4 X2 R4
MUL R1 R1 R4
NEG R3 R3
ADD R3 R3 R3
ADD Y2 R3 R1
)";

// Readdition, 7 x (2); point 1 carries cached Z1^2 and Z1^3. Result is (X3 : -Y3 : -Z3).
const char* kReaddP2 = R"(
MUL R1 Y2 ZZZ1
NEG dummy
ADD dummy
MUL R2 Y1 Z2
NEG dummy
ADD dummy
ADD dummy
---
MUL R3 Z2 Z2
NEG dummy
ADD dummy
MUL R4 R2 R3
NEG R5 R1
ADD R4 R4 R5
ADD dummy
---
MUL R2 X2 ZZ1
NEG dummy
ADD dummy
MUL R3 X1 R3
NEG R5 R2
ADD R3 R3 R5
ADD dummy
---
MUL R5 R3 R3
NEG dummy
ADD dummy
MUL R2 R2 R5
NEG R6 R2
ADD R6 R6 R6
ADD dummy
---
MUL R5 R5 R3
NEG dummy
ADD dummy
MUL R3 Z2 R3
NEG dummy
ADD dummy
ADD dummy
---
MUL R7 R4 R4
NEG dummy
ADD dummy
MUL Z3 R3 Z1
NEG R5 R5
ADD R7 R7 R6
ADD X3 R7 R5
---
MUL R3 R1 R5
NEG R1 X3
ADD R2 R2 R1
MUL R1 R2 R4
NEG dummy
ADD Y3 R1 R3
ADD dummy
)";

// Mixed addition, 6 x (3): Jacobian (X1:Y1:Z1) plus affine (X2, Y2).
// Dead inputs X1, Y1, X2 are reused as temporaries. Result is (X3 : -Y3 : -Z3).
const char* kAddMixedP3 = R"(
SQR R1 Z1
NEG R2 R1
ADD R3 Z1 R1
MUL R4 X2 R1
NEG R5 X1
ADD R5 R4 R5
ADD R4 X1 X1
---
SQR R6 R5
NEG dummy
ADD R4 R4 R4
MUL R4 R4 R6
NEG R7 R4
ADD X2 R5 R5
ADD X1 Y1 Y1
---
SQR R3 R3
NEG Y1 X1
ADD X2 X2 X2
MUL X2 X2 R6
NEG dummy
ADD R3 R3 R2
ADD R4 R4 R4
---
SQR R2 R1
NEG R2 R2
ADD R3 R3 R2
MUL R3 Y2 R3
NEG R2 X2
ADD R3 R3 Y1
ADD R5 Z1 R5
---
SQR Y1 R3
NEG R4 R4
ADD Y1 Y1 R2
MUL X1 X1 X2
NEG dummy
ADD X3 Y1 R4
ADD R7 X3 R7
---
SQR R5 R5
NEG R5 R5
ADD R1 R1 R6
MUL R7 R3 R7
NEG dummy
ADD Y3 R7 X1
ADD Z3 R1 R5
)";

// Fast doubling (a = -3), 4 x (3). Result is (X2 : -Y2 : -Z2).
const char* kDoubleFastP3 = R"(
SQR R1 Z1
NEG R2 R1
ADD R1 X1 R1
MUL R3 Y1 Z1
NEG R3 R3
ADD R2 X1 R2
ADD Z2 R3 R3
---
SQR R3 Y1
NEG dummy
ADD R3 R3 R3
MUL R2 R1 R2
NEG dummy
ADD R1 R2 R2
ADD R2 R1 R2
---
SQR R1 R2
NEG dummy
ADD R4 R3 R3
MUL R4 R4 X1
NEG R4 R4
ADD R5 R4 R4
ADD X2 R1 R5
---
SQR R3 R3
NEG dummy
ADD R4 X2 R4
MUL R2 R2 R4
NEG dummy
ADD R3 R3 R3
ADD Y2 R2 R3
)";

// General addition under (4): Add.1 then Add.2.
const char* kAddGeneralP4 = R"(
SQR R1 Z2
ADD dummy
MUL R2 Y1 Z2
ADD dummy
MUL R5 Y2 Z1
ADD dummy
MUL R3 R1 R2
ADD dummy
ADD dummy
SQR R4 Z1
MUL R2 R5 R4
ADD dummy
SUB R2 R2 R3
MUL R5 R1 X1
SUB dummy
SUB dummy
MUL R6 X2 R4
SUB R6 R6 R5
---
SQR R1 R6
ADD dummy
MUL R4 R5 R1
ADD dummy
MUL R5 R1 R6
ADD dummy
MUL R1 Z1 R6
ADD dummy
ADD dummy
SQR R6 R2
MUL Z3 R1 Z2
ADD R1 R4 R4
SUB R6 R6 R1
MUL R1 R5 R3
SUB X3 R6 R5
SUB R4 R4 X3
MUL R3 R4 R2
SUB Y3 R3 R1
)";

// Modified Jacobian doubling under (4), no dummies.
const char* kModjacDoubleP4 = R"(
SQR R1 X1
ADD R2 Y1 Y1
MUL Z2 R2 Z1
ADD R4 R1 R1
MUL R3 R2 Y1
ADD R6 R3 R3
MUL R2 R6 R3
ADD R1 R4 R1
ADD R1 R1 W1
SQR R3 R1
MUL R4 R6 X1
ADD R5 W1 W1
SUB R3 R3 R4
MUL W2 R2 R5
SUB X2 R3 R4
SUB R6 R4 X2
MUL R4 R6 R1
SUB Y2 R4 R2
)";

using enum Reg;
const std::vector<Reg> kDblIn{X1, Y1, Z1};
const std::vector<Reg> kDblOut{X2, Y2, Z2};
const std::vector<Reg> kAddIn{X1, Y1, Z1, X2, Y2, Z2};
const std::vector<Reg> kAddOut{X3, Y3, Z3};

Catalog build()
{
    Catalog cat;
    auto put = [&](CatalogOp op, AtomicProgram prog) {
        auto rep = check_structure(prog);
        if (!rep.ok())
            throw ValidationError("catalog entry " + rep.summary());
        cat.emplace(CatalogKey{op, prog.pattern}, std::move(prog));
    };
    auto parse = [](const char* text, const char* name, PatternId pat, std::vector<Reg> in, std::vector<Reg> out) {
        return parse_program(text, name, pat, std::move(in), std::move(out));
    };
    put(CatalogOp::ModjacDouble,
        parse(kModjacDoubleP1, "modjac-double/P1", PatternId::P1, {X1, Y1, Z1, W1}, {X2, Y2, Z2, W2}));
    put(CatalogOp::JacAddGeneral, parse(kAddGeneralP1, "jac-add-general/P1", PatternId::P1, kAddIn, kAddOut));
    auto dg = parse(kDoubleGeneralP3, "jac-double-general/P3", PatternId::P3, {X1, Y1, Z1, A}, kDblOut);
    put(CatalogOp::JacDoubleGeneral, squarings_as_multiplications(dg, "jac-double-general/P2"));
    put(CatalogOp::JacDoubleGeneral, std::move(dg));
    put(CatalogOp::JacReadd,
        parse(kReaddP2, "jac-readd/P2", PatternId::P2, {X1, Y1, Z1, ZZ1, ZZZ1, X2, Y2, Z2}, kAddOut));
    auto mx = parse(kAddMixedP3, "jac-add-mixed/P3", PatternId::P3, {X1, Y1, Z1, X2, Y2}, kAddOut);
    put(CatalogOp::JacAddMixed, squarings_as_multiplications(mx, "jac-add-mixed/P2"));
    put(CatalogOp::JacAddMixed, std::move(mx));
    auto df = parse(kDoubleFastP3, "jac-double-fast/P3", PatternId::P3, kDblIn, kDblOut);
    put(CatalogOp::JacDoubleFast, squarings_as_multiplications(df, "jac-double-fast/P2"));
    put(CatalogOp::JacDoubleFast, std::move(df));
    put(CatalogOp::JacAddGeneral, parse(kAddGeneralP4, "jac-add-general/P4", PatternId::P4, kAddIn, kAddOut));
    put(CatalogOp::ModjacDouble,
        parse(kModjacDoubleP4, "modjac-double/P4", PatternId::P4, {X1, Y1, Z1, W1}, {X2, Y2, Z2, W2}));
    return cat;
}

} // namespace

std::string_view catalog_op_name(CatalogOp op)
{
    static constexpr std::string_view names[] = {"modjac-double", "jac-add-general", "jac-double-general",
                                                 "jac-readd",     "jac-add-mixed",   "jac-double-fast"};
    return names[static_cast<std::size_t>(op)];
}

const Catalog& load_catalog()
{
    static const Catalog cat = build();
    return cat;
}

bool catalog_has(CatalogOp op, PatternId pattern)
{
    return load_catalog().count({op, pattern}) != 0;
}

const AtomicProgram& catalog_program(CatalogOp op, PatternId pattern)
{
    const auto& cat = load_catalog();
    auto it = cat.find({op, pattern});
    if (it == cat.end())
        throw ContractViolation("no catalog entry for " + std::string(catalog_op_name(op)) + " under " +
                                std::string(pattern_name(pattern)));
    return it->second;
}

namespace {

class SequenceRecorder : public OpObserver {
public:
    void record(FieldOp op) override { ops.push_back(op); }
    std::vector<FieldOp> ops;
};

long last_writer(const AtomicProgram& prog, Reg r)
{
    for (long i = static_cast<long>(prog.code.size()) - 1; i >= 0; --i)
        if (!prog.code[i].dummy && prog.code[i].dst == r)
            return i;
    return -1;
}

struct Outcome {
    JacobianPoint got;
    std::optional<FieldElement> got_w;
    JacobianPoint want;
    std::optional<FieldElement> want_w;
};

// Blame the output coordinate that breaks the class relation (X,Y,Z,W) ~ (l^2 X, l^3 Y, l Z, l^4 W).
long blame(const AtomicProgram& prog, const CurveParams& c, const Outcome& o, Reg x, Reg y, Reg z, Reg w)
{
    const Field& f = c.field;
    if (o.got.is_infinity() != o.want.is_infinity())
        return last_writer(prog, z);
    if (o.got.is_infinity())
        return -1;
    auto l = f.mul(o.got.Z, f.inv(o.want.Z));
    auto l2 = f.sqr(l);
    auto l3 = f.mul(l2, l);
    bool xbad = o.got.X != f.mul(l2, o.want.X);
    bool ybad = o.got.Y != f.mul(l3, o.want.Y);
    if (xbad && ybad)
        return last_writer(prog, z);
    if (xbad)
        return last_writer(prog, x);
    if (ybad)
        return last_writer(prog, y);
    if (o.got_w && o.want_w && *o.got_w != f.mul(f.sqr(l2), *o.want_w))
        return last_writer(prog, w);
    return -1;
}

bool same_image(const CurveParams& c, const Outcome& o)
{
    if (to_affine(c, o.got) != to_affine(c, o.want))
        return false;
    if (o.got_w && !w_consistent(c, {o.got.X, o.got.Y, o.got.Z, *o.got_w}))
        return false;
    return true;
}

bool needs_minus3(CatalogOp op)
{
    return op == CatalogOp::JacDoubleFast;
}

bool is_addition(CatalogOp op)
{
    return op == CatalogOp::JacAddGeneral || op == CatalogOp::JacReadd || op == CatalogOp::JacAddMixed;
}

// Runs program and reference on one input pair; Q unused for doublings.
Outcome evaluate(const AtomicProgram& prog, CatalogOp op, const CurveParams& c, const JacobianPoint& P,
                 const JacobianPoint& Q, OpObserver* obs)
{
    Outcome o;
    switch (op) {
    case CatalogOp::ModjacDouble: {
        auto M = to_modjac(c, P);
        auto got = atomic_modjac_double(prog, c, M, obs);
        auto want = modjac_double(c, M);
        o = {got.jacobian(), got.W, want.jacobian(), want.W};
        break;
    }
    case CatalogOp::JacAddGeneral:
        o.got = atomic_add_general(prog, c, P, Q, obs);
        o.want = jac_add_general(c, P, Q);
        break;
    case CatalogOp::JacDoubleGeneral:
        o.got = atomic_double(prog, c, P, obs);
        o.want = jac_double_general(c, P);
        break;
    case CatalogOp::JacReadd: {
        auto cache = make_cache(c, P);
        o.got = atomic_readd(prog, c, cache, Q, obs);
        o.want = jac_readd(c, cache, Q);
        break;
    }
    case CatalogOp::JacAddMixed: {
        auto Pa = to_affine(c, P);
        o.got = atomic_add_mixed(prog, c, Pa, Q, obs);
        o.want = jac_add_mixed(c, Pa, Q);
        break;
    }
    case CatalogOp::JacDoubleFast:
        o.got = atomic_double(prog, c, P, obs);
        o.want = jac_double_fast(c, P);
        break;
    }
    return o;
}

std::pair<Reg, Reg> out_regs_w(CatalogOp op)
{
    if (op == CatalogOp::ModjacDouble)
        return {Reg::Z2, Reg::W2};
    return {is_addition(op) ? Reg::Z3 : Reg::Z2, Reg::S1};
}

} // namespace

ValidationReport validate_program(const AtomicProgram& prog, CatalogOp op, const CurveParams& c,
                                  std::size_t trials, std::uint64_t seed, bool exhaustive)
{
    ValidationReport rep = check_structure(prog);
    if (!rep.ok())
        return rep;
    const bool add = is_addition(op);
    const Reg ox = add ? Reg::X3 : Reg::X2, oy = add ? Reg::Y3 : Reg::Y2;
    const auto [oz, ow] = out_regs_w(op);
    auto skel = skeleton(prog.pattern);

    auto one_case = [&](const CurveParams& cv, const JacobianPoint& P, const JacobianPoint& Q) -> bool {
        SequenceRecorder rec;
        Outcome o;
        try {
            o = evaluate(prog, op, cv, P, Q, &rec);
        } catch (const ContractViolation& e) {
            rep.issues.push_back({"uninitialized", -1, e.what()});
            return false;
        }
        for (std::size_t i = 0; i < rec.ops.size(); ++i) {
            if (rec.ops[i] != skel[i % skel.size()]) {
                rep.issues.push_back({"skeleton", static_cast<long>(i), "executed opcode differs from pattern"});
                return false;
            }
        }
        if (rec.ops.size() != prog.code.size()) {
            rep.issues.push_back({"skeleton", static_cast<long>(rec.ops.size()), "executed length differs"});
            return false;
        }
        if (!same_image(cv, o)) {
            auto where = blame(prog, cv, o, ox, oy, oz, ow);
            rep.issues.push_back({"functional", where,
                                  "differs from " + std::string(catalog_op_name(op)) + " on curve " + cv.name});
            return false;
        }
        return true;
    };

    std::mt19937_64 rng(seed);
    if (!needs_minus3(op) || c.a_is_minus3()) {
        for (std::size_t t = 0; t < trials; ++t) {
            auto P = to_jacobian(c, random_point(c, rng), random_nonzero(c, rng));
            auto Q = to_jacobian(c, random_point(c, rng), random_nonzero(c, rng));
            if (add && (jac_same_point(c, P, Q) || jac_opposite(c, P, Q)))
                continue;
            ++rep.random_trials;
            if (!one_case(c, P, Q))
                return rep;
        }
    }
    if (!exhaustive)
        return rep;
    for (const char* name : {"toy23", "toy23m3"}) {
        auto small = builtin_curve(name);
        if (needs_minus3(op) && !small.a_is_minus3())
            continue;
        auto pts = all_points(small);
        for (std::size_t i = 0; i < pts.size(); ++i) {
            auto q = small.field.element(2 + i % 5);
            auto P = to_jacobian(small, pts[i], q);
            if (!add) {
                ++rep.exhaustive_cases;
                if (!one_case(small, P, P))
                    return rep;
                continue;
            }
            for (std::size_t j = 0; j < pts.size(); ++j) {
                auto Q = to_jacobian(small, pts[j], small.field.element(3 + j % 7));
                if (jac_same_point(small, P, Q) || jac_opposite(small, P, Q))
                    continue;
                ++rep.exhaustive_cases;
                if (!one_case(small, P, Q))
                    return rep;
            }
        }
    }
    return rep;
}

} // namespace atomec
