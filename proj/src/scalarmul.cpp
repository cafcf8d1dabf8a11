#include "atomec/scalarmul.hpp"

#include "atomec/errors.hpp"
#include "atomec/formulas.hpp"
#include "atomec/recoding.hpp"

#include <cctype>
#include <cstdlib>

namespace atomec {

namespace {

JacobianPoint normalized(const CurveParams& c, JacobianPoint P)
{
    return P.is_infinity() ? jac_infinity(c) : P;
}

ModJacobianPoint normalized(const CurveParams& c, ModJacobianPoint P)
{
    if (!P.is_infinity())
        return P;
    const auto inf = jac_infinity(c);
    return {inf.X, inf.Y, inf.Z, c.field.zero()};
}

void check_inputs(const BigInt& k, const AffinePoint& P, const CurveParams& c)
{
    if (k <= 0)
        throw ContractViolation("scalar must be at least 1");
    if (c.n && k >= *c.n)
        throw ContractViolation("scalar must be below the group order");
    if (P.infinity)
        throw ContractViolation("base point is O");
    if (!c.field.owns(P.x) || !c.field.owns(P.y) || !on_curve(c, P))
        throw ContractViolation("base point is not on the curve");
}

// Working curve and base point after the countermeasure draws its randomness.
struct Blinding {
    std::optional<Isomorphism> iso;
    std::optional<FieldElement> r;

    Blinding(const MulStrategy& s, const CurveParams& c, const AffinePoint& P, RandomSource& rng)
    {
        if (s.countermeasure == Countermeasure::Isomorphism)
            iso = apply_curve_isomorphism(c, P, rng.nonzero(c));
        else if (s.countermeasure == Countermeasure::Projective)
            r = rng.nonzero(c);
    }
    const CurveParams& curve(const CurveParams& c) const { return iso ? iso->curve : c; }
    AffinePoint base(const AffinePoint& P) const { return iso ? iso->point : P; }
    AffinePoint finish(const AffinePoint& Q) const { return iso ? iso->undo(Q) : Q; }
};

struct TableEntry {
    AffinePoint affine;
    ReadditionCache cache; // only filled for readdition
};

} // namespace

std::string_view countermeasure_name(Countermeasure cm)
{
    switch (cm) {
    case Countermeasure::None: return "none";
    case Countermeasure::Projective: return "projective";
    case Countermeasure::Isomorphism: return "isomorphism";
    }
    return "?";
}

bool parse_countermeasure(std::string_view text, Countermeasure& out)
{
    for (auto cm : {Countermeasure::None, Countermeasure::Projective, Countermeasure::Isomorphism})
        if (text == countermeasure_name(cm)) {
            out = cm;
            return true;
        }
    return false;
}

std::string MulStrategy::name() const
{
    const bool ltr = direction == Direction::LeftToRight;
    if (!pattern)
        return ltr ? "ltr-naf-plain" : "rtl-plain";
    std::string p(pattern_name(*pattern));
    for (auto& ch : p)
        ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    return (ltr ? "ltr-" : "rtl-") + p;
}

std::vector<std::string> strategy_names()
{
    return {"ltr-naf-plain", "rtl-plain", "ltr-p2", "ltr-p3", "rtl-p1", "rtl-p4"};
}

MulStrategy parse_strategy(std::string_view name)
{
    MulStrategy s;
    if (name == "ltr-naf-plain") {
        s.direction = Direction::LeftToRight;
    } else if (name == "rtl-plain") {
        s.direction = Direction::RightToLeft;
    } else if (name == "ltr-p2" || name == "ltr-p3") {
        s.direction = Direction::LeftToRight;
        s.pattern = name.back() == '2' ? PatternId::P2 : PatternId::P3;
    } else if (name == "rtl-p1" || name == "rtl-p4") {
        s.direction = Direction::RightToLeft;
        s.pattern = name.back() == '1' ? PatternId::P1 : PatternId::P4;
    } else {
        throw StrategyError("unknown strategy '" + std::string(name) + "'");
    }
    return s;
}

void check_strategy(const MulStrategy& s)
{
    if (s.window > 4)
        throw StrategyError("window must be in 0..4");
    if (!s.pattern)
        return;
    const PatternId p = *s.pattern;
    const bool ltr = s.direction == Direction::LeftToRight;
    if ((p == PatternId::P2 || p == PatternId::P3) && !ltr)
        throw StrategyError(std::string(pattern_name(p)) + " is only defined for left-to-right");
    if ((p == PatternId::P1 || p == PatternId::P4) && ltr)
        throw StrategyError(std::string(pattern_name(p)) + " is only defined for right-to-left");
    if (p == PatternId::P2 && s.countermeasure == Countermeasure::Isomorphism)
        throw StrategyError("P2 needs a = -3, which a random isomorphism destroys");
    if (p == PatternId::P3 && s.countermeasure == Countermeasure::Projective)
        throw StrategyError("P3 uses mixed addition, which needs affine table points");
}

void check_executable(const MulStrategy& s, const CurveParams& c)
{
    check_strategy(s);
    if (s.direction == Direction::RightToLeft && s.window != 0)
        throw StrategyError("right-to-left has no precomputed table; window must be 0");
    if (s.pattern == PatternId::P2 && !c.a_is_minus3())
        throw StrategyError("P2 needs a curve with a = -3");
}

JacobianPoint randomize_projective(const CurveParams& c, const JacobianPoint& P, const FieldElement& r,
                                   OpObserver* obs)
{
    if (r.is_zero())
        throw ContractViolation("projective randomizer must be nonzero");
    const Field f = c.field.with_observer(obs);
    const auto r2 = f.sqr(r);
    const auto r3 = f.mul(r2, r);
    return {f.mul(P.X, r2), f.mul(P.Y, r3), f.mul(P.Z, r)};
}

AffinePoint Isomorphism::undo(const AffinePoint& Q) const
{
    if (Q.infinity)
        return Q;
    const Field& f = curve.field;
    const auto ui = f.inv(u);
    const auto ui2 = f.sqr(ui);
    return {f.mul(Q.x, ui2), f.mul(Q.y, f.mul(ui2, ui)), false};
}

Isomorphism apply_curve_isomorphism(const CurveParams& c, const AffinePoint& P, const FieldElement& u)
{
    if (u.is_zero())
        throw ContractViolation("isomorphism parameter must be nonzero");
    const Field& f = c.field;
    const auto u2 = f.sqr(u);
    const auto u3 = f.mul(u2, u);
    const auto u4 = f.sqr(u2);
    const auto u6 = f.sqr(u3);
    auto map = [&](const AffinePoint& Q) {
        return Q.infinity ? Q : AffinePoint{f.mul(Q.x, u2), f.mul(Q.y, u3), false};
    };
    std::optional<std::pair<BigInt, BigInt>> g;
    if (c.g) {
        const auto G = map(*c.g);
        g = std::pair(G.x.value(), G.y.value());
    }
    auto curve = CurveParams::make(c.name + "~iso", c.p(), f.mul(u4, c.a).value(), f.mul(u6, c.b).value(), c.n, g);
    return {map(P), std::move(curve), u};
}

JacobianPoint jac_add_any(const CurveParams& c, const JacobianPoint& P, const JacobianPoint& Q, OpObserver* obs)
{
    if (P.is_infinity())
        return normalized(c, Q);
    if (Q.is_infinity())
        return P;
    if (jac_same_point(c, P, Q))
        return normalized(c, jac_double_general(c, P, obs));
    if (jac_opposite(c, P, Q))
        return jac_infinity(c);
    return normalized(c, jac_add_general(c, P, Q, obs));
}

std::vector<AffinePoint> precompute_odd_multiples(const CurveParams& c, const AffinePoint& P, unsigned count,
                                                  OpObserver* obs)
{
    std::vector<AffinePoint> out;
    if (count == 0)
        return out;
    const auto J = to_jacobian(c, P);
    const auto twoP = to_jacobian(c, to_affine(c, jac_add_any(c, J, J, obs), obs));
    JacobianPoint T = J;
    for (unsigned i = 0; i < count; ++i) {
        T = jac_add_any(c, T, twoP, obs);
        out.push_back(to_affine(c, T, obs));
    }
    return out;
}

AffinePoint mul_ltr_naf(const BigInt& k, const AffinePoint& P, const MulStrategy& s, const CurveParams& c,
                        RandomSource& rng, OpObserver* obs)
{
    if (s.direction != Direction::LeftToRight)
        throw StrategyError("mul_ltr_naf needs a left-to-right strategy");
    check_executable(s, c);
    check_inputs(k, P, c);

    enter_phase(obs, Phase::Unprotected);
    const NafDigits nd = window_naf_recode(k, s.window);
    const Blinding bl(s, c, P, rng);
    const CurveParams& cw = bl.curve(c);
    const Field fo = cw.field.with_observer(obs);
    const AffinePoint base = bl.base(P);
    const bool readd = s.pattern == PatternId::P2 || (!s.pattern && bl.r);

    // Index i holds digit 2i+1; negative digits use the second table.
    std::vector<TableEntry> pos, neg;
    std::vector<AffinePoint> odd{base};
    for (auto& T : precompute_odd_multiples(cw, base, s.window, obs))
        odd.push_back(std::move(T));
    for (const auto& T : odd) {
        TableEntry ep{T, {}}, en{T, {}};
        if (!T.infinity)
            en.affine.y = fo.neg(T.y);
        if (readd) {
            auto J = to_jacobian(cw, T);
            if (bl.r)
                J = randomize_projective(cw, J, *bl.r, obs);
            ep.cache = make_cache(cw, J, obs);
            en.cache = ep.cache;
            en.cache.point.Y = fo.neg(J.Y);
        }
        pos.push_back(std::move(ep));
        neg.push_back(std::move(en));
    }

    const AtomicProgram* dbl_prog = nullptr;
    const AtomicProgram* add_prog = nullptr;
    if (s.pattern == PatternId::P2) {
        dbl_prog = &catalog_program(CatalogOp::JacDoubleFast, PatternId::P2);
        add_prog = &catalog_program(CatalogOp::JacReadd, PatternId::P2);
    } else if (s.pattern == PatternId::P3) {
        dbl_prog = &catalog_program(CatalogOp::JacDoubleGeneral, PatternId::P3);
        add_prog = &catalog_program(CatalogOp::JacAddMixed, PatternId::P3);
    }
    const bool fast = cw.a_is_minus3();

    auto entry_jac = [&](const TableEntry& e) { return readd ? e.cache.point : to_jacobian(cw, e.affine); };

    const auto& digits = nd.digits;
    const int d0 = digits.front();
    JacobianPoint Q = entry_jac((d0 > 0 ? pos : neg)[static_cast<std::size_t>((std::abs(d0) - 1) / 2)]);
    Q = normalized(cw, Q);

    for (std::size_t i = 1; i < digits.size(); ++i) {
        if (!Q.is_infinity()) {
            enter_phase(obs, Phase::Protected);
            if (dbl_prog)
                Q = atomic_double(*dbl_prog, cw, Q, obs);
            else
                Q = fast ? jac_double_fast(cw, Q, obs) : jac_double_general(cw, Q, obs);
            Q = normalized(cw, Q);
        }
        const int d = digits[i];
        if (d == 0)
            continue;
        const TableEntry& T = (d > 0 ? pos : neg)[static_cast<std::size_t>((std::abs(d) - 1) / 2)];
        const JacobianPoint TJ = entry_jac(T);
        if (Q.is_infinity() || T.affine.infinity || jac_same_point(cw, Q, TJ) || jac_opposite(cw, Q, TJ)) {
            enter_phase(obs, Phase::Unprotected);
            Q = jac_add_any(cw, Q, TJ, obs);
            continue;
        }
        enter_phase(obs, Phase::Protected);
        if (add_prog)
            Q = readd ? atomic_readd(*add_prog, cw, T.cache, Q, obs) : atomic_add_mixed(*add_prog, cw, T.affine, Q, obs);
        else
            Q = readd ? jac_readd(cw, T.cache, Q, obs) : jac_add_mixed(cw, T.affine, Q, obs);
        Q = normalized(cw, Q);
    }

    enter_phase(obs, Phase::Unprotected);
    return bl.finish(to_affine(cw, Q, obs));
}

AffinePoint mul_rtl_mixed(const BigInt& k, const AffinePoint& P, const MulStrategy& s, const CurveParams& c,
                          RandomSource& rng, OpObserver* obs)
{
    if (s.direction != Direction::RightToLeft)
        throw StrategyError("mul_rtl_mixed needs a right-to-left strategy");
    check_executable(s, c);
    check_inputs(k, P, c);
    if (k == 1)
        return P;

    enter_phase(obs, Phase::Unprotected);
    const Blinding bl(s, c, P, rng);
    const CurveParams& cw = bl.curve(c);
    const Field fo = cw.field.with_observer(obs);
    JacobianPoint RJ = to_jacobian(cw, bl.base(P));
    if (bl.r)
        RJ = randomize_projective(cw, RJ, *bl.r, obs);
    ModJacobianPoint R = to_modjac(cw, RJ, obs);
    JacobianPoint acc = jac_infinity(cw);

    const AtomicProgram* dbl_prog = nullptr;
    const AtomicProgram* add_prog = nullptr;
    if (s.pattern) {
        dbl_prog = &catalog_program(CatalogOp::ModjacDouble, *s.pattern);
        add_prog = &catalog_program(CatalogOp::JacAddGeneral, *s.pattern);
    }

    auto accumulate = [&](const JacobianPoint& op) {
        if (acc.is_infinity() || op.is_infinity() || jac_same_point(cw, acc, op) || jac_opposite(cw, acc, op)) {
            enter_phase(obs, Phase::Unprotected);
            acc = jac_add_any(cw, acc, op, obs);
            return;
        }
        enter_phase(obs, Phase::Protected);
        acc = normalized(cw, add_prog ? atomic_add_general(*add_prog, cw, acc, op, obs)
                                      : jac_add_general(cw, acc, op, obs));
    };

    BigInt e = k;
    while (e > 1) {
        auto step = rtl_next_digit(e);
        if (step.u != 0) {
            enter_phase(obs, Phase::Unprotected);
            JacobianPoint op = R.jacobian();
            const auto flipped = fo.neg(op.Y); // always issued so the sign never shows in the trace
            if (step.u < 0)
                op.Y = flipped;
            accumulate(op);
        }
        e = std::move(step.k);
        if (!R.is_infinity()) {
            enter_phase(obs, Phase::Protected);
            R = normalized(cw, dbl_prog ? atomic_modjac_double(*dbl_prog, cw, R, obs) : modjac_double(cw, R, obs));
        }
    }
    accumulate(R.jacobian());

    enter_phase(obs, Phase::Unprotected);
    return bl.finish(to_affine(cw, acc, obs));
}

AffinePoint scalar_mul(const BigInt& k, const AffinePoint& P, const MulStrategy& s, const CurveParams& c,
                       RandomSource& rng, OpObserver* obs)
{
    if (s.direction == Direction::LeftToRight)
        return mul_ltr_naf(k, P, s, c, rng, obs);
    return mul_rtl_mixed(k, P, s, c, rng, obs);
}

} // namespace atomec
