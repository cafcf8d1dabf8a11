#include "atomec/formulas.hpp"

#include "atomec/errors.hpp"

namespace atomec {

namespace {

#ifdef ATOMEC_CHECK_INVARIANTS
void post_check(const CurveParams& c, const JacobianPoint& R, const char* who)
{
    if (!on_curve(c, R))
        throw ContractViolation(std::string(who) + ": result left the curve");
}
#else
void post_check(const CurveParams&, const JacobianPoint&, const char*) {}
#endif

void require_finite(const JacobianPoint& P, const char* who)
{
    if (P.is_infinity())
        throw SpecialCase(SpecialKind::OperandAtInfinity, std::string(who) + ": operand is O");
}

// Shared tail of the addition once A, C, E, F are known; z3 is the Z-product without E.
JacobianPoint add_tail(const Field& f, const FieldElement& A, const FieldElement& C, const FieldElement& E,
                       const FieldElement& F, const FieldElement* z1, const FieldElement& z2, const char* who)
{
    if (E.is_zero()) {
        if (F.is_zero())
            throw SpecialCase(SpecialKind::EqualPoints, std::string(who) + ": P = Q");
        throw SpecialCase(SpecialKind::OppositePoints, std::string(who) + ": P = -Q");
    }
    auto E2 = f.sqr(E);
    auto E3 = f.mul(E2, E);
    auto AE2 = f.mul(A, E2);
    auto F2 = f.sqr(F);
    auto t = f.sub(F2, E3);
    auto X3 = f.sub(t, f.add(AE2, AE2));
    auto Y3 = f.sub(f.mul(F, f.sub(AE2, X3)), f.mul(C, E3));
    auto Z3 = z1 ? f.mul(f.mul(*z1, z2), E) : f.mul(z2, E);
    return {X3, Y3, Z3};
}

} // namespace

AffinePoint affine_add(const CurveParams& c, const AffinePoint& P, const AffinePoint& Q)
{
    if (P.infinity)
        return Q;
    if (Q.infinity)
        return P;
    const Field& f = c.field;
    if (P.x == Q.x) {
        if (f.add(P.y, Q.y).is_zero())
            return AffinePoint::at_infinity();
        return affine_double(c, P);
    }
    auto lambda = f.mul(f.sub(Q.y, P.y), f.inv(f.sub(Q.x, P.x)));
    auto x3 = f.sub(f.sub(f.sqr(lambda), P.x), Q.x);
    auto y3 = f.sub(f.mul(f.sub(P.x, x3), lambda), P.y);
    return {x3, y3, false};
}

AffinePoint affine_double(const CurveParams& c, const AffinePoint& P)
{
    if (P.infinity || P.y.is_zero())
        return AffinePoint::at_infinity();
    const Field& f = c.field;
    auto x2 = f.sqr(P.x);
    auto num = f.add(f.add(f.add(x2, x2), x2), c.a);
    auto lambda = f.mul(num, f.inv(f.add(P.y, P.y)));
    auto xr = f.sub(f.sqr(lambda), f.add(P.x, P.x));
    auto yr = f.sub(f.mul(f.sub(P.x, xr), lambda), P.y);
    return {xr, yr, false};
}

AffinePoint affine_mul(const CurveParams& c, const BigInt& k, const AffinePoint& P)
{
    BigInt e = k;
    AffinePoint base = P;
    if (e < 0) {
        e = -e;
        base = affine_neg(c, base);
    }
    AffinePoint acc = AffinePoint::at_infinity();
    while (e != 0) {
        if ((e & 1) != 0)
            acc = affine_add(c, acc, base);
        base = affine_double(c, base);
        e >>= 1;
    }
    return acc;
}

JacobianPoint jac_add_general(const CurveParams& c, const JacobianPoint& P, const JacobianPoint& Q,
                              OpObserver* obs)
{
    require_finite(P, "jac_add_general");
    require_finite(Q, "jac_add_general");
    Field f = c.field.with_observer(obs);
    auto zz2 = f.sqr(Q.Z);
    auto zz1 = f.sqr(P.Z);
    auto A = f.mul(P.X, zz2);
    auto B = f.mul(Q.X, zz1);
    auto C = f.mul(P.Y, f.mul(zz2, Q.Z));
    auto D = f.mul(Q.Y, f.mul(zz1, P.Z));
    auto E = f.sub(B, A);
    auto F = f.sub(D, C);
    auto R = add_tail(f, A, C, E, F, &P.Z, Q.Z, "jac_add_general");
    post_check(c, R, "jac_add_general");
    return R;
}

JacobianPoint jac_readd(const CurveParams& c, const ReadditionCache& P, const JacobianPoint& Q, OpObserver* obs)
{
    require_finite(P.point, "jac_readd");
    require_finite(Q, "jac_readd");
    Field f = c.field.with_observer(obs);
    auto zz2 = f.sqr(Q.Z);
    auto A = f.mul(P.point.X, zz2);
    auto B = f.mul(Q.X, P.zz);
    auto C = f.mul(P.point.Y, f.mul(zz2, Q.Z));
    auto D = f.mul(Q.Y, P.zzz);
    auto E = f.sub(B, A);
    auto F = f.sub(D, C);
    auto R = add_tail(f, A, C, E, F, &P.point.Z, Q.Z, "jac_readd");
    post_check(c, R, "jac_readd");
    return R;
}

JacobianPoint jac_add_mixed(const CurveParams& c, const AffinePoint& P, const JacobianPoint& Q, OpObserver* obs)
{
    if (P.infinity)
        throw SpecialCase(SpecialKind::OperandAtInfinity, "jac_add_mixed: operand is O");
    require_finite(Q, "jac_add_mixed");
    Field f = c.field.with_observer(obs);
    auto zz2 = f.sqr(Q.Z);
    auto A = f.mul(P.x, zz2);
    auto C = f.mul(P.y, f.mul(zz2, Q.Z));
    auto E = f.sub(Q.X, A);
    auto F = f.sub(Q.Y, C);
    auto R = add_tail(f, A, C, E, F, nullptr, Q.Z, "jac_add_mixed");
    post_check(c, R, "jac_add_mixed");
    return R;
}

namespace {

// Doubling given C; A = 2Y^2, B = 2AX.
JacobianPoint double_tail(const Field& f, const JacobianPoint& P, const FieldElement& C)
{
    auto A = f.sqr(P.Y);
    A = f.add(A, A);
    auto B = f.mul(f.add(A, A), P.X);
    auto X2 = f.sub(f.sqr(C), f.add(B, B));
    auto AA = f.sqr(A);
    auto Y2 = f.sub(f.mul(C, f.sub(B, X2)), f.add(AA, AA));
    auto yz = f.mul(P.Y, P.Z);
    return {X2, Y2, f.add(yz, yz)};
}

} // namespace

JacobianPoint jac_double_general(const CurveParams& c, const JacobianPoint& P, OpObserver* obs)
{
    require_finite(P, "jac_double_general");
    Field f = c.field.with_observer(obs);
    auto x2 = f.sqr(P.X);
    auto x3 = f.add(f.add(x2, x2), x2);
    auto z4 = f.sqr(f.sqr(P.Z));
    auto C = f.add(x3, f.mul(c.a, z4));
    auto R = double_tail(f, P, C);
    post_check(c, R, "jac_double_general");
    return R;
}

JacobianPoint jac_double_fast(const CurveParams& c, const JacobianPoint& P, OpObserver* obs)
{
    if (!c.a_is_minus3())
        throw PreconditionError("fast doubling requires a = -3");
    require_finite(P, "jac_double_fast");
    Field f = c.field.with_observer(obs);
    auto z2 = f.sqr(P.Z);
    auto m = f.mul(f.add(P.X, z2), f.sub(P.X, z2));
    auto C = f.add(f.add(m, m), m);
    auto R = double_tail(f, P, C);
    post_check(c, R, "jac_double_fast");
    return R;
}

ModJacobianPoint modjac_double(const CurveParams& c, const ModJacobianPoint& P, OpObserver* obs)
{
    if (P.is_infinity())
        throw SpecialCase(SpecialKind::OperandAtInfinity, "modjac_double: operand is O");
    Field f = c.field.with_observer(obs);
    auto x2 = f.sqr(P.X);
    auto A = f.add(f.add(f.add(x2, x2), x2), P.W);
    auto B = f.sqr(P.Y);
    B = f.add(B, B);
    auto C = f.mul(f.add(B, B), P.X);
    auto D = f.sqr(B);
    D = f.add(D, D);
    auto X2 = f.sub(f.sqr(A), f.add(C, C));
    auto Y2 = f.sub(f.mul(A, f.sub(C, X2)), D);
    auto yz = f.mul(P.Y, P.Z);
    auto Z2 = f.add(yz, yz);
    auto W2 = f.mul(f.add(D, D), P.W);
    ModJacobianPoint R{X2, Y2, Z2, W2};
    post_check(c, R.jacobian(), "modjac_double");
    return R;
}

} // namespace atomec
