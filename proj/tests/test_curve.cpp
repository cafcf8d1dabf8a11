#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "atomec/errors.hpp"
#include "atomec/formulas.hpp"

#include <cstdio>
#include <fstream>
#include <random>

using namespace atomec;

namespace {

// Chord-and-tangent on plain integers for p = 23; independent of the library's field code.
struct Small {
    long x, y;
    bool inf;
};

long md(long v, long p) { return ((v % p) + p) % p; }

long inv_small(long a, long p)
{
    for (long i = 1; i < p; ++i)
        if (md(a * i, p) == 1)
            return i;
    return 0;
}

Small small_add(Small P, Small Q, long a, long p)
{
    if (P.inf)
        return Q;
    if (Q.inf)
        return P;
    long lam;
    if (P.x == Q.x) {
        if (md(P.y + Q.y, p) == 0)
            return {0, 0, true};
        lam = md((3 * P.x * P.x + a) * inv_small(md(2 * P.y, p), p), p);
    } else {
        lam = md((Q.y - P.y) * inv_small(md(Q.x - P.x, p), p), p);
    }
    const long x = md(lam * lam - P.x - Q.x, p);
    return {x, md(lam * (P.x - x) - P.y, p), false};
}

Small small(const AffinePoint& P)
{
    if (P.infinity)
        return {0, 0, true};
    return {static_cast<long>(P.x.value()), static_cast<long>(P.y.value()), false};
}

bool same(const Small& a, const Small& b)
{
    return a.inf == b.inf && (a.inf || (a.x == b.x && a.y == b.y));
}

struct Census {
    std::uint64_t m, s, a, neg;
};

Census census(const OpCounter& c)
{
    return {c[FieldOp::Mul], c[FieldOp::Sqr], c.a_class(), c[FieldOp::Neg]};
}

JacobianPoint scaled(const CurveParams& c, const AffinePoint& P, long q)
{
    return to_jacobian(c, P, c.field.element(q));
}

} // namespace

TEST_CASE("affine group law against the integer oracle on toy23")
{
    const auto c = builtin_curve("toy23");
    const auto pts = all_points(c);
    CHECK(pts.size() == 27);
    for (const auto& P : pts) {
        CHECK(on_curve(c, P));
        CHECK(same(small(affine_double(c, P)), small_add(small(P), small(P), 1, 23)));
        for (const auto& Q : pts)
            REQUIRE(same(small(affine_add(c, P, Q)), small_add(small(P), small(Q), 1, 23)));
    }
}

TEST_CASE("textbook multiples of (3,10) on y^2 = x^3 + x + 1 mod 23")
{
    const auto c = builtin_curve("toy23");
    const auto P = make_affine(c, 3, 10);
    const auto P2 = affine_add(c, P, P);
    CHECK(P2 == make_affine(c, 7, 12));
    CHECK(affine_double(c, P) == P2);
    CHECK(affine_add(c, P2, P) == make_affine(c, 19, 5));
}

TEST_CASE("neutral element and opposites")
{
    const auto c = builtin_curve("toy23");
    const auto P = *c.g;
    const auto O = AffinePoint::at_infinity();
    CHECK(affine_add(c, P, O) == P);
    CHECK(affine_add(c, O, P) == P);
    CHECK(affine_add(c, P, affine_neg(c, P)).infinity);
    CHECK(affine_double(c, O).infinity);
}

TEST_CASE("doubling a point with y = 0 gives O")
{
    // y^2 = x^3 + x + 1 over 23 has a 2-torsion point iff the cubic has a root.
    const auto c = builtin_curve("toy23");
    bool found = false;
    for (const auto& P : all_points(c))
        if (P.y.is_zero()) {
            found = true;
            CHECK(affine_double(c, P).infinity);
        }
    CHECK(found);
}

TEST_CASE("builtin curves have generators of the stated order")
{
    for (const auto& name : builtin_curve_names()) {
        CAPTURE(name);
        const auto c = builtin_curve(name);
        REQUIRE(c.n);
        REQUIRE(c.g);
        CHECK(on_curve(c, *c.g));
        CHECK(affine_mul(c, *c.n, *c.g).infinity);
        CHECK(affine_mul(c, *c.n - 1, *c.g) == affine_neg(c, *c.g));
    }
    CHECK(builtin_curve("p192").a_is_minus3());
    CHECK(builtin_curve("p521").a_is_minus3());
    CHECK(builtin_curve("toy23m3").a_is_minus3());
    CHECK_FALSE(builtin_curve("toy23").a_is_minus3());
    CHECK(builtin_curve("p521").field.bits() == 521);
}

TEST_CASE("direct formula censuses")
{
    const auto c = builtin_curve("p192");
    std::mt19937_64 rng(5);
    const auto P = random_point(c, rng), Q = random_point(c, rng);
    const auto JP = scaled(c, P, 3), JQ = scaled(c, Q, 5);

    auto check = [](const OpCounter& cnt, std::uint64_t m, std::uint64_t s, std::uint64_t a) {
        const auto k = census(cnt);
        CHECK(k.m == m);
        CHECK(k.s == s);
        CHECK(k.a == a);
        CHECK(k.neg == 0);
        CHECK(cnt[FieldOp::Inv] == 0);
    };
    {
        OpCounter cnt;
        jac_add_general(c, JP, JQ, &cnt);
        check(cnt, 12, 4, 7);
    }
    {
        const auto cache = make_cache(c, JP);
        OpCounter cnt;
        jac_readd(c, cache, JQ, &cnt);
        check(cnt, 11, 3, 7);
    }
    {
        OpCounter cnt;
        jac_add_mixed(c, P, JQ, &cnt);
        check(cnt, 8, 3, 7);
    }
    {
        OpCounter cnt;
        jac_double_general(c, JP, &cnt);
        check(cnt, 4, 6, 11);
    }
    {
        OpCounter cnt;
        jac_double_fast(c, JP, &cnt);
        check(cnt, 4, 4, 12);
    }
    {
        const auto M = to_modjac(c, JP);
        OpCounter cnt;
        modjac_double(c, M, &cnt);
        check(cnt, 4, 4, 12);
    }
}

TEST_CASE("Jacobian formulas match the affine law on toy23 for every scale")
{
    const auto c = builtin_curve("toy23");
    const auto pts = all_points(c);
    for (const auto& P : pts) {
        for (long q : {1, 2, 3, 5}) {
            const auto JP = scaled(c, P, q);
            const auto dbl = affine_double(c, P);
            REQUIRE(to_affine(c, jac_double_general(c, JP)) == dbl);
            const auto M = modjac_double(c, to_modjac(c, JP));
            REQUIRE(w_consistent(c, M));
            REQUIRE(to_affine(c, M.jacobian()) == dbl);
            for (const auto& Q : pts) {
                if (Q == P || Q == affine_neg(c, P))
                    continue;
                const auto sum = affine_add(c, P, Q);
                const auto JQ = scaled(c, Q, 7 - q);
                REQUIRE(to_affine(c, jac_add_general(c, JP, JQ)) == sum);
                REQUIRE(to_affine(c, jac_readd(c, make_cache(c, JP), JQ)) == sum);
                REQUIRE(to_affine(c, jac_add_mixed(c, P, JQ)) == sum);
            }
        }
    }
}

TEST_CASE("fast doubling matches the affine law on the a = -3 toy curve")
{
    const auto c = builtin_curve("toy23m3");
    const auto pts = all_points(c);
    CHECK(pts.size() == 30);
    for (const auto& P : pts)
        for (long q : {1, 4, 9})
            REQUIRE(to_affine(c, jac_double_fast(c, scaled(c, P, q))) == affine_double(c, P));
}

TEST_CASE("fast doubling refuses a != -3")
{
    const auto c = builtin_curve("toy23");
    CHECK_THROWS_AS(jac_double_fast(c, to_jacobian(c, *c.g)), PreconditionError);
}

TEST_CASE("random P-192 cross-checks")
{
    const auto c = builtin_curve("p192");
    std::mt19937_64 rng(99);
    for (int i = 0; i < 1000; ++i) {
        const auto P = random_point(c, rng), Q = random_point(c, rng);
        const auto JP = to_jacobian(c, P, random_nonzero(c, rng));
        const auto JQ = to_jacobian(c, Q, random_nonzero(c, rng));
        const auto sum = to_affine(c, jac_add_general(c, JP, JQ));
        REQUIRE(to_affine(c, jac_readd(c, make_cache(c, JP), JQ)) == sum);
        REQUIRE(to_affine(c, jac_add_mixed(c, P, JQ)) == sum);
        REQUIRE(to_affine(c, jac_add_general(c, to_jacobian(c, P), JQ)) == sum);
        const auto dbl = to_affine(c, jac_double_general(c, JP));
        REQUIRE(to_affine(c, jac_double_fast(c, JP)) == dbl);
        const auto M = modjac_double(c, to_modjac(c, JP));
        REQUIRE(M.W == c.field.mul(c.a, c.field.sqr(c.field.sqr(M.Z))));
        REQUIRE(to_affine(c, M.jacobian()) == dbl);
    }
    CHECK(affine_add(c, affine_add(c, affine_double(c, *c.g), *c.g), *c.g) ==
          to_affine(c, jac_double_general(c, jac_double_general(c, to_jacobian(c, *c.g)))));
}

TEST_CASE("readdition from a Z = 1 cache equals mixed addition")
{
    const auto c = builtin_curve("p192");
    std::mt19937_64 rng(3);
    const auto P = random_point(c, rng), Q = random_point(c, rng);
    const auto JQ = to_jacobian(c, Q, random_nonzero(c, rng));
    const auto cache = make_cache(c, to_jacobian(c, P));
    CHECK(cache.zz == c.field.one());
    CHECK(cache.zzz == c.field.one());
    const auto r1 = jac_readd(c, cache, JQ), r2 = jac_add_mixed(c, P, JQ);
    CHECK(jac_same_point(c, r1, r2));
}

TEST_CASE("special cases are refused by the formulas")
{
    const auto c = builtin_curve("toy23");
    const auto P = to_jacobian(c, *c.g, c.field.element(2));
    const auto O = jac_infinity(c);
    auto kind = [](auto&& f) {
        try {
            f();
        } catch (const SpecialCase& e) {
            return static_cast<int>(e.kind);
        }
        return -1;
    };
    CHECK(kind([&] { jac_add_general(c, P, O); }) == static_cast<int>(SpecialKind::OperandAtInfinity));
    CHECK(kind([&] { jac_add_general(c, P, to_jacobian(c, *c.g)); }) == static_cast<int>(SpecialKind::EqualPoints));
    CHECK(kind([&] { jac_add_general(c, P, jac_neg(c, P)); }) == static_cast<int>(SpecialKind::OppositePoints));
    CHECK(kind([&] { jac_add_mixed(c, affine_neg(c, *c.g), P); }) == static_cast<int>(SpecialKind::OppositePoints));
    CHECK(kind([&] { jac_double_general(c, O); }) == static_cast<int>(SpecialKind::OperandAtInfinity));
}

TEST_CASE("coordinate conversions")
{
    const auto c = builtin_curve("p256");
    const auto O = jac_infinity(c);
    CHECK(O.X == c.field.one());
    CHECK(O.Y == c.field.one());
    CHECK(O.Z.is_zero());
    CHECK(to_affine(c, O).infinity);
    const auto G = *c.g;
    const auto J1 = to_jacobian(c, G);
    CHECK(J1.X == G.x);
    CHECK(J1.Y == G.y);
    CHECK(to_affine(c, J1) == G);
    CHECK(to_affine(c, to_jacobian(c, G, c.field.element(7))) == G);
    CHECK(on_curve(c, to_jacobian(c, G, c.field.element(7))));
    OpCounter cnt;
    to_affine(c, to_jacobian(c, G, c.field.element(7)), &cnt);
    CHECK(cnt[FieldOp::Inv] == 1);
    CHECK(cnt[FieldOp::Sqr] == 1);
    CHECK(cnt[FieldOp::Mul] == 3);
    CHECK(w_consistent(c, to_modjac(c, to_jacobian(c, G, c.field.element(11)))));
}

TEST_CASE("squaring trade-off break-even")
{
    CHECK(sm_tradeoff_breakeven(0.8, 3) == doctest::Approx(0.0667).epsilon(0.001));
    CHECK(sm_tradeoff_breakeven(1.0, 3) == doctest::Approx(0.0));
    CHECK(sm_tradeoff_breakeven(0.8, 1) == doctest::Approx(0.2));
    CHECK_THROWS(sm_tradeoff_breakeven(0.8, 0));
}

TEST_CASE("curve parameter validation")
{
    CHECK_THROWS_AS(CurveParams::make("sing", 23, 0, 0), ContractViolation);
    CHECK_THROWS_AS(CurveParams::make("offcurve", 23, 1, 1, 28, std::pair<BigInt, BigInt>(3, 11)), ContractViolation);
    CHECK_NOTHROW(CurveParams::make("ok", 23, 1, 1, 28, std::pair<BigInt, BigInt>(3, 10)));
}

TEST_CASE("curve files")
{
    const std::string good = "# small test curve\nname = tiny\np = 11\na = 2\nb = 2\nn = 13\ngx = 5\ngy = 1\n"; // hex: p = 17, n = 19
    const auto c = parse_curve_text(good);
    CHECK(c.name == "tiny");
    CHECK(c.p() == 17);
    CHECK(on_curve(c, *c.g));
    CHECK(affine_mul(c, *c.n, *c.g).infinity);

    auto line_of = [](const std::string& text) {
        try {
            parse_curve_text(text);
        } catch (const ParseError& e) {
            return std::string(e.what());
        }
        return std::string("no error");
    };
    CHECK(line_of("p=17\na=2\nb=2\ncolour=red\n").find("line 4") != std::string::npos);
    CHECK(line_of("p=17\np=17\na=2\nb=2\n").find("duplicate") != std::string::npos);
    CHECK(line_of("p=17\na=2\n").find("missing") != std::string::npos);
    CHECK(line_of("p=17\na=2\nb=2\ngx=5\n").find("together") != std::string::npos);
    CHECK(line_of("p=17\na=2\nb=2\njunk\n").find("line 4") != std::string::npos);
    CHECK_THROWS_AS(parse_curve_text("p=17\na=2\nb=2\ngx=5\ngy=2\n"), ContractViolation);

    const std::string path = "test_curve_file.txt";
    {
        std::ofstream f(path);
        f << good;
    }
    CHECK(resolve_curve(path).name == "tiny");
    CHECK(resolve_curve("p224").name == "p224");
    std::remove(path.c_str());
    CHECK_THROWS_AS(resolve_curve("no-such-curve-or-file"), ParseError);
}
