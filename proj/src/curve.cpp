#include "atomec/curve.hpp"

#include "atomec/errors.hpp"

#include <fstream>
#include <map>
#include <sstream>

namespace atomec {

bool operator==(const AffinePoint& a, const AffinePoint& b)
{
    if (a.infinity || b.infinity)
        return a.infinity == b.infinity;
    return a.x == b.x && a.y == b.y;
}

CurveParams CurveParams::make(std::string name, const BigInt& p, const BigInt& a, const BigInt& b,
                              std::optional<BigInt> n, std::optional<std::pair<BigInt, BigInt>> g)
{
    if (p <= 3)
        throw ContractViolation("curve prime must exceed 3");
    Field f(p);
    CurveParams c{std::move(name), f, f.element(a), f.element(b), std::move(n), std::nullopt};
    // 4a^3 + 27b^2 != 0
    BigInt disc = (4 * c.a.value() * c.a.value() * c.a.value() + 27 * c.b.value() * c.b.value()) % p;
    if (disc == 0)
        throw ContractViolation("singular curve: 4a^3 + 27b^2 = 0 mod p");
    if (c.n && *c.n <= 0)
        throw ContractViolation("group order must be positive");
    if (g) {
        AffinePoint G{f.element(g->first), f.element(g->second), false};
        if (g->first >= p || g->second >= p || !on_curve(c, G))
            throw ContractViolation("base point is not on the curve");
        c.g = G;
    }
    return c;
}

bool CurveParams::a_is_minus3() const
{
    return a.value() == p() - 3;
}

bool on_curve(const CurveParams& c, const AffinePoint& P)
{
    if (P.infinity)
        return true;
    const Field& f = c.field;
    if (!f.owns(P.x) || !f.owns(P.y))
        return false;
    auto lhs = f.sqr(P.y);
    auto rhs = f.add(f.mul(f.add(f.sqr(P.x), c.a), P.x), c.b);
    return lhs == rhs;
}

bool on_curve(const CurveParams& c, const JacobianPoint& P)
{
    const Field& f = c.field;
    if (!f.owns(P.X) || !f.owns(P.Y) || !f.owns(P.Z))
        return false;
    if (P.is_infinity())
        return true;
    auto z2 = f.sqr(P.Z);
    auto z4 = f.sqr(z2);
    auto z6 = f.mul(z4, z2);
    auto rhs = f.add(f.add(f.mul(f.sqr(P.X), P.X), f.mul(f.mul(c.a, P.X), z4)), f.mul(c.b, z6));
    return f.sqr(P.Y) == rhs;
}

bool w_consistent(const CurveParams& c, const ModJacobianPoint& P)
{
    const Field& f = c.field;
    return P.W == f.mul(c.a, f.sqr(f.sqr(P.Z)));
}

AffinePoint make_affine(const CurveParams& c, const BigInt& x, const BigInt& y)
{
    return AffinePoint{c.field.element(x), c.field.element(y), false};
}

AffinePoint affine_neg(const CurveParams& c, const AffinePoint& P)
{
    if (P.infinity)
        return P;
    return AffinePoint{P.x, c.field.element(c.p() - P.y.value()), false};
}

JacobianPoint jac_infinity(const CurveParams& c)
{
    return {c.field.one(), c.field.one(), c.field.zero()};
}

JacobianPoint to_jacobian(const CurveParams& c, const AffinePoint& P, const FieldElement& q)
{
    if (P.infinity)
        return jac_infinity(c);
    const Field& f = c.field;
    if (q.is_zero())
        throw ContractViolation("projective scale must be nonzero");
    auto q2 = f.sqr(q);
    return {f.mul(q2, P.x), f.mul(f.mul(q2, q), P.y), q};
}

JacobianPoint to_jacobian(const CurveParams& c, const AffinePoint& P)
{
    if (P.infinity)
        return jac_infinity(c);
    return {P.x, P.y, c.field.one()};
}

AffinePoint to_affine(const CurveParams& c, const JacobianPoint& P, OpObserver* obs)
{
    if (P.is_infinity())
        return AffinePoint::at_infinity();
    Field f = c.field.with_observer(obs);
    auto zi = f.inv(P.Z);
    auto zi2 = f.sqr(zi);
    auto zi3 = f.mul(zi2, zi);
    return AffinePoint{f.mul(P.X, zi2), f.mul(P.Y, zi3), false};
}

JacobianPoint jac_neg(const CurveParams& c, const JacobianPoint& P)
{
    return {P.X, c.field.element(c.p() - P.Y.value()), P.Z};
}

bool jac_same_point(const CurveParams& c, const JacobianPoint& P, const JacobianPoint& Q)
{
    if (P.is_infinity() || Q.is_infinity())
        return P.is_infinity() && Q.is_infinity();
    const Field& f = c.field;
    auto pz2 = f.sqr(P.Z), qz2 = f.sqr(Q.Z);
    if (f.mul(P.X, qz2) != f.mul(Q.X, pz2))
        return false;
    return f.mul(P.Y, f.mul(qz2, Q.Z)) == f.mul(Q.Y, f.mul(pz2, P.Z));
}

bool jac_opposite(const CurveParams& c, const JacobianPoint& P, const JacobianPoint& Q)
{
    return jac_same_point(c, P, jac_neg(c, Q));
}

ModJacobianPoint to_modjac(const CurveParams& c, const JacobianPoint& P, OpObserver* obs)
{
    Field f = c.field.with_observer(obs);
    auto z4 = f.sqr(f.sqr(P.Z));
    return {P.X, P.Y, P.Z, f.mul(c.a, z4)};
}

ReadditionCache make_cache(const CurveParams& c, const JacobianPoint& P, OpObserver* obs)
{
    Field f = c.field.with_observer(obs);
    auto zz = f.sqr(P.Z);
    return {P, zz, f.mul(zz, P.Z)};
}

BigInt random_below(std::mt19937_64& rng, const BigInt& bound)
{
    if (bound <= 0)
        throw ContractViolation("random bound must be positive");
    unsigned bits = bit_length(bound);
    unsigned words = (bits + 63) / 64;
    for (;;) {
        BigInt v = 0;
        for (unsigned i = 0; i < words; ++i)
            v = (v << 64) | BigInt(rng());
        unsigned extra = words * 64 - bits;
        v >>= extra;
        if (v < bound)
            return v;
    }
}

FieldElement random_nonzero(const CurveParams& c, std::mt19937_64& rng)
{
    return c.field.element(random_below(rng, c.p() - 1) + 1);
}

AffinePoint random_point(const CurveParams& c, std::mt19937_64& rng)
{
    const Field& f = c.field;
    for (;;) {
        auto x = f.element(random_below(rng, c.p()));
        auto rhs = f.add(f.mul(f.add(f.sqr(x), c.a), x), c.b);
        FieldElement y;
        if (!f.sqrt(rhs, y))
            continue;
        if (rng() & 1)
            y = f.neg(y);
        return AffinePoint{x, y, false};
    }
}

std::vector<AffinePoint> all_points(const CurveParams& c)
{
    if (c.p() > 100000)
        throw ContractViolation("point enumeration only for small primes");
    std::vector<AffinePoint> out;
    const Field& f = c.field;
    for (BigInt x = 0; x < c.p(); ++x) {
        auto fx = f.element(x);
        auto rhs = f.add(f.mul(f.add(f.sqr(fx), c.a), fx), c.b);
        for (BigInt y = 0; y < c.p(); ++y) {
            auto fy = f.element(y);
            if (f.sqr(fy) == rhs)
                out.push_back({fx, fy, false});
        }
    }
    return out;
}

double sm_tradeoff_breakeven(double s_over_m, unsigned extra_adds)
{
    if (extra_adds == 0)
        throw ContractViolation("extra_adds must be at least 1");
    if (!(s_over_m > 0.0) || s_over_m > 1.0)
        throw ContractViolation("s_over_m must lie in (0, 1]");
    return (1.0 - s_over_m) / extra_adds;
}

namespace {

struct Builtin {
    const char* name;
    const char* p;
    const char* a; // empty: p - 3
    const char* b;
    const char* n;
    const char* gx;
    const char* gy;
};

// FIPS 186-3 prime curves plus two toy curves over F_23.
const Builtin kBuiltins[] = {
    {"p192", "fffffffffffffffffffffffffffffffeffffffffffffffff", "",
     "64210519e59c80e70fa7e9ab72243049feb8deecc146b9b1", "ffffffffffffffffffffffff99def836146bc9b1b4d22831",
     "188da80eb03090f67cbf20eb43a18800f4ff0afd82ff1012", "07192b95ffc8da78631011ed6b24cdd573f977a11e794811"},
    {"p224", "ffffffffffffffffffffffffffffffff000000000000000000000001", "",
     "b4050a850c04b3abf54132565044b0b7d7bfd8ba270b39432355ffb4",
     "ffffffffffffffffffffffffffff16a2e0b8f03e13dd29455c5c2a3d",
     "b70e0cbd6bb4bf7f321390b94a03c1d356c21122343280d6115c1d21",
     "bd376388b5f723fb4c22dfe6cd4375a05a07476444d5819985007e34"},
    {"p256", "ffffffff00000001000000000000000000000000ffffffffffffffffffffffff", "",
     "5ac635d8aa3a93e7b3ebbd55769886bc651d06b0cc53b0f63bce3c3e27d2604b",
     "ffffffff00000000ffffffffffffffffbce6faada7179e84f3b9cac2fc632551",
     "6b17d1f2e12c4247f8bce6e563a440f277037d812deb33a0f4a13945d898c296",
     "4fe342e2fe1a7f9b8ee7eb4a7c0f9e162bce33576b315ececbb6406837bf51f5"},
    {"p384",
     "fffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffeffffffff0000000000000000ffffffff", "",
     "b3312fa7e23ee7e4988e056be3f82d19181d9c6efe8141120314088f5013875ac656398d8a2ed19d2a85c8edd3ec2aef",
     "ffffffffffffffffffffffffffffffffffffffffffffffffc7634d81f4372ddf581a0db248b0a77aecec196accc52973",
     "aa87ca22be8b05378eb1c71ef320ad746e1d3b628ba79b9859f741e082542a385502f25dbf55296c3a545e3872760ab7",
     "3617de4a96262c6f5d9e98bf9292dc29f8f41dbd289a147ce9da3113b5f0b8c00a60b1ce1d7e819d7a431d7c90ea0e5f"},
    {"p521",
     "1fffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffff"
     "fffffffffffffffffffffffffffffffff",
     "",
     "0051953eb9618e1c9a1f929a21a0b68540eea2da725b99b315f3b8b489918ef109e156193951ec7e937b1652c0bd3bb1bf"
     "073573df883d2c34f1ef451fd46b503f00",
     "1fffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffa51868783bf2f966b7fcc0148f709a5d"
     "03bb5c9b8899c47aebb6fb71e91386409",
     "00c6858e06b70404e9cd9e3ecb662395b4429c648139053fb521f828af606b4d3dbaa14b5e77efe75928fe1dc127a2ffa8"
     "de3348b3c1856a429bf97e7e31c2e5bd66",
     "011839296a789a3bc0045c8a5fb42c7d1bd998f54449579b446817afbd17273e662c97ee72995ef42640c550b9013fad07"
     "61353c7086a272c24088be94769fd16650"},
    {"toy23", "17", "1", "1", "1c", "3", "a"},
    {"toy23m3", "17", "14", "8", "1f", "0", "a"},
};

CurveParams from_builtin(const Builtin& b)
{
    BigInt p = parse_hex(b.p);
    BigInt a = *b.a ? parse_hex(b.a) : p - 3;
    return CurveParams::make(b.name, p, a, parse_hex(b.b), parse_hex(b.n),
                             std::make_pair(parse_hex(b.gx), parse_hex(b.gy)));
}

std::string trim(const std::string& s)
{
    auto lo = s.find_first_not_of(" \t\r");
    if (lo == std::string::npos)
        return "";
    auto hi = s.find_last_not_of(" \t\r");
    return s.substr(lo, hi - lo + 1);
}

} // namespace

CurveParams builtin_curve(const std::string& name)
{
    for (const auto& b : kBuiltins)
        if (name == b.name)
            return from_builtin(b);
    throw ContractViolation("unknown builtin curve '" + name + "'");
}

std::vector<std::string> builtin_curve_names()
{
    std::vector<std::string> out;
    for (const auto& b : kBuiltins)
        out.emplace_back(b.name);
    return out;
}

CurveParams parse_curve_text(const std::string& text)
{
    static const char* keys[] = {"name", "p", "a", "b", "n", "gx", "gy"};
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#')
            continue;
        auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ParseError("line " + std::to_string(lineno) + ": expected key=value");
        std::string k = trim(t.substr(0, eq));
        std::string v = trim(t.substr(eq + 1));
        bool known = false;
        for (auto* key : keys)
            known = known || k == key;
        if (!known)
            throw ParseError("line " + std::to_string(lineno) + ": unknown key '" + k + "'");
        if (kv.count(k))
            throw ParseError("line " + std::to_string(lineno) + ": duplicate key '" + k + "'");
        kv[k] = v;
    }
    for (auto* req : {"p", "a", "b"})
        if (!kv.count(req))
            throw ParseError(std::string("missing key '") + req + "'");
    if (kv.count("gx") != kv.count("gy"))
        throw ParseError("gx and gy must be given together");
    std::optional<BigInt> n;
    if (kv.count("n"))
        n = parse_hex(kv["n"]);
    std::optional<std::pair<BigInt, BigInt>> g;
    if (kv.count("gx"))
        g = std::make_pair(parse_hex(kv["gx"]), parse_hex(kv["gy"]));
    BigInt p = parse_hex(kv["p"]);
    BigInt a = parse_hex(kv["a"]);
    BigInt b = parse_hex(kv["b"]);
    if (a >= p || b >= p)
        throw ParseError("coefficients must be reduced modulo p");
    return CurveParams::make(kv.count("name") ? kv["name"] : "custom", p, a, b, n, g);
}

CurveParams load_curve_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ParseError("cannot open curve file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_curve_text(ss.str());
}

CurveParams resolve_curve(const std::string& name_or_path)
{
    for (const auto& b : kBuiltins)
        if (name_or_path == b.name)
            return from_builtin(b);
    return load_curve_file(name_or_path);
}

} // namespace atomec
