#pragma once

#include "atomec/field.hpp"

#include <optional>
#include <random>
#include <string>
#include <vector>

namespace atomec {

struct AffinePoint {
    FieldElement x, y;
    bool infinity = false;

    static AffinePoint at_infinity()
    {
        AffinePoint p;
        p.infinity = true;
        return p;
    }
};

bool operator==(const AffinePoint& a, const AffinePoint& b);
inline bool operator!=(const AffinePoint& a, const AffinePoint& b) { return !(a == b); }

// Z = 0 means O; canonical form (1:1:0).
struct JacobianPoint {
    FieldElement X, Y, Z;
    bool is_infinity() const { return Z.is_zero(); }
};

// W = a*Z^4
struct ModJacobianPoint {
    FieldElement X, Y, Z, W;
    JacobianPoint jacobian() const { return {X, Y, Z}; }
    bool is_infinity() const { return Z.is_zero(); }
};

struct ReadditionCache {
    JacobianPoint point;
    FieldElement zz;  // Z^2
    FieldElement zzz; // Z^3
};

struct CurveParams {
    std::string name;
    Field field;
    FieldElement a, b;
    std::optional<BigInt> n;
    std::optional<AffinePoint> g;

    // Validates p > 3, the discriminant, and that g (if given) is on the curve.
    static CurveParams make(std::string name, const BigInt& p, const BigInt& a, const BigInt& b,
                            std::optional<BigInt> n = std::nullopt,
                            std::optional<std::pair<BigInt, BigInt>> g = std::nullopt);

    const BigInt& p() const { return field.p(); }
    bool a_is_minus3() const;
};

bool on_curve(const CurveParams& c, const AffinePoint& P);
// Y^2 = X^3 + aXZ^4 + bZ^6; O counts as on the curve.
bool on_curve(const CurveParams& c, const JacobianPoint& P);
bool w_consistent(const CurveParams& c, const ModJacobianPoint& P);

AffinePoint make_affine(const CurveParams& c, const BigInt& x, const BigInt& y);
AffinePoint affine_neg(const CurveParams& c, const AffinePoint& P);

JacobianPoint jac_infinity(const CurveParams& c);
// (q^2 x : q^3 y : q); O maps to (1:1:0).
JacobianPoint to_jacobian(const CurveParams& c, const AffinePoint& P, const FieldElement& q);
JacobianPoint to_jacobian(const CurveParams& c, const AffinePoint& P);
AffinePoint to_affine(const CurveParams& c, const JacobianPoint& P, OpObserver* obs = nullptr);
JacobianPoint jac_neg(const CurveParams& c, const JacobianPoint& P);
// Same class in P^2 weighted (2,3,1); both O compares equal.
bool jac_same_point(const CurveParams& c, const JacobianPoint& P, const JacobianPoint& Q);
bool jac_opposite(const CurveParams& c, const JacobianPoint& P, const JacobianPoint& Q);

ModJacobianPoint to_modjac(const CurveParams& c, const JacobianPoint& P, OpObserver* obs = nullptr);
ReadditionCache make_cache(const CurveParams& c, const JacobianPoint& P, OpObserver* obs = nullptr);

// Uniform in [0, bound) by rejection sampling.
BigInt random_below(std::mt19937_64& rng, const BigInt& bound);
FieldElement random_nonzero(const CurveParams& c, std::mt19937_64& rng);
AffinePoint random_point(const CurveParams& c, std::mt19937_64& rng);
// Every affine point (excluding O); only for small p.
std::vector<AffinePoint> all_points(const CurveParams& c);

// A/M threshold below which trading one MUL for one SQR plus extra_adds additions pays off.
double sm_tradeoff_breakeven(double s_over_m, unsigned extra_adds);

// Builtins: p192 p224 p256 p384 p521 toy23 toy23m3
CurveParams builtin_curve(const std::string& name);
std::vector<std::string> builtin_curve_names();

// key=value lines, keys {name,p,a,b,n,gx,gy}, hex values, '#' comments.
CurveParams parse_curve_text(const std::string& text);
CurveParams load_curve_file(const std::string& path);
// Builtin name first, then file path.
CurveParams resolve_curve(const std::string& name_or_path);

} // namespace atomec
