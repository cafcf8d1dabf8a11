#pragma once

#include "atomec/atomic.hpp"
#include "atomec/curve.hpp"

#include <optional>
#include <random>
#include <string>
#include <vector>

namespace atomec {

enum class Direction : std::uint8_t { LeftToRight, RightToLeft };
enum class Countermeasure : std::uint8_t { None, Projective, Isomorphism };

std::string_view countermeasure_name(Countermeasure cm);
bool parse_countermeasure(std::string_view text, Countermeasure& out);

struct MulStrategy {
    Direction direction = Direction::RightToLeft;
    std::optional<PatternId> pattern; // empty: direct formulas, no atomicity
    unsigned window = 0;              // precomputed odd multiples, 0..4
    Countermeasure countermeasure = Countermeasure::None;

    std::string name() const;
};

// ltr-naf-plain, rtl-plain, ltr-p2, ltr-p3, rtl-p1, rtl-p4
MulStrategy parse_strategy(std::string_view name);
std::vector<std::string> strategy_names();

// Pattern/direction/countermeasure/window rules; throws StrategyError.
void check_strategy(const MulStrategy& s);
// check_strategy plus what execution on `c` needs (a = -3 for fast doubling, rtl window 0).
void check_executable(const MulStrategy& s, const CurveParams& c);

class RandomSource {
public:
    explicit RandomSource(std::uint64_t seed) : eng_(seed) {}
    FieldElement nonzero(const CurveParams& c) { return random_nonzero(c, eng_); }
    std::mt19937_64& engine() { return eng_; }

private:
    std::mt19937_64 eng_;
};

JacobianPoint randomize_projective(const CurveParams& c, const JacobianPoint& P, const FieldElement& r,
                                   OpObserver* obs = nullptr);

struct Isomorphism {
    AffinePoint point;  // (u^2 x, u^3 y)
    CurveParams curve;  // a' = u^4 a, b' = u^6 b
    FieldElement u;

    AffinePoint undo(const AffinePoint& Q) const;
};

Isomorphism apply_curve_isomorphism(const CurveParams& c, const AffinePoint& P, const FieldElement& u);

// {3P, 5P, ..., (2*count+1)P}
std::vector<AffinePoint> precompute_odd_multiples(const CurveParams& c, const AffinePoint& P, unsigned count,
                                                  OpObserver* obs = nullptr);

// Jacobian addition with the special cases resolved (O operands, P = Q, P = -Q).
JacobianPoint jac_add_any(const CurveParams& c, const JacobianPoint& P, const JacobianPoint& Q,
                          OpObserver* obs = nullptr);

AffinePoint mul_ltr_naf(const BigInt& k, const AffinePoint& P, const MulStrategy& s, const CurveParams& c,
                        RandomSource& rng, OpObserver* obs = nullptr);
AffinePoint mul_rtl_mixed(const BigInt& k, const AffinePoint& P, const MulStrategy& s, const CurveParams& c,
                          RandomSource& rng, OpObserver* obs = nullptr);
// Dispatches on s.direction.
AffinePoint scalar_mul(const BigInt& k, const AffinePoint& P, const MulStrategy& s, const CurveParams& c,
                       RandomSource& rng, OpObserver* obs = nullptr);

} // namespace atomec
