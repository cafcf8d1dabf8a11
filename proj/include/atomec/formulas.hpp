#pragma once

#include "atomec/curve.hpp"

namespace atomec {

// Affine group law with inversions; the reference every other formula is checked against.
AffinePoint affine_add(const CurveParams& c, const AffinePoint& P, const AffinePoint& Q);
AffinePoint affine_double(const CurveParams& c, const AffinePoint& P);
// Plain double-and-add over affine_add; k may be zero or negative.
AffinePoint affine_mul(const CurveParams& c, const BigInt& k, const AffinePoint& P);

// Jacobian formulas. Inputs equal to O, or P = +-Q for additions, throw SpecialCase.
// With ATOMEC_CHECK_INVARIANTS the result is checked against the curve equation.
JacobianPoint jac_add_general(const CurveParams& c, const JacobianPoint& P, const JacobianPoint& Q,
                              OpObserver* obs = nullptr);
// P carries cached Z^2 and Z^3.
JacobianPoint jac_readd(const CurveParams& c, const ReadditionCache& P, const JacobianPoint& Q,
                        OpObserver* obs = nullptr);
JacobianPoint jac_add_mixed(const CurveParams& c, const AffinePoint& P, const JacobianPoint& Q,
                            OpObserver* obs = nullptr);
JacobianPoint jac_double_general(const CurveParams& c, const JacobianPoint& P, OpObserver* obs = nullptr);
// Requires a = -3; throws PreconditionError otherwise.
JacobianPoint jac_double_fast(const CurveParams& c, const JacobianPoint& P, OpObserver* obs = nullptr);
ModJacobianPoint modjac_double(const CurveParams& c, const ModJacobianPoint& P, OpObserver* obs = nullptr);

} // namespace atomec
