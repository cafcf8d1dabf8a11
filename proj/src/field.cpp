#include "atomec/field.hpp"

#include "atomec/errors.hpp"

namespace atomec {

namespace {

constexpr std::array<std::string_view, kFieldOpCount> kNames = {"MUL", "SQR", "ADD", "SUB", "NEG", "INV"};

} // namespace

std::string_view mnemonic(FieldOp op)
{
    return kNames[static_cast<std::size_t>(op)];
}

bool parse_mnemonic(std::string_view text, FieldOp& out)
{
    for (std::size_t i = 0; i < kNames.size(); ++i) {
        if (kNames[i] == text) {
            out = static_cast<FieldOp>(i);
            return true;
        }
    }
    return false;
}

std::string_view phase_name(Phase ph)
{
    return ph == Phase::Protected ? "protected" : "unprotected";
}

std::uint64_t OpCounter::total() const
{
    std::uint64_t t = 0;
    for (auto c : counts_)
        t += c;
    return t;
}

std::uint64_t OpCounter::a_class() const
{
    return (*this)[FieldOp::Add] + (*this)[FieldOp::Sub] + (*this)[FieldOp::Neg];
}

const BigInt& FieldElement::modulus() const
{
    if (!mod_)
        throw ContractViolation("unbound field element");
    return mod_->p;
}

bool FieldElement::same_field(const FieldElement& o) const
{
    if (!mod_ || !o.mod_)
        return false;
    return mod_ == o.mod_ || mod_->p == o.mod_->p;
}

bool operator==(const FieldElement& a, const FieldElement& b)
{
    if (!a.bound() || !b.bound())
        return a.bound() == b.bound();
    return a.same_field(b) && a.value_ == b.value_;
}

Field::Field(const BigInt& p)
{
    if (p <= 3 || (p & 1) == 0)
        throw ContractViolation("field modulus must be an odd prime > 3");
    mod_ = std::make_shared<const Modulus>(Modulus{p, bit_length(p)});
}

Field Field::with_observer(OpObserver* obs) const
{
    Field f = *this;
    f.obs_ = obs;
    return f;
}

bool Field::owns(const FieldElement& e) const
{
    return e.mod_ && (e.mod_ == mod_ || e.mod_->p == mod_->p);
}

void Field::check(const FieldElement& e) const
{
    if (!e.mod_)
        throw ContractViolation("unbound field element");
    if (!owns(e))
        throw ContractViolation("modulus mismatch");
}

FieldElement Field::element(const BigInt& v) const
{
    BigInt r = v % mod_->p;
    if (r < 0)
        r += mod_->p;
    return FieldElement(std::move(r), mod_);
}

FieldElement Field::add(const FieldElement& a, const FieldElement& b) const
{
    check(a);
    check(b);
    note(FieldOp::Add);
    BigInt r = a.value_ + b.value_;
    if (r >= mod_->p)
        r -= mod_->p;
    return FieldElement(std::move(r), mod_);
}

FieldElement Field::sub(const FieldElement& a, const FieldElement& b) const
{
    check(a);
    check(b);
    note(FieldOp::Sub);
    BigInt r = a.value_ - b.value_;
    if (r < 0)
        r += mod_->p;
    return FieldElement(std::move(r), mod_);
}

FieldElement Field::neg(const FieldElement& a) const
{
    check(a);
    note(FieldOp::Neg);
    if (a.value_ == 0)
        return FieldElement(BigInt(0), mod_);
    return FieldElement(mod_->p - a.value_, mod_);
}

FieldElement Field::mul(const FieldElement& a, const FieldElement& b) const
{
    check(a);
    check(b);
    note(FieldOp::Mul);
    return FieldElement((a.value_ * b.value_) % mod_->p, mod_);
}

FieldElement Field::sqr(const FieldElement& a) const
{
    check(a);
    note(FieldOp::Sqr);
    return FieldElement((a.value_ * a.value_) % mod_->p, mod_);
}

FieldElement Field::inv(const FieldElement& a) const
{
    check(a);
    if (a.value_ == 0)
        throw NonInvertible("inverse of zero");
    note(FieldOp::Inv);
    // extended Euclid on (a, p)
    BigInt r0 = mod_->p, r1 = a.value_;
    BigInt t0 = 0, t1 = 1;
    while (r1 != 0) {
        BigInt q = r0 / r1;
        BigInt r2 = r0 - q * r1;
        r0 = std::move(r1);
        r1 = std::move(r2);
        BigInt t2 = t0 - q * t1;
        t0 = std::move(t1);
        t1 = std::move(t2);
    }
    if (r0 != 1)
        throw NonInvertible("element shares a factor with the modulus");
    return element(t0);
}

FieldElement Field::pow(const FieldElement& a, const BigInt& e) const
{
    check(a);
    if (e < 0)
        throw ContractViolation("negative exponent");
    return FieldElement(boost::multiprecision::powm(a.value_, e, mod_->p), mod_);
}

bool Field::sqrt(const FieldElement& a, FieldElement& out) const
{
    check(a);
    const BigInt& p = mod_->p;
    if (a.value_ == 0) {
        out = zero();
        return true;
    }
    if (powm(a.value_, (p - 1) / 2, p) != 1)
        return false;
    if ((p & 3) == 3) {
        out = FieldElement(powm(a.value_, (p + 1) / 4, p), mod_);
        return true;
    }
    BigInt q = p - 1;
    unsigned s = 0;
    while ((q & 1) == 0) {
        q >>= 1;
        ++s;
    }
    BigInt z = 2;
    while (powm(z, (p - 1) / 2, p) != p - 1)
        ++z;
    BigInt c = powm(z, q, p);
    BigInt x = powm(a.value_, (q + 1) / 2, p);
    BigInt t = powm(a.value_, q, p);
    unsigned m = s;
    while (t != 1) {
        unsigned i = 0;
        BigInt tt = t;
        while (tt != 1) {
            tt = (tt * tt) % p;
            ++i;
        }
        BigInt b = c;
        for (unsigned j = 0; j + i + 1 < m; ++j)
            b = (b * b) % p;
        x = (x * b) % p;
        c = (b * b) % p;
        t = (t * c) % p;
        m = i;
    }
    out = FieldElement(std::move(x), mod_);
    return true;
}

} // namespace atomec
