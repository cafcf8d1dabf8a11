#pragma once

#include "atomec/bigint.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <string_view>

namespace atomec {

enum class FieldOp : std::uint8_t { Mul, Sqr, Add, Sub, Neg, Inv };

inline constexpr std::size_t kFieldOpCount = 6;

std::string_view mnemonic(FieldOp op);
// Returns false on unknown text.
bool parse_mnemonic(std::string_view text, FieldOp& out);

enum class Phase : std::uint8_t { Protected, Unprotected };

std::string_view phase_name(Phase ph);

class OpObserver {
public:
    virtual ~OpObserver() = default;
    virtual void record(FieldOp op) = 0;
    virtual void enter_phase(Phase) {}
};

// Null-safe helpers used by the point-level code.
inline void enter_phase(OpObserver* obs, Phase ph)
{
    if (obs) obs->enter_phase(ph);
}

class OpCounter : public OpObserver {
public:
    void record(FieldOp op) override { ++counts_[static_cast<std::size_t>(op)]; }
    std::uint64_t operator[](FieldOp op) const { return counts_[static_cast<std::size_t>(op)]; }
    std::uint64_t total() const;
    // ADD + SUB + NEG
    std::uint64_t a_class() const;
    void reset() { counts_.fill(0); }

private:
    std::array<std::uint64_t, kFieldOpCount> counts_{};
};

struct Modulus {
    BigInt p;
    unsigned bits;
};

class Field;

class FieldElement {
public:
    FieldElement() = default;

    const BigInt& value() const { return value_; }
    bool bound() const { return static_cast<bool>(mod_); }
    bool is_zero() const { return value_ == 0; }
    const BigInt& modulus() const;
    bool same_field(const FieldElement& o) const;

    friend bool operator==(const FieldElement& a, const FieldElement& b);
    friend bool operator!=(const FieldElement& a, const FieldElement& b) { return !(a == b); }

private:
    friend class Field;
    FieldElement(BigInt v, std::shared_ptr<const Modulus> m) : value_(std::move(v)), mod_(std::move(m)) {}

    BigInt value_;
    std::shared_ptr<const Modulus> mod_;
};

class Field {
public:
    // p must be an odd prime > 3; primality is the caller's responsibility.
    explicit Field(const BigInt& p);

    const BigInt& p() const { return mod_->p; }
    unsigned bits() const { return mod_->bits; }

    Field with_observer(OpObserver* obs) const;
    OpObserver* observer() const { return obs_; }

    // Reduces any integer (including negative) into [0, p).
    FieldElement element(const BigInt& v) const;
    FieldElement zero() const { return element(0); }
    FieldElement one() const { return element(1); }

    FieldElement add(const FieldElement& a, const FieldElement& b) const;
    FieldElement sub(const FieldElement& a, const FieldElement& b) const;
    FieldElement neg(const FieldElement& a) const;
    FieldElement mul(const FieldElement& a, const FieldElement& b) const;
    FieldElement sqr(const FieldElement& a) const;
    FieldElement inv(const FieldElement& a) const;

    // Unobserved helpers for setup code, never used inside protected phases.
    FieldElement pow(const FieldElement& a, const BigInt& e) const;
    // Tonelli-Shanks; returns false when a is a non-residue.
    bool sqrt(const FieldElement& a, FieldElement& out) const;

    bool owns(const FieldElement& e) const;

private:
    void check(const FieldElement& e) const;
    void note(FieldOp op) const
    {
        if (obs_) obs_->record(op);
    }

    std::shared_ptr<const Modulus> mod_;
    OpObserver* obs_ = nullptr;
};

} // namespace atomec
