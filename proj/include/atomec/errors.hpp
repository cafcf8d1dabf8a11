#pragma once

#include <stdexcept>
#include <string>

namespace atomec {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Operands from different prime contexts, unbound elements, bad arguments.
struct ContractViolation : Error {
    using Error::Error;
};

struct NonInvertible : Error {
    using Error::Error;
};

struct PreconditionError : Error {
    using Error::Error;
};

struct ParseError : Error {
    using Error::Error;
};

// Atomic program or catalog entry failed load-time checks.
struct ValidationError : Error {
    using Error::Error;
};

// Strategy combination forbidden by the countermeasure rules.
struct StrategyError : Error {
    using Error::Error;
};

enum class SpecialKind { OperandAtInfinity, EqualPoints, OppositePoints };

struct SpecialCase : Error {
    SpecialKind kind;
    SpecialCase(SpecialKind k, const std::string& what) : Error(what), kind(k) {}
};

} // namespace atomec
