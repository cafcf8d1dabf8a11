#pragma once

#include "atomec/curve.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace atomec {

enum class PatternId : std::uint8_t { P1, P2, P3, P4 };

std::string_view pattern_name(PatternId id);
bool parse_pattern(std::string_view text, PatternId& out);
std::span<const FieldOp> skeleton(PatternId id);

enum class Reg : std::uint8_t {
    X1, Y1, Z1, W1,
    X2, Y2, Z2, W2,
    X3, Y3, Z3,
    ZZ1, ZZZ1,
    R1, R2, R3, R4, R5, R6, R7,
    A,
    S1, S2, S3, S4,
};

inline constexpr std::size_t kRegCount = static_cast<std::size_t>(Reg::S4) + 1;

std::string_view reg_name(Reg r);
bool parse_reg(std::string_view text, Reg& out);
bool is_scratch(Reg r);
bool is_intermediate(Reg r);

struct AtomicInstruction {
    FieldOp op;
    Reg dst;
    Reg src1;
    Reg src2; // ignored for SQR and NEG
    bool dummy = false;
};

bool is_unary(FieldOp op);

struct AtomicProgram {
    std::string name;
    PatternId pattern = PatternId::P1;
    std::vector<AtomicInstruction> code;
    std::vector<Reg> inputs;
    std::vector<Reg> outputs;

    std::size_t pattern_count() const;
};

// "OPCODE dst src1 [src2] [dummy]" per line, "OPCODE dummy" shorthand, "---" between patterns.
AtomicProgram parse_program(const std::string& text, std::string name, PatternId pattern,
                            std::vector<Reg> inputs, std::vector<Reg> outputs);
std::string to_text(const AtomicProgram& prog);

// SQR x -> MUL x x, P3 -> P2.
AtomicProgram squarings_as_multiplications(const AtomicProgram& prog, std::string name);

struct Issue {
    std::string check; // skeleton, dummy-isolation, register-bank, uninitialized, functional
    long index;        // offending instruction, -1 when not attributable
    std::string detail;
};

struct ValidationReport {
    std::string program;
    std::vector<Issue> issues;
    std::size_t random_trials = 0;
    std::size_t exhaustive_cases = 0;

    bool ok() const { return issues.empty(); }
    bool has(std::string_view check) const;
    std::string summary() const;
};

// Structural checks only (skeleton, dummy isolation, bank, uninitialized reads, outputs written).
ValidationReport check_structure(const AtomicProgram& prog);

class RegisterFile {
public:
    RegisterFile() = default;
    // Loads a and the scratch constants.
    explicit RegisterFile(const CurveParams& c);

    const FieldElement& get(Reg r) const;
    void set(Reg r, const FieldElement& v) { regs_[static_cast<std::size_t>(r)] = v; }
    bool has(Reg r) const { return regs_[static_cast<std::size_t>(r)].bound(); }
    void reset_scratch(const Field& f);

private:
    std::array<FieldElement, kRegCount> regs_{};
};

// Executes prog on regs with field f (whose observer sees every opcode).
void run_program(const AtomicProgram& prog, RegisterFile& regs, const Field& f);

enum class CatalogOp : std::uint8_t {
    ModjacDouble,
    JacAddGeneral,
    JacDoubleGeneral,
    JacReadd,
    JacAddMixed,
    JacDoubleFast,
};

std::string_view catalog_op_name(CatalogOp op);

struct CatalogKey {
    CatalogOp op;
    PatternId pattern;
    friend bool operator<(const CatalogKey& a, const CatalogKey& b)
    {
        return std::pair(a.op, a.pattern) < std::pair(b.op, b.pattern);
    }
};

using Catalog = std::map<CatalogKey, AtomicProgram>;

// Parses every entry and runs the structural checks; throws ValidationError naming the entry.
const Catalog& load_catalog();
const AtomicProgram& catalog_program(CatalogOp op, PatternId pattern);
bool catalog_has(CatalogOp op, PatternId pattern);

// Full check: structure, then functional equivalence to the direct formula on random inputs
// over `c` and an exhaustive sweep over the small curves.
ValidationReport validate_program(const AtomicProgram& prog, CatalogOp op, const CurveParams& c,
                                  std::size_t trials, std::uint64_t seed, bool exhaustive = true);

// Point-level wrappers over run_program; special cases must be handled by the caller.
JacobianPoint atomic_add_general(const AtomicProgram& prog, const CurveParams& c, const JacobianPoint& P,
                                 const JacobianPoint& Q, OpObserver* obs = nullptr);
JacobianPoint atomic_readd(const AtomicProgram& prog, const CurveParams& c, const ReadditionCache& P,
                           const JacobianPoint& Q, OpObserver* obs = nullptr);
// Q is the Jacobian accumulator, P the affine operand.
JacobianPoint atomic_add_mixed(const AtomicProgram& prog, const CurveParams& c, const AffinePoint& P,
                               const JacobianPoint& Q, OpObserver* obs = nullptr);
JacobianPoint atomic_double(const AtomicProgram& prog, const CurveParams& c, const JacobianPoint& P,
                            OpObserver* obs = nullptr);
ModJacobianPoint atomic_modjac_double(const AtomicProgram& prog, const CurveParams& c,
                                      const ModJacobianPoint& P, OpObserver* obs = nullptr);

struct Extension {
    unsigned d;
    unsigned e;
};

// d = gcd(m, n); e the largest integer with e*m/d <= m - m_min and e*n/d <= n - n_min.
Extension extend_pattern(unsigned m, unsigned m_min, unsigned n, unsigned n_min);

} // namespace atomec
