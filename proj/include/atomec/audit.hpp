#pragma once

#include "atomec/atomic.hpp"
#include "atomec/scalarmul.hpp"

#include <optional>
#include <string>
#include <vector>

namespace atomec {

struct TraceRegion {
    Phase phase = Phase::Protected;
    std::vector<FieldOp> ops;
};

struct OpTrace {
    std::vector<TraceRegion> regions;

    std::vector<FieldOp> protected_ops() const;
    std::size_t size() const;
    std::uint64_t count(FieldOp op, bool include_unprotected = false) const;
};

// Observer that builds an OpTrace; starts in the protected phase.
class OpRecorder : public OpObserver {
public:
    void record(FieldOp op) override;
    void enter_phase(Phase ph) override { phase_ = ph; }
    const OpTrace& trace() const { return trace_; }
    void clear();

private:
    OpTrace trace_;
    Phase phase_ = Phase::Protected;
};

struct UniformityReport {
    bool uniform = true;
    std::size_t pattern_count = 0;
    std::size_t protected_ops = 0;
    std::optional<std::size_t> mismatch_offset; // index into the protected op stream
    std::string detail;
};

// Each protected region must be a whole number of skeleton repetitions.
UniformityReport verify_uniformity(const OpTrace& trace, PatternId pattern);

// One mnemonic per line, "#phase protected|unprotected" switches, other '#' lines and "---" ignored,
// operands after the mnemonic ignored. Throws ParseError with the line number.
OpTrace parse_trace(const std::string& text);
OpTrace load_trace(const std::string& path);
std::string to_text(const OpTrace& trace);

struct CostModel {
    double a_over_m = 0.2;
    double s_over_m = 0.8;
    std::optional<double> n_over_m; // defaults to a_over_m / 2

    double neg_cost() const { return n_over_m.value_or(0.5 * a_over_m); }
    double op_cost(FieldOp op) const; // INV costs 0: inversions are outside the model
};

double pattern_unit_cost(PatternId pattern, const CostModel& cm);

struct PatternCounts {
    std::size_t dbl;
    std::size_t add;
};

// Patterns per doubling and per addition, taken from the catalog programs.
PatternCounts pattern_counts(PatternId pattern);

// Uses s.window for the digit density; s must carry a pattern.
double per_bit_cost(const MulStrategy& s, const CostModel& cm);

// Half-up to one decimal.
double round1(double v);

struct GainRow {
    unsigned window;
    double s_over_m;
    double ltr_p2, ltr_p3, rtl_p1, rtl_p4; // rounded costs
    double gain_vs_ltr_p2, gain_vs_rtl_p1; // percent, from rounded costs
    double p2_vs_p1;                       // gain of ltr-P2 over rtl-P1, percent
};

struct GainTable {
    double a_over_m;
    std::vector<GainRow> rows;
    // Arithmetic mean of the row gains, optionally restricted to one S/M value.
    double avg_gain_vs_ltr_p2(std::optional<double> s_over_m = std::nullopt) const;
    double avg_gain_vs_rtl_p1(std::optional<double> s_over_m = std::nullopt) const;
    double avg_p2_vs_p1(std::optional<double> s_over_m = std::nullopt) const;
};

GainTable gain_table(double a_over_m, const std::vector<double>& s_values = {0.8, 1.0});

// CSV columns: window,s_over_m,strategy,cost,gain_vs_ltr_p2,gain_vs_rtl_p1
std::string table3_csv(const GainTable& t);
std::string table4_csv(const GainTable& t);
std::string format_tables(const GainTable& t);

// Opcode counts weighted by cm, per scalar bit.
double empirical_cost(const OpTrace& trace, const CostModel& cm, unsigned bits,
                      bool include_unprotected = false);

struct AmRatio {
    unsigned bits;
    double a_over_m;
};

// Smart-card measurements by modulus length.
const std::vector<AmRatio>& measured_am_ratios();
// Entry for the smallest listed length >= bits (the largest one past the end).
double am_ratio_for_bits(unsigned bits);

} // namespace atomec
