#include "atomec/audit.hpp"

#include "atomec/errors.hpp"
#include "atomec/recoding.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

namespace atomec {

namespace {

std::string fixed1(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f", v);
    return buf;
}

std::string ratio_text(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

double gain_pct(double cost, double ref)
{
    return round1(100.0 * (1.0 - cost / ref));
}

std::string_view trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

} // namespace

std::vector<FieldOp> OpTrace::protected_ops() const
{
    std::vector<FieldOp> out;
    for (const auto& r : regions)
        if (r.phase == Phase::Protected)
            out.insert(out.end(), r.ops.begin(), r.ops.end());
    return out;
}

std::size_t OpTrace::size() const
{
    std::size_t n = 0;
    for (const auto& r : regions)
        n += r.ops.size();
    return n;
}

std::uint64_t OpTrace::count(FieldOp op, bool include_unprotected) const
{
    std::uint64_t n = 0;
    for (const auto& r : regions)
        if (include_unprotected || r.phase == Phase::Protected)
            n += static_cast<std::uint64_t>(std::count(r.ops.begin(), r.ops.end(), op));
    return n;
}

void OpRecorder::record(FieldOp op)
{
    if (trace_.regions.empty() || trace_.regions.back().phase != phase_)
        trace_.regions.push_back({phase_, {}});
    trace_.regions.back().ops.push_back(op);
}

void OpRecorder::clear()
{
    trace_.regions.clear();
    phase_ = Phase::Protected;
}

UniformityReport verify_uniformity(const OpTrace& trace, PatternId pattern)
{
    const auto sk = skeleton(pattern);
    const std::size_t L = sk.size();
    UniformityReport rep;
    std::size_t base = 0;
    for (const auto& region : trace.regions) {
        if (region.phase != Phase::Protected)
            continue;
        const auto& ops = region.ops;
        for (std::size_t j = 0; j < ops.size(); ++j) {
            if (ops[j] != sk[j % L]) {
                rep.uniform = false;
                rep.mismatch_offset = base + j;
                rep.detail = "expected " + std::string(mnemonic(sk[j % L])) + " at slot " +
                             std::to_string(j % L + 1) + " of " + std::string(pattern_name(pattern)) + ", got " +
                             std::string(mnemonic(ops[j]));
                rep.protected_ops = base + j;
                rep.pattern_count += j / L;
                return rep;
            }
        }
        if (ops.size() % L != 0) {
            rep.uniform = false;
            rep.mismatch_offset = base + ops.size();
            rep.detail = "protected region ends after slot " + std::to_string(ops.size() % L) + " of " +
                         std::string(pattern_name(pattern));
            rep.protected_ops = base + ops.size();
            rep.pattern_count += ops.size() / L;
            return rep;
        }
        rep.pattern_count += ops.size() / L;
        base += ops.size();
    }
    rep.protected_ops = base;
    return rep;
}

OpTrace parse_trace(const std::string& text)
{
    OpTrace t;
    Phase phase = Phase::Protected;
    std::istringstream in(text);
    std::string raw;
    std::size_t lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string_view line = trim(raw);
        if (line.starts_with("#phase")) {
            const auto arg = trim(line.substr(6));
            if (arg == "protected")
                phase = Phase::Protected;
            else if (arg == "unprotected")
                phase = Phase::Unprotected;
            else
                throw ParseError("line " + std::to_string(lineno) + ": unknown phase '" + std::string(arg) + "'");
            continue;
        }
        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = trim(line.substr(0, hash));
        if (line.empty() || line == "---")
            continue;
        const auto word = line.substr(0, line.find_first_of(" \t"));
        FieldOp op;
        if (!parse_mnemonic(word, op))
            throw ParseError("line " + std::to_string(lineno) + ": unknown opcode '" + std::string(word) + "'");
        if (t.regions.empty() || t.regions.back().phase != phase)
            t.regions.push_back({phase, {}});
        t.regions.back().ops.push_back(op);
    }
    return t;
}

OpTrace load_trace(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ParseError("cannot read trace file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_trace(ss.str());
}

std::string to_text(const OpTrace& trace)
{
    std::string out;
    for (const auto& r : trace.regions) {
        out += "#phase ";
        out += phase_name(r.phase);
        out += '\n';
        for (auto op : r.ops) {
            out += mnemonic(op);
            out += '\n';
        }
    }
    return out;
}

double CostModel::op_cost(FieldOp op) const
{
    switch (op) {
    case FieldOp::Mul: return 1.0;
    case FieldOp::Sqr: return s_over_m;
    case FieldOp::Add:
    case FieldOp::Sub: return a_over_m;
    case FieldOp::Neg: return neg_cost();
    case FieldOp::Inv: return 0.0;
    }
    return 0.0;
}

double pattern_unit_cost(PatternId pattern, const CostModel& cm)
{
    double sum = 0;
    for (auto op : skeleton(pattern))
        sum += cm.op_cost(op);
    return sum;
}

PatternCounts pattern_counts(PatternId pattern)
{
    auto n = [pattern](CatalogOp op) { return catalog_program(op, pattern).pattern_count(); };
    switch (pattern) {
    case PatternId::P1:
    case PatternId::P4: return {n(CatalogOp::ModjacDouble), n(CatalogOp::JacAddGeneral)};
    case PatternId::P2: return {n(CatalogOp::JacDoubleFast), n(CatalogOp::JacReadd)};
    case PatternId::P3: return {n(CatalogOp::JacDoubleGeneral), n(CatalogOp::JacAddMixed)};
    }
    throw ContractViolation("unknown pattern");
}

double per_bit_cost(const MulStrategy& s, const CostModel& cm)
{
    check_strategy(s);
    if (!s.pattern)
        throw StrategyError("the cost model needs an atomic pattern");
    const auto pc = pattern_counts(*s.pattern);
    const double patterns = static_cast<double>(pc.dbl) + window_density(s.window) * static_cast<double>(pc.add);
    return patterns * pattern_unit_cost(*s.pattern, cm);
}

double round1(double v)
{
    return std::floor(v * 10.0 + 0.5 + 1e-9) / 10.0;
}

GainTable gain_table(double a_over_m, const std::vector<double>& s_values)
{
    if (!(a_over_m >= 0) || !std::isfinite(a_over_m))
        throw ContractViolation("A/M must be a non-negative number");
    GainTable t{a_over_m, {}};
    for (unsigned w = 0; w <= 4; ++w) {
        for (double s : s_values) {
            if (!(s > 0) || !std::isfinite(s))
                throw ContractViolation("S/M must be a positive number");
            const CostModel cm{a_over_m, s, std::nullopt};
            auto cost = [&](const char* name) {
                auto st = parse_strategy(name);
                st.window = w;
                return round1(per_bit_cost(st, cm));
            };
            GainRow r{w, s, cost("ltr-p2"), cost("ltr-p3"), cost("rtl-p1"), cost("rtl-p4"), 0, 0, 0};
            r.gain_vs_ltr_p2 = gain_pct(r.rtl_p4, r.ltr_p2);
            r.gain_vs_rtl_p1 = gain_pct(r.rtl_p4, r.rtl_p1);
            r.p2_vs_p1 = gain_pct(r.ltr_p2, r.rtl_p1);
            t.rows.push_back(r);
        }
    }
    return t;
}

namespace {

double row_mean(const GainTable& t, double GainRow::*field, std::optional<double> s_over_m)
{
    double sum = 0;
    std::size_t n = 0;
    for (const auto& r : t.rows)
        if (!s_over_m || std::abs(r.s_over_m - *s_over_m) < 1e-12) {
            sum += r.*field;
            ++n;
        }
    return n ? round1(sum / static_cast<double>(n)) : 0.0;
}

} // namespace

double GainTable::avg_gain_vs_ltr_p2(std::optional<double> s) const
{
    return row_mean(*this, &GainRow::gain_vs_ltr_p2, s);
}

double GainTable::avg_gain_vs_rtl_p1(std::optional<double> s) const
{
    return row_mean(*this, &GainRow::gain_vs_rtl_p1, s);
}

double GainTable::avg_p2_vs_p1(std::optional<double> s) const
{
    return row_mean(*this, &GainRow::p2_vs_p1, s);
}

namespace {

std::string csv_line(const GainRow& r, const char* strategy, double cost)
{
    return std::to_string(r.window) + "," + ratio_text(r.s_over_m) + "," + strategy + "," + fixed1(cost) + "," +
           fixed1(gain_pct(cost, r.ltr_p2)) + "," + fixed1(gain_pct(cost, r.rtl_p1)) + "\n";
}

const char* kCsvHeader = "window,s_over_m,strategy,cost,gain_vs_ltr_p2,gain_vs_rtl_p1\n";

} // namespace

std::string table3_csv(const GainTable& t)
{
    std::string out = kCsvHeader;
    for (const auto& r : t.rows) {
        out += csv_line(r, "ltr-p2", r.ltr_p2);
        out += csv_line(r, "ltr-p3", r.ltr_p3);
        out += csv_line(r, "rtl-p1", r.rtl_p1);
    }
    return out;
}

std::string table4_csv(const GainTable& t)
{
    std::string out = kCsvHeader;
    for (const auto& r : t.rows)
        out += csv_line(r, "rtl-p4", r.rtl_p4);
    return out;
}

std::string format_tables(const GainTable& t)
{
    std::string out = "per-bit cost in M, A/M = " + ratio_text(t.a_over_m) + "\n\n";
    out += "window  S/M   ltr-p2  ltr-p3  rtl-p1  rtl-p4  gain/p2  gain/p1\n";
    for (const auto& r : t.rows) {
        char buf[128];
        std::snprintf(buf, sizeof buf, "%-7u %-5s %6.1f  %6.1f  %6.1f  %6.1f  %6.1f%%  %6.1f%%\n", r.window,
                      ratio_text(r.s_over_m).c_str(), r.ltr_p2, r.ltr_p3, r.rtl_p1, r.rtl_p4, r.gain_vs_ltr_p2,
                      r.gain_vs_rtl_p1);
        out += buf;
    }
    std::vector<double> seen;
    for (const auto& r : t.rows)
        if (std::find(seen.begin(), seen.end(), r.s_over_m) == seen.end())
            seen.push_back(r.s_over_m);
    out += "\n";
    for (double s : seen)
        out += "average gain of rtl-p4 over ltr-p2 at S/M " + ratio_text(s) + ": " + fixed1(t.avg_gain_vs_ltr_p2(s)) +
               "%\n";
    out += "average gain of rtl-p4 over ltr-p2: " + fixed1(t.avg_gain_vs_ltr_p2()) + "%\n";
    out += "average gain of rtl-p4 over rtl-p1: " + fixed1(t.avg_gain_vs_rtl_p1()) + "%\n";
    out += "average gain of ltr-p2 over rtl-p1: " + fixed1(t.avg_p2_vs_p1()) + "%\n";
    return out;
}

double empirical_cost(const OpTrace& trace, const CostModel& cm, unsigned bits, bool include_unprotected)
{
    if (bits == 0)
        throw ContractViolation("bit length must be positive");
    double sum = 0;
    for (const auto& r : trace.regions)
        if (include_unprotected || r.phase == Phase::Protected)
            for (auto op : r.ops)
                sum += cm.op_cost(op);
    return sum / bits;
}

const std::vector<AmRatio>& measured_am_ratios()
{
    static const std::vector<AmRatio> table{
        {160, 0.36}, {192, 0.30}, {224, 0.25}, {256, 0.22}, {320, 0.16}, {384, 0.13}, {512, 0.09}, {521, 0.09},
    };
    return table;
}

double am_ratio_for_bits(unsigned bits)
{
    for (const auto& e : measured_am_ratios())
        if (bits <= e.bits)
            return e.a_over_m;
    return measured_am_ratios().back().a_over_m;
}

} // namespace atomec
