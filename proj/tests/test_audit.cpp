#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "atomec/audit.hpp"
#include "atomec/errors.hpp"
#include "atomec/recoding.hpp"

#include <random>

using namespace atomec;

namespace {

MulStrategy strat(const char* name, unsigned window = 0)
{
    auto s = parse_strategy(name);
    s.window = window;
    return s;
}

OpTrace protected_trace(std::vector<FieldOp> ops)
{
    OpTrace t;
    t.regions.push_back({Phase::Protected, std::move(ops)});
    return t;
}

std::vector<FieldOp> repeat(PatternId p, std::size_t times)
{
    std::vector<FieldOp> out;
    for (std::size_t i = 0; i < times; ++i)
        for (auto op : skeleton(p))
            out.push_back(op);
    return out;
}

// First index where ops stops following the skeleton, or ops.size() on a ragged end.
std::size_t first_deviation(const std::vector<FieldOp>& ops, PatternId p)
{
    const auto sk = skeleton(p);
    for (std::size_t i = 0; i < ops.size(); ++i)
        if (ops[i] != sk[i % sk.size()])
            return i;
    return ops.size();
}

OpTrace run_trace(const char* name, const BigInt& k, std::uint64_t seed)
{
    const auto c = builtin_curve("p192");
    RandomSource rng(seed);
    OpRecorder rec;
    scalar_mul(k, *c.g, strat(name), c, rng, &rec);
    return rec.trace();
}

BigInt random_scalar(std::mt19937_64& gen, unsigned bits)
{
    BigInt k = random_below(gen, BigInt(1) << bits);
    bit_set(k, bits - 1);
    return k;
}

} // namespace

TEST_CASE("uniformity basics")
{
    const auto empty = verify_uniformity(OpTrace{}, PatternId::P4);
    CHECK(empty.uniform);
    CHECK(empty.pattern_count == 0);

    const auto ok = verify_uniformity(protected_trace(repeat(PatternId::P2, 5)), PatternId::P2);
    CHECK(ok.uniform);
    CHECK(ok.pattern_count == 5);

    auto ops = repeat(PatternId::P1, 3);
    ops.erase(ops.begin() + 5);
    const auto del = verify_uniformity(protected_trace(ops), PatternId::P1);
    CHECK_FALSE(del.uniform);
    REQUIRE(del.mismatch_offset);
    CHECK(*del.mismatch_offset == first_deviation(ops, PatternId::P1));

    auto ragged = repeat(PatternId::P3, 2);
    ragged.pop_back();
    const auto r = verify_uniformity(protected_trace(ragged), PatternId::P3);
    CHECK_FALSE(r.uniform);
    CHECK(*r.mismatch_offset == ragged.size());

    auto with_inv = repeat(PatternId::P4, 1);
    with_inv[3] = FieldOp::Inv;
    CHECK(*verify_uniformity(protected_trace(with_inv), PatternId::P4).mismatch_offset == 3);

    // Unprotected regions are not audited, and offsets count protected ops only.
    OpTrace mixed;
    mixed.regions.push_back({Phase::Unprotected, {FieldOp::Inv, FieldOp::Neg}});
    mixed.regions.push_back({Phase::Protected, repeat(PatternId::P1, 2)});
    mixed.regions.push_back({Phase::Unprotected, {FieldOp::Sqr}});
    auto bad = repeat(PatternId::P1, 2);
    bad[6] = FieldOp::Sub;
    mixed.regions.push_back({Phase::Protected, bad});
    const auto m = verify_uniformity(mixed, PatternId::P1);
    CHECK_FALSE(m.uniform);
    CHECK(*m.mismatch_offset == 8 + 6);
    CHECK(m.pattern_count == 2 + 1);
}

TEST_CASE("single-opcode mutations of real runs are all rejected at the right offset")
{
    std::mt19937_64 gen(5);
    for (const char* name : {"rtl-p4", "rtl-p1", "ltr-p2", "ltr-p3"}) {
        auto s = strat(name);
        const auto t = run_trace(name, random_scalar(gen, 160), 1);
        REQUIRE(verify_uniformity(t, *s.pattern).uniform);
        const auto ops = t.protected_ops();
        for (int trial = 0; trial < 40; ++trial) {
            const std::size_t i = std::uniform_int_distribution<std::size_t>(0, ops.size() - 1)(gen);
            auto mutated = ops;
            switch (trial % 3) {
            case 0: // substitution
                mutated[i] = static_cast<FieldOp>((static_cast<int>(ops[i]) + 1 + trial % 4) % kFieldOpCount);
                if (mutated[i] == ops[i])
                    mutated[i] = FieldOp::Inv;
                break;
            case 1: mutated.erase(mutated.begin() + static_cast<long>(i)); break;
            case 2: mutated.insert(mutated.begin() + static_cast<long>(i), FieldOp::Mul); break;
            }
            const auto rep = verify_uniformity(protected_trace(mutated), *s.pattern);
            CAPTURE(name);
            CAPTURE(trial);
            REQUIRE_FALSE(rep.uniform);
            REQUIRE(*rep.mismatch_offset == first_deviation(mutated, *s.pattern));
            if (trial % 3 == 0)
                REQUIRE(*rep.mismatch_offset == i);
            REQUIRE(*rep.mismatch_offset >= i);
        }
    }
}

TEST_CASE("trace text format")
{
    const auto t = run_trace("rtl-p4", 0x123456789, 2);
    const auto text = to_text(t);
    CHECK(text.rfind("#phase unprotected", 0) == 0);
    const auto back = parse_trace(text);
    CHECK(to_text(back) == text);
    CHECK(verify_uniformity(back, PatternId::P4).pattern_count == verify_uniformity(t, PatternId::P4).pattern_count);

    // Program listings are valid traces: operands and separators are ignored.
    const auto listing = parse_trace("MUL R1 X1 X1\nADD R2 Y1 Y1\nNEG dummy\nADD dummy # tail\n---\n");
    CHECK(verify_uniformity(listing, PatternId::P1).uniform);
    CHECK(verify_uniformity(listing, PatternId::P1).pattern_count == 1);

    auto err = [](const std::string& s) {
        try {
            parse_trace(s);
        } catch (const ParseError& e) {
            return std::string(e.what());
        }
        return std::string("no error");
    };
    CHECK(err("MUL\nADD\nMULT\n").find("line 3") != std::string::npos);
    CHECK(err("#phase sideways\n").find("line 1") != std::string::npos);
    CHECK_THROWS_AS(load_trace("/nonexistent/trace.txt"), ParseError);
}

TEST_CASE("pattern unit costs")
{
    const CostModel cm{0.2, 0.8, std::nullopt};
    CHECK(cm.neg_cost() == doctest::Approx(0.1));
    CHECK(pattern_unit_cost(PatternId::P1, cm) == doctest::Approx(1.5));
    CHECK(pattern_unit_cost(PatternId::P2, cm) == doctest::Approx(2.8));
    CHECK(pattern_unit_cost(PatternId::P3, cm) == doctest::Approx(2.6));
    CHECK(pattern_unit_cost(PatternId::P4, cm) == doctest::Approx(9.6));
    const CostModel cm1{0.2, 1.0, std::nullopt};
    CHECK(pattern_unit_cost(PatternId::P3, cm1) == doctest::Approx(2.8));
    CHECK(pattern_unit_cost(PatternId::P4, cm1) == doctest::Approx(10.0));
    const CostModel over{0.2, 0.8, 0.0};
    CHECK(pattern_unit_cost(PatternId::P1, over) == doctest::Approx(1.4));
}

TEST_CASE("per-bit cost examples")
{
    const CostModel s08{0.2, 0.8, std::nullopt}, s1{0.2, 1.0, std::nullopt};
    CHECK(round1(per_bit_cost(strat("rtl-p1"), s08)) == doctest::Approx(20.0));
    CHECK(round1(per_bit_cost(strat("ltr-p3"), s1)) == doctest::Approx(19.6));
    CHECK(round1(per_bit_cost(strat("rtl-p4", 1), s08)) == doctest::Approx(14.4));
    CHECK(pattern_counts(PatternId::P1).dbl == 8);
    CHECK(pattern_counts(PatternId::P1).add == 16);
    CHECK(pattern_counts(PatternId::P2).dbl == 4);
    CHECK(pattern_counts(PatternId::P2).add == 7);
    CHECK(pattern_counts(PatternId::P3).dbl == 5);
    CHECK(pattern_counts(PatternId::P3).add == 6);
    CHECK(pattern_counts(PatternId::P4).dbl == 1);
    CHECK(pattern_counts(PatternId::P4).add == 2);
    CHECK_THROWS_AS(per_bit_cost(strat("rtl-plain"), s08), StrategyError);
}

TEST_CASE("rounding is half-up")
{
    CHECK(round1(17.65) == doctest::Approx(17.7));
    CHECK(round1(0.05) == doctest::Approx(0.1));
    CHECK(round1(14.44) == doctest::Approx(14.4));
}

TEST_CASE("cost tables reproduce the published cells")
{
    // window -> {ltr-p2, ltr-p3 (S/M 0.8, 1), rtl-p1, rtl-p4 (S/M 0.8, 1)}
    struct Row {
        double p2, p3_08, p3_1, p1, p4_08, p4_1;
    };
    const Row rows[] = {
        {17.7, 18.2, 19.6, 20.0, 16.0, 16.7}, {16.1, 16.9, 18.2, 18.0, 14.4, 15.0},
        {15.6, 16.5, 17.7, 17.3, 13.9, 14.4}, {15.1, 16.1, 17.4, 16.8, 13.4, 14.0},
        {14.9, 16.0, 17.2, 16.6, 13.3, 13.8},
    };
    const double gain_p2[] = {9.6, 5.6, 10.6, 6.8, 10.9, 7.7, 11.3, 7.3, 10.7, 7.4};
    const double gain_p1[] = {20.0, 16.5, 20.0, 16.7, 19.7, 16.8, 20.2, 16.7, 19.9, 16.9};

    const auto t = gain_table(0.2);
    REQUIRE(t.rows.size() == 10);
    for (std::size_t i = 0; i < 10; ++i) {
        const auto& r = t.rows[i];
        const auto& e = rows[i / 2];
        const bool s08 = i % 2 == 0;
        CAPTURE(i);
        CHECK(r.window == i / 2);
        CHECK(r.s_over_m == doctest::Approx(s08 ? 0.8 : 1.0));
        CHECK(r.ltr_p2 == doctest::Approx(e.p2));
        CHECK(r.ltr_p3 == doctest::Approx(s08 ? e.p3_08 : e.p3_1));
        CHECK(r.rtl_p1 == doctest::Approx(e.p1));
        CHECK(r.rtl_p4 == doctest::Approx(s08 ? e.p4_08 : e.p4_1));
        CHECK(std::abs(r.gain_vs_ltr_p2 - gain_p2[i]) <= 0.1 + 1e-9);
        CHECK(std::abs(r.gain_vs_rtl_p1 - gain_p1[i]) <= 0.1 + 1e-9);
    }
    CHECK(t.avg_gain_vs_rtl_p1() == doctest::Approx(18.3));
    CHECK(t.avg_gain_vs_ltr_p2(0.8) == doctest::Approx(10.6));
    CHECK(t.avg_gain_vs_ltr_p2(1.0) == doctest::Approx(7.0));
}

TEST_CASE("CSV output")
{
    const auto t = gain_table(0.2);
    const auto t3 = table3_csv(t), t4 = table4_csv(t);
    CHECK(t3.rfind("window,s_over_m,strategy,cost,gain_vs_ltr_p2,gain_vs_rtl_p1\n", 0) == 0);
    CHECK(std::count(t3.begin(), t3.end(), '\n') == 31);
    CHECK(std::count(t4.begin(), t4.end(), '\n') == 11);
    CHECK(t3.find("0,1,ltr-p3,19.6,") != std::string::npos);
    CHECK(t4.find("1,0.8,rtl-p4,14.4,10.6,20.0\n") != std::string::npos);
    CHECK(t4.find("0,0.8,rtl-p4,16.0,9.6,20.0\n") != std::string::npos);
}

TEST_CASE("cost model monotonicity")
{
    for (const char* name : {"ltr-p2", "ltr-p3", "rtl-p1", "rtl-p4"}) {
        for (double s : {0.8, 1.0}) {
            double prev = 1e9;
            for (unsigned w = 0; w <= 4; ++w) {
                const double v = per_bit_cost(strat(name, w), {0.2, s, std::nullopt});
                CHECK(v <= prev);
                prev = v;
            }
            double last = 0;
            for (double am : {0.0, 0.05, 0.1, 0.2, 0.3, 0.36}) {
                const double v = per_bit_cost(strat(name), {am, s, std::nullopt});
                CHECK(v >= last);
                last = v;
            }
        }
    }
    // Without dedicated squaring P3 loses its edge: its unit cost equals P2's.
    CHECK(pattern_unit_cost(PatternId::P3, {0.2, 1.0, std::nullopt}) ==
          doctest::Approx(pattern_unit_cost(PatternId::P2, {0.2, 1.0, std::nullopt})));
    CHECK_THROWS_AS(gain_table(-0.1), ContractViolation);
    CHECK_THROWS_AS(gain_table(0.2, {0.0}), ContractViolation);
}

TEST_CASE("measured A/M data")
{
    CHECK(measured_am_ratios().size() == 8);
    CHECK(am_ratio_for_bits(160) == doctest::Approx(0.36));
    CHECK(am_ratio_for_bits(192) == doctest::Approx(0.30));
    CHECK(am_ratio_for_bits(256) == doctest::Approx(0.22));
    CHECK(am_ratio_for_bits(521) == doctest::Approx(0.09));
    CHECK(am_ratio_for_bits(200) == doctest::Approx(0.25));
    const auto t = gain_table(am_ratio_for_bits(160));
    CHECK(t.rows[0].rtl_p4 > gain_table(0.2).rows[0].rtl_p4);
}

TEST_CASE("empirical cost converges to the model")
{
    const CostModel cm{0.2, 0.8, std::nullopt};
    const auto n = *builtin_curve("p192").n;
    std::mt19937_64 gen(17);
    for (const auto& [name, target, tol] : {std::tuple{"rtl-p4", 16.0, 0.3}, std::tuple{"rtl-p1", 20.0, 0.4}}) {
        const auto s = strat(name);
        const auto pc = pattern_counts(*s.pattern);
        const double unit = pattern_unit_cost(*s.pattern, cm);
        double sum = 0;
        const int runs = 30;
        for (int i = 0; i < runs; ++i) {
            const BigInt k = random_scalar(gen, 192) % n;
            const auto t = run_trace(name, k, 3 + i);
            const double e = empirical_cost(t, cm, 192);
            // Structural floor from this scalar's own digits: every doubling, and every
            // nonzero digit but the first (copied into O), costs a protected block.
            const auto d = rtl_digits(k);
            const auto nz = static_cast<std::size_t>(std::count_if(d.begin(), d.end(), [](int x) { return x != 0; }));
            const double floor = (static_cast<double>(d.size() * pc.dbl + (nz - 1) * pc.add)) * unit / 192;
            CHECK(e >= floor - 1e-9);
            CHECK(empirical_cost(t, cm, 192, true) > e);
            sum += e;
        }
        CAPTURE(name);
        CHECK(std::abs(sum / runs - target) <= tol);
    }
}

TEST_CASE("empirical minus analytical shrinks with scalar length")
{
    // Per-bit deviation of the pattern count from 1 + 2 * density is driven by the
    // O(1) epilogue and first-copy terms, so the mean gap must shrink as bits grow.
    const CostModel cm{0.2, 0.8, std::nullopt};
    const double model = per_bit_cost(strat("rtl-p4"), cm);
    std::mt19937_64 gen(23);
    std::vector<double> gaps;
    for (unsigned bits : {64u, 128u, 192u, 256u}) {
        const auto c = builtin_curve(bits <= 192 ? "p192" : "p256");
        double sum = 0;
        const int runs = 100;
        for (int i = 0; i < runs; ++i) {
            RandomSource rng(static_cast<std::uint64_t>(i));
            OpRecorder rec;
            scalar_mul(random_scalar(gen, bits) % *c.n, *c.g, strat("rtl-p4"), c, rng, &rec);
            sum += empirical_cost(rec.trace(), cm, bits);
        }
        gaps.push_back(std::abs(sum / runs - model));
    }
    CAPTURE(gaps[0]);
    CAPTURE(gaps[3]);
    CHECK(gaps[3] < gaps[0]);
    CHECK(gaps[3] < 0.3);
}

TEST_CASE("recorder merges phases into regions")
{
    OpRecorder rec;
    rec.record(FieldOp::Mul);
    rec.enter_phase(Phase::Unprotected);
    rec.enter_phase(Phase::Unprotected);
    rec.record(FieldOp::Inv);
    rec.enter_phase(Phase::Protected);
    rec.enter_phase(Phase::Unprotected);
    rec.record(FieldOp::Neg);
    const auto& t = rec.trace();
    REQUIRE(t.regions.size() == 2);
    CHECK(t.regions[0].phase == Phase::Protected);
    CHECK(t.regions[1].ops.size() == 2);
    CHECK(t.size() == 3);
    rec.clear();
    CHECK(rec.trace().regions.empty());
}
