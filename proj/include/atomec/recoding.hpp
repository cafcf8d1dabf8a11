#pragma once

#include "atomec/bigint.hpp"

#include <vector>

namespace atomec {

struct NafDigits {
    std::vector<int> digits; // most significant first
    unsigned precomputed = 0; // odd multiples 3P..(2c+1)P available; 0 is plain NAF

    int max_digit() const { return 2 * static_cast<int>(precomputed) + 1; }
    std::size_t nonzero() const;
    BigInt value() const;
};

NafDigits naf_recode(const BigInt& k);

// Signed fractional window: digits in {0, +-1, +-3, ..., +-(2c+1)}, c = precomputed in 0..4.
// c = 1 and c = 3 coincide with width-3 and width-4 NAF.
NafDigits window_naf_recode(const BigInt& k, unsigned precomputed);

// Expected nonzero digits per bit for c precomputed points.
double window_density(unsigned precomputed);

struct RtlStep {
    int u;      // -1, 0 or +1
    BigInt k;   // state after the step
};

// One iteration of the right-to-left loop body.
RtlStep rtl_next_digit(const BigInt& k);

// Digit stream consumed while k > 1, least significant first.
std::vector<int> rtl_digits(const BigInt& k);

bool is_naf(const std::vector<int>& digits);

} // namespace atomec
