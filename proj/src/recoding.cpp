#include "atomec/recoding.hpp"

#include "atomec/errors.hpp"

#include <algorithm>

namespace atomec {

namespace {

// k mods 2^m in [-2^(m-1), 2^(m-1)); k odd.
int mods(const BigInt& k, unsigned m)
{
    int r = static_cast<int>(k & ((1u << m) - 1));
    if (r >= (1 << (m - 1)))
        r -= 1 << m;
    return r;
}

} // namespace

std::size_t NafDigits::nonzero() const
{
    return static_cast<std::size_t>(std::count_if(digits.begin(), digits.end(), [](int d) { return d != 0; }));
}

BigInt NafDigits::value() const
{
    BigInt v = 0;
    for (int d : digits)
        v = 2 * v + d;
    return v;
}

NafDigits naf_recode(const BigInt& k)
{
    return window_naf_recode(k, 0);
}

NafDigits window_naf_recode(const BigInt& k, unsigned precomputed)
{
    if (k < 0)
        throw ContractViolation("scalar must be non-negative");
    if (precomputed > 4)
        throw ContractViolation("unsupported window: at most 4 precomputed points");
    const int D = 2 * static_cast<int>(precomputed) + 1;
    unsigned w = 0;
    while ((2 << w) <= D)
        ++w;
    NafDigits out;
    out.precomputed = precomputed;
    BigInt e = k;
    std::vector<int> lsb_first;
    while (e != 0) {
        int d = 0;
        if ((e & 1) != 0) {
            d = mods(e, w + 2);
            if (d > D || d < -D)
                d = mods(e, w + 1);
            e -= d;
        }
        lsb_first.push_back(d);
        e >>= 1;
    }
    out.digits.assign(lsb_first.rbegin(), lsb_first.rend());
    return out;
}

double window_density(unsigned precomputed)
{
    static const double table[] = {1.0 / 3, 1.0 / 4, 2.0 / 9, 1.0 / 5, 4.0 / 21};
    if (precomputed > 4)
        throw ContractViolation("unsupported window: at most 4 precomputed points");
    return table[precomputed];
}

RtlStep rtl_next_digit(const BigInt& k)
{
    if (k <= 0)
        throw ContractViolation("right-to-left state must be positive");
    RtlStep s{0, k};
    if ((k & 1) != 0) {
        s.u = 2 - static_cast<int>(k & 3);
        s.k -= s.u;
    }
    s.k >>= 1;
    return s;
}

std::vector<int> rtl_digits(const BigInt& k)
{
    std::vector<int> out;
    BigInt e = k;
    while (e > 1) {
        auto s = rtl_next_digit(e);
        out.push_back(s.u);
        e = std::move(s.k);
    }
    return out;
}

bool is_naf(const std::vector<int>& digits)
{
    for (std::size_t i = 0; i + 1 < digits.size(); ++i)
        if (digits[i] != 0 && digits[i + 1] != 0)
            return false;
    for (int d : digits)
        if (d < -1 || d > 1)
            return false;
    return true;
}

} // namespace atomec
