#include "atomec/bigint.hpp"

#include "atomec/errors.hpp"

#include <cctype>

namespace atomec {

BigInt parse_hex(std::string_view text)
{
    std::string_view s = text;
    if (s.size() >= 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X'))
        s.remove_prefix(2);
    if (s.empty())
        throw ParseError("empty hex value");
    for (char ch : s)
        if (!std::isxdigit(static_cast<unsigned char>(ch)))
            throw ParseError("invalid hex digit in '" + std::string(text) + "'");
    return BigInt("0x" + std::string(s));
}

std::string to_hex(const BigInt& v)
{
    if (v == 0)
        return "0";
    std::string out;
    BigInt x = v < 0 ? BigInt(-v) : v;
    static const char* digits = "0123456789abcdef";
    while (x != 0) {
        out.push_back(digits[static_cast<unsigned>(x & 0xf)]);
        x >>= 4;
    }
    if (v < 0)
        out.push_back('-');
    return {out.rbegin(), out.rend()};
}

unsigned bit_length(const BigInt& v)
{
    if (v == 0)
        return 0;
    return static_cast<unsigned>(boost::multiprecision::msb(v < 0 ? BigInt(-v) : v)) + 1;
}

} // namespace atomec
