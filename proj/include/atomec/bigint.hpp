#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <string_view>

namespace atomec {

using BigInt = boost::multiprecision::cpp_int;

// Accepts optional "0x" prefix, upper or lower case. Throws ParseError.
BigInt parse_hex(std::string_view text);

// Lower-case hex without prefix; zero is "0".
std::string to_hex(const BigInt& v);

unsigned bit_length(const BigInt& v);

} // namespace atomec
