#ifndef cellaut_bigint_hpp
#define cellaut_bigint_hpp

#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace cellaut {

// Arbitrary precision non-negative integers (rule numbers, preimage counts).
using BigInt = boost::multiprecision::cpp_int;

// Parses a decimal string of digits. Throws parse_error on anything else.
BigInt parse_decimal(std::string_view text);

std::string to_decimal(const BigInt& value);

} // namespace cellaut

#endif
