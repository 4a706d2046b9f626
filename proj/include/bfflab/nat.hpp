#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

namespace bfflab {

/// Arbitrary-precision natural number. All term values, oracle points and
/// polynomial values live here.
using Nat = mpz_class;

/// Default ceiling on the size of a single computed value, in bits.
inline constexpr std::uint64_t kDefaultMaxBits = std::uint64_t{1} << 26;

/// |x|: length of the binary representation, with |0| = 0.
std::size_t bit_length(const Nat& x);

/// 2^e
Nat pow2(std::uint64_t e);

/// 2^e - 1, the largest value of length e.
Nat all_ones(std::uint64_t e);

/// x # y = 2^(|x|*|y|). Throws ValueTooLarge when the result would exceed
/// `max_bits` bits.
Nat smash(const Nat& x, const Nat& y, std::uint64_t max_bits = kDefaultMaxBits);

/// Truncated subtraction max(x - y, 0).
Nat monus(const Nat& x, const Nat& y);

/// x restricted to its y most significant bits: floor(x / 2^(|x| monus y)).
Nat msp(const Nat& x, const Nat& y);

Nat parse_nat(std::string_view text);
std::string to_string(const Nat& x);

/// Fits the value into a 64-bit word, throwing ValueTooLarge otherwise.
std::uint64_t to_u64(const Nat& x);

}  // namespace bfflab
