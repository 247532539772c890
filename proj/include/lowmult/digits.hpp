#ifndef LOWMULT_DIGITS_HPP
#define LOWMULT_DIGITS_HPP

#include <cstdint>
#include <vector>

#include "lowmult/bigint.hpp"

namespace lowmult {

// Little-endian digit expansion; canonical form has no trailing high zeros,
// so the value 0 is the empty digit list.
struct DigitVector {
  std::uint64_t base = 2;
  std::vector<std::uint64_t> digits;

  bool operator==(const DigitVector&) const = default;
};

DigitVector to_digits(const BigInt& n, std::uint64_t base);
BigInt from_digits(const DigitVector& dv);

std::size_t digit_count(const BigInt& n, std::uint64_t base);

// longhand schoolbook addition, kept separate from the carry counter so the
// two can cross-check each other
DigitVector add_longhand(const DigitVector& a, const DigitVector& b);

}  // namespace lowmult

#endif
