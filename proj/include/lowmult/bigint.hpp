#ifndef LOWMULT_BIGINT_HPP
#define LOWMULT_BIGINT_HPP

#include <cstdint>
#include <boost/multiprecision/cpp_int.hpp>

namespace lowmult {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

inline BigInt pow_u(const BigInt& base, std::uint64_t exp) {
  BigInt r = 1, b = base;
  while (exp) {
    if (exp & 1) r *= b;
    b *= b;
    exp >>= 1;
  }
  return r;
}

// number of bits in |n|; 0 for n = 0
inline std::size_t bit_length(const BigInt& n) {
  if (n == 0) return 0;
  return boost::multiprecision::msb(n < 0 ? BigInt(-n) : n) + 1;
}

BigInt parse_bigint(const std::string& s);

// big-endian hex (no 0x prefix), for file dumps of huge n
std::string to_hex(const BigInt& n);

}  // namespace lowmult

#endif
