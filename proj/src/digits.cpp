#include "lowmult/digits.hpp"

#include <stdexcept>

namespace lowmult {

DigitVector to_digits(const BigInt& n, std::uint64_t base) {
  if (base < 2) throw std::invalid_argument("to_digits: base must be >= 2");
  if (n < 0) throw std::invalid_argument("to_digits: negative value");
  DigitVector dv;
  dv.base = base;
  BigInt v = n;
  const BigInt b = base;
  while (v != 0) {
    dv.digits.push_back((v % b).convert_to<std::uint64_t>());
    v /= b;
  }
  return dv;
}

BigInt from_digits(const DigitVector& dv) {
  BigInt v = 0;
  const BigInt b = dv.base;
  for (auto it = dv.digits.rbegin(); it != dv.digits.rend(); ++it) {
    if (*it >= dv.base) throw std::invalid_argument("from_digits: digit out of range");
    v = v * b + *it;
  }
  return v;
}

std::size_t digit_count(const BigInt& n, std::uint64_t base) {
  if (base < 2) throw std::invalid_argument("digit_count: base must be >= 2");
  if (n < 0) throw std::invalid_argument("digit_count: negative value");
  std::size_t k = 0;
  BigInt v = n;
  const BigInt b = base;
  while (v != 0) {
    v /= b;
    ++k;
  }
  return k;
}

DigitVector add_longhand(const DigitVector& a, const DigitVector& b) {
  if (a.base != b.base) throw std::invalid_argument("add_longhand: base mismatch");
  DigitVector out;
  out.base = a.base;
  const std::size_t n = std::max(a.digits.size(), b.digits.size());
  std::uint64_t carry = 0;
  for (std::size_t i = 0; i < n; ++i) {
    std::uint64_t s = carry;
    if (i < a.digits.size()) s += a.digits[i];
    if (i < b.digits.size()) s += b.digits[i];
    if (s >= a.base) {
      s -= a.base;
      carry = 1;
    } else {
      carry = 0;
    }
    out.digits.push_back(s);
  }
  if (carry) out.digits.push_back(1);
  while (!out.digits.empty() && out.digits.back() == 0) out.digits.pop_back();
  return out;
}

}  // namespace lowmult
