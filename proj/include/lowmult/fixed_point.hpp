#ifndef LOWMULT_FIXED_POINT_HPP
#define LOWMULT_FIXED_POINT_HPP

#include <stdexcept>
#include <string>

#include "lowmult/bigint.hpp"

namespace lowmult {

// Raised when a certified interval straddles a decision boundary.  Callers
// must widen the precision or use an exact route; guessing is not an option.
class PrecisionExhausted : public std::runtime_error {
 public:
  explicit PrecisionExhausted(const std::string& what) : std::runtime_error(what) {}
};

// Fixed-point interval scalar: the represented real lies in
// [ (mant - err) * 2^-bits, (mant + err) * 2^-bits ].
// All binary operations require matching `bits`.
class FixedReal {
 public:
  FixedReal() = default;
  FixedReal(BigInt mant, BigInt err_ulps, unsigned bits);

  static FixedReal exact_int(const BigInt& value, unsigned bits);
  // num/den rounded to nearest ulp; err is 0 when the division is exact
  static FixedReal from_ratio(const BigInt& num, const BigInt& den, unsigned bits);
  static FixedReal from_double(double x, unsigned bits);

  unsigned bits() const { return bits_; }
  const BigInt& mantissa() const { return mant_; }
  const BigInt& error_ulps() const { return err_; }
  bool is_exact() const { return err_ == 0; }

  FixedReal operator+(const FixedReal& o) const;
  FixedReal operator-(const FixedReal& o) const;
  FixedReal operator-() const;
  FixedReal operator*(const FixedReal& o) const;
  FixedReal mul_int(const BigInt& k) const;
  FixedReal div_int(const BigInt& k) const;

  // floor of the represented real; throws PrecisionExhausted when the
  // interval straddles an integer
  BigInt floor_certified(const char* what = "floor") const;
  FixedReal frac_certified(const char* what = "frac") const;

  // certified three-way comparison against another interval; throws when the
  // intervals overlap
  int compare_certified(const FixedReal& o, const char* what = "compare") const;
  bool definitely_less(const FixedReal& o) const;     // no throw: false when unsure
  bool definitely_greater(const FixedReal& o) const;  // no throw

  double to_double() const;
  // decimal rendering of the midpoint, digits after the point
  std::string to_decimal(std::size_t frac_digits) const;

  FixedReal widen_error(const BigInt& extra_ulps) const;
  FixedReal to_bits(unsigned new_bits) const;

 private:
  void check_bits(const FixedReal& o) const;
  BigInt mant_ = 0;
  BigInt err_ = 0;
  unsigned bits_ = 0;
};

}  // namespace lowmult

#endif
