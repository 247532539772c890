#include "lowmult/fixed_point.hpp"

#include <cmath>
#include <sstream>

namespace lowmult {

namespace {

// floor(a / 2^k)
BigInt shift_floor(const BigInt& a, unsigned k) {
  return a >> k;  // cpp_int >> is arithmetic (floor) for negatives
}

// round-to-nearest(a / 2^k), ties away from zero
BigInt shift_round(const BigInt& a, unsigned k) {
  if (k == 0) return a;
  const BigInt half = BigInt(1) << (k - 1);
  if (a >= 0) return (a + half) >> k;
  return -((-a + half) >> k);
}

}  // namespace

FixedReal::FixedReal(BigInt mant, BigInt err_ulps, unsigned bits)
    : mant_(std::move(mant)), err_(std::move(err_ulps)), bits_(bits) {
  if (err_ < 0) throw std::invalid_argument("FixedReal: negative error radius");
}

FixedReal FixedReal::exact_int(const BigInt& value, unsigned bits) {
  return FixedReal(value << bits, 0, bits);
}

FixedReal FixedReal::from_ratio(const BigInt& num, const BigInt& den, unsigned bits) {
  if (den == 0) throw std::invalid_argument("FixedReal::from_ratio: zero denominator");
  BigInt n = num, d = den;
  if (d < 0) {
    n = -n;
    d = -d;
  }
  const BigInt scaled = n << bits;
  BigInt q = scaled / d;
  BigInt r = scaled % d;
  if (r == 0) return FixedReal(q, 0, bits);
  if (r < 0) {
    q -= 1;
    r += d;
  }
  // round to nearest
  if (2 * r >= d) q += 1;
  return FixedReal(q, 1, bits);
}

FixedReal FixedReal::from_double(double x, unsigned bits) {
  if (!std::isfinite(x)) throw std::invalid_argument("FixedReal::from_double: non-finite");
  int e = 0;
  const double m = std::frexp(x, &e);  // x = m * 2^e, |m| in [0.5, 1)
  const BigInt mi = BigInt(static_cast<long long>(std::ldexp(m, 53)));
  const int shift = static_cast<int>(bits) + e - 53;
  BigInt mant;
  BigInt err = 0;
  if (shift >= 0) {
    mant = mi << shift;
  } else {
    mant = shift_round(mi, static_cast<unsigned>(-shift));
    err = 1;
  }
  return FixedReal(mant, err, bits);
}

void FixedReal::check_bits(const FixedReal& o) const {
  if (bits_ != o.bits_) throw std::invalid_argument("FixedReal: mixed precisions");
}

FixedReal FixedReal::operator+(const FixedReal& o) const {
  check_bits(o);
  return FixedReal(mant_ + o.mant_, err_ + o.err_, bits_);
}

FixedReal FixedReal::operator-(const FixedReal& o) const {
  check_bits(o);
  return FixedReal(mant_ - o.mant_, err_ + o.err_, bits_);
}

FixedReal FixedReal::operator-() const { return FixedReal(-mant_, err_, bits_); }

FixedReal FixedReal::operator*(const FixedReal& o) const {
  check_bits(o);
  const BigInt prod = mant_ * o.mant_;
  BigInt mant = shift_round(prod, bits_);
  // |a*eb| + |b*ea| + ea*eb, all in ulps, plus one ulp for the rounding above
  BigInt err = shift_floor(abs(mant_) * o.err_ + abs(o.mant_) * err_ + err_ * o.err_, bits_) + 2;
  if (is_exact() && o.is_exact() && (prod & ((BigInt(1) << bits_) - 1)) == 0)
    return FixedReal(mant, 0, bits_);
  return FixedReal(std::move(mant), std::move(err), bits_);
}

FixedReal FixedReal::mul_int(const BigInt& k) const {
  return FixedReal(mant_ * k, err_ * abs(k), bits_);
}

FixedReal FixedReal::div_int(const BigInt& k) const {
  if (k == 0) throw std::invalid_argument("FixedReal::div_int: zero divisor");
  BigInt n = mant_, d = k;
  if (d < 0) {
    n = -n;
    d = -d;
  }
  BigInt q = n / d;
  const BigInt r = n % d;
  BigInt err = err_ / d + 1;
  if (r == 0 && err_ == 0) return FixedReal(q, 0, bits_);
  return FixedReal(q, err, bits_);
}

BigInt FixedReal::floor_certified(const char* what) const {
  const BigInt lo = shift_floor(mant_ - err_, bits_);
  const BigInt hi = shift_floor(mant_ + err_, bits_);
  if (lo != hi)
    throw PrecisionExhausted(std::string(what) + ": interval straddles an integer boundary");
  return lo;
}

FixedReal FixedReal::frac_certified(const char* what) const {
  const BigInt f = floor_certified(what);
  return FixedReal(mant_ - (f << bits_), err_, bits_);
}

int FixedReal::compare_certified(const FixedReal& o, const char* what) const {
  check_bits(o);
  if (mant_ + err_ < o.mant_ - o.err_) return -1;
  if (mant_ - err_ > o.mant_ + o.err_) return 1;
  if (err_ == 0 && o.err_ == 0 && mant_ == o.mant_) return 0;
  throw PrecisionExhausted(std::string(what) + ": intervals overlap");
}

bool FixedReal::definitely_less(const FixedReal& o) const {
  return mant_ + err_ < o.mant_ - o.err_;
}

bool FixedReal::definitely_greater(const FixedReal& o) const {
  return mant_ - err_ > o.mant_ + o.err_;
}

double FixedReal::to_double() const {
  if (mant_ == 0) return 0.0;
  const bool neg = mant_ < 0;
  const BigInt a = neg ? BigInt(-mant_) : mant_;
  const std::size_t nbits = bit_length(a);
  double d;
  if (nbits <= 62) {
    d = static_cast<double>(a.convert_to<std::uint64_t>());
    d = std::ldexp(d, -static_cast<int>(bits_));
  } else {
    const BigInt top = a >> (nbits - 62);
    d = static_cast<double>(top.convert_to<std::uint64_t>());
    d = std::ldexp(d, static_cast<int>(nbits - 62) - static_cast<int>(bits_));
  }
  return neg ? -d : d;
}

std::string FixedReal::to_decimal(std::size_t frac_digits) const {
  BigInt a = mant_;
  const bool neg = a < 0;
  if (neg) a = -a;
  const BigInt ip = a >> bits_;
  BigInt rem = a - (ip << bits_);
  std::string s = (neg ? "-" : "") + ip.str();
  if (frac_digits == 0) return s;
  s += ".";
  for (std::size_t i = 0; i < frac_digits; ++i) {
    rem *= 10;
    const BigInt d = rem >> bits_;
    s += d.str();
    rem -= d << bits_;
  }
  return s;
}

FixedReal FixedReal::widen_error(const BigInt& extra_ulps) const {
  return FixedReal(mant_, err_ + extra_ulps, bits_);
}

FixedReal FixedReal::to_bits(unsigned new_bits) const {
  if (new_bits == bits_) return *this;
  if (new_bits > bits_) {
    const unsigned k = new_bits - bits_;
    return FixedReal(mant_ << k, err_ << k, new_bits);
  }
  const unsigned k = bits_ - new_bits;
  return FixedReal(shift_round(mant_, k), (err_ >> k) + 2, new_bits);
}

}  // namespace lowmult
