#include "lowmult/primes.hpp"

#include <algorithm>
#include <sstream>

#include <boost/multiprecision/integer.hpp>

namespace lowmult {

BigInt parse_bigint(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty integer literal");
  try {
    return BigInt(s);
  } catch (const std::exception&) {
    throw std::invalid_argument("bad integer literal: " + s);
  }
}

std::string to_hex(const BigInt& n) {
  if (n < 0) throw std::invalid_argument("to_hex: negative");
  if (n == 0) return "0";
  std::ostringstream os;
  os << std::hex << n;
  return os.str();
}

namespace {

bool miller_rabin_witness(const BigInt& n, const BigInt& d, unsigned s, std::uint64_t a) {
  BigInt x = boost::multiprecision::powm(BigInt(a) % n, d, n);
  if (x == 1 || x == n - 1) return false;
  for (unsigned i = 1; i < s; ++i) {
    x = (x * x) % n;
    if (x == n - 1) return false;
  }
  return true;  // a witnesses compositeness
}

}  // namespace

bool is_prime(const BigInt& n) {
  if (n < 2) return false;
  if (n < (1 << 20)) {
    std::uint64_t m = n.convert_to<std::uint64_t>();
    if (m % 2 == 0) return m == 2;
    for (std::uint64_t d = 3; d * d <= m; d += 2)
      if (m % d == 0) return false;
    return true;
  }
  if (n % 2 == 0) return false;
  // small trial division first
  for (std::uint64_t d : {3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull})
    if (n % d == 0) return n == d;
  BigInt d = n - 1;
  unsigned s = 0;
  while (d % 2 == 0) {
    d /= 2;
    ++s;
  }
  // exact below 3.317e24 (Sorenson-Webster witness set)
  for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (miller_rabin_witness(n, d, s, a)) return false;
  }
  return true;
}

void require_odd_prime(std::uint64_t p, const char* what) {
  if (p == 2) throw std::invalid_argument(std::string(what) + " must be odd (got 2)");
  if (!is_prime(BigInt(p))) throw std::invalid_argument(std::string(what) + " must be prime (got " + std::to_string(p) + ")");
}

PrimeSet::PrimeSet(std::vector<std::uint64_t> ps) : primes(std::move(ps)) {
  if (primes.empty()) throw std::invalid_argument("PrimeSet: empty");
  for (std::uint64_t p : primes) require_odd_prime(p);
  std::vector<std::uint64_t> sorted = primes;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw std::invalid_argument("PrimeSet: repeated prime");
}

PrimeSet PrimeSet::parse(const std::string& comma_list) {
  std::vector<std::uint64_t> ps;
  std::stringstream ss(comma_list);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    ps.push_back(std::stoull(tok));
  }
  return PrimeSet(std::move(ps));
}

std::uint64_t PrimeSet::smallest() const {
  return *std::min_element(primes.begin(), primes.end());
}

std::uint64_t PrimeSet::largest() const {
  return *std::max_element(primes.begin(), primes.end());
}

std::string PrimeSet::to_string() const {
  std::string s;
  for (std::size_t i = 0; i < primes.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(primes[i]);
  }
  return s;
}

}  // namespace lowmult
