#include "lowmult/dft.hpp"

#include <cmath>
#include <stdexcept>

namespace lowmult {

namespace {

constexpr long double kTauL = 6.283185307179586476925286766559005768L;

void fft_pow2(std::vector<std::complex<double>>& a, bool invert) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const long double ang = kTauL / static_cast<long double>(len) * (invert ? -1 : 1);
    const std::complex<double> wl(static_cast<double>(cosl(ang)), static_cast<double>(sinl(ang)));
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w(1);
      for (std::size_t j = 0; j < len / 2; ++j) {
        const std::complex<double> u = a[i + j], v = a[i + j + len / 2] * w;
        a[i + j] = u + v;
        a[i + j + len / 2] = u - v;
        w *= wl;
      }
    }
  }
  if (invert)
    for (auto& x : a) x /= static_cast<double>(n);
}

// chirp e(+pi i n^2 / N), with n^2 reduced mod 2N to keep angles exact
std::complex<double> chirp(std::uint64_t n, std::uint64_t N) {
  const std::uint64_t sq = (n % (2 * N)) * (n % (2 * N)) % (2 * N);
  const long double ang = kTauL / 2.0L * static_cast<long double>(sq) / static_cast<long double>(N);
  return {static_cast<double>(cosl(ang)), static_cast<double>(sinl(ang))};
}

// arbitrary-length DFT with the +2pi i convention via Bluestein
std::vector<std::complex<double>> bluestein(const std::vector<std::complex<double>>& x) {
  const std::uint64_t N = x.size();
  std::size_t M = 1;
  while (M < 2 * N + 1) M <<= 1;
  std::vector<std::complex<double>> a(M), b(M);
  for (std::uint64_t n = 0; n < N; ++n) a[n] = x[n] * chirp(n, N);
  b[0] = std::complex<double>(1, 0);
  for (std::uint64_t n = 1; n < N; ++n) b[n] = b[M - n] = std::conj(chirp(n, N));
  fft_pow2(a, false);
  fft_pow2(b, false);
  for (std::size_t i = 0; i < M; ++i) a[i] *= b[i];
  fft_pow2(a, true);
  std::vector<std::complex<double>> out(N);
  for (std::uint64_t k = 0; k < N; ++k) out[k] = a[k] * chirp(k, N);
  return out;
}

}  // namespace

std::vector<std::complex<double>> indicator_dft(const std::vector<std::uint32_t>& set,
                                                std::uint64_t P) {
  if (P < 2) throw std::invalid_argument("indicator_dft: P must be >= 2");
  if (P <= kDftDirectCap) {
    // exact angles from a shared root table, Kahan-compensated accumulation
    std::vector<std::complex<double>> roots(P);
    for (std::uint64_t k = 0; k < P; ++k) {
      const long double ang = kTauL * static_cast<long double>(k) / static_cast<long double>(P);
      roots[k] = {static_cast<double>(cosl(ang)), static_cast<double>(sinl(ang))};
    }
    std::vector<std::complex<double>> out(P);
    for (std::uint64_t s = 0; s < P; ++s) {
      double re = 0, im = 0, cr = 0, ci = 0;
      for (const std::uint32_t a : set) {
        const auto w = roots[(static_cast<std::uint64_t>(a) * s) % P];
        double y = w.real() - cr, t = re + y;
        cr = (t - re) - y;
        re = t;
        y = w.imag() - ci;
        t = im + y;
        ci = (t - im) - y;
        im = t;
      }
      out[s] = {re, im};
    }
    return out;
  }
  std::vector<std::complex<double>> x(P);
  for (const std::uint32_t a : set) x[a] = std::complex<double>(1, 0);
  return bluestein(x);
}

std::vector<double> indicator_dft_mags(const std::vector<std::uint32_t>& set, std::uint64_t P) {
  const auto c = indicator_dft(set, P);
  std::vector<double> mags(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) mags[i] = std::abs(c[i]);
  return mags;
}

}  // namespace lowmult
