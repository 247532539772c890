#ifndef LOWMULT_DFT_HPP
#define LOWMULT_DFT_HPP

#include <complex>
#include <cstdint>
#include <vector>

namespace lowmult {

// transforms use the e(+2 pi i a s / P) convention throughout

inline constexpr std::uint64_t kDftDirectCap = 2003;

// full transform of an indicator set: exact-angle compensated summation up to
// kDftDirectCap, Bluestein FFT above
std::vector<std::complex<double>> indicator_dft(const std::vector<std::uint32_t>& set,
                                                std::uint64_t P);

std::vector<double> indicator_dft_mags(const std::vector<std::uint32_t>& set, std::uint64_t P);

}  // namespace lowmult

#endif
