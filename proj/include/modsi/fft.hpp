#pragma once

#include <complex>
#include <span>
#include <vector>

// Thin wrapper over FFTW. Planning is serialized internally and every transform runs
// on FFTW-allocated buffers, so results do not depend on caller alignment or on the
// thread that executes them.
namespace modsi::fft {

using cvec = std::vector<std::complex<double>>;

/// Forward DFT: X[k] = sum_n x[n] exp(-2πi kn/N).
cvec forward(std::span<const std::complex<double>> x);
cvec forward(std::span<const double> x);

/// Inverse DFT including the 1/N factor.
cvec inverse(std::span<const std::complex<double>> X);

/// Signed frequency index of DFT bin b for a transform of length n: b or b - n.
inline long signed_index(std::size_t b, std::size_t n) {
  const auto sb = static_cast<long>(b);
  return (2 * b > n) ? sb - static_cast<long>(n) : sb;
}

/// Bin position of signed index k in a transform of length n.
inline std::size_t bin_of(long k, std::size_t n) {
  const auto sn = static_cast<long>(n);
  return static_cast<std::size_t>(((k % sn) + sn) % sn);
}

}  // namespace modsi::fft
