#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace congbox {

/// Unnormalized cyclic transform of arbitrary length N with a positive sign:
///
///   out[t] = sum_{j=0}^{N-1} in[j] * exp(+2 pi i t j / N).
///
/// Power-of-two lengths use an iterative radix-2 FFT; any other length goes
/// through Bluestein's chirp-z reduction to a power-of-two convolution. The
/// plan precomputes the chirp and its spectrum and is immutable afterwards,
/// so one plan can be shared across threads.
class CyclicDft {
 public:
  explicit CyclicDft(std::size_t n);

  std::size_t size() const noexcept { return n_; }

  std::vector<std::complex<double>> operator()(std::span<const std::complex<double>> in) const;

 private:
  std::size_t n_;
  std::size_t m_;                               // convolution length (power of two)
  std::vector<std::complex<double>> chirp_;     // exp(+i pi j^2 / N), j < N
  std::vector<std::complex<double>> kernel_ft_; // FFT of conj(chirp) wrapped to length m
  std::vector<std::complex<double>> twiddle_;   // exp(-2 pi i k / m), k < m/2
};

}  // namespace congbox
