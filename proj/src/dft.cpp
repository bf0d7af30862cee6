#include "congbox/dft.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>

namespace congbox {

namespace {

using cd = std::complex<double>;

// In-place radix-2 FFT with exp(-2 pi i k/m) twiddles (forward) or their
// conjugates (inverse, unnormalized).
void fft_pow2(std::vector<cd>& a, const std::vector<cd>& twiddle, bool inverse) {
  const std::size_t m = a.size();
  for (std::size_t i = 1, j = 0; i < m; ++i) {
    std::size_t bit = m >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= m; len <<= 1) {
    const std::size_t half = len / 2;
    const std::size_t stride = m / len;
    for (std::size_t i = 0; i < m; i += len) {
      for (std::size_t k = 0; k < half; ++k) {
        cd w = twiddle[k * stride];
        if (inverse) w = std::conj(w);
        const cd v = a[i + k + half] * w;
        a[i + k + half] = a[i + k] - v;
        a[i + k] += v;
      }
    }
  }
}

}  // namespace

CyclicDft::CyclicDft(std::size_t n) : n_(n) {
  if (n == 0) throw std::invalid_argument("CyclicDft length must be positive");
  const bool pow2 = std::has_single_bit(n);
  m_ = pow2 ? n : std::bit_ceil(2 * n - 1);

  twiddle_.resize(std::max<std::size_t>(1, m_ / 2));
  for (std::size_t k = 0; k < twiddle_.size(); ++k) {
    twiddle_[k] = std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(m_));
  }
  if (pow2) return;

  // j^2 is reduced mod 2N before the trig call so the angle stays small.
  chirp_.resize(n);
  const std::uint64_t two_n = 2 * static_cast<std::uint64_t>(n);
  for (std::size_t j = 0; j < n; ++j) {
    const std::uint64_t sq = static_cast<std::uint64_t>(j) * j % two_n;
    chirp_[j] = std::polar(1.0, std::numbers::pi * static_cast<double>(sq) / static_cast<double>(n));
  }
  kernel_ft_.assign(m_, cd{});
  kernel_ft_[0] = std::conj(chirp_[0]);
  for (std::size_t j = 1; j < n; ++j) {
    kernel_ft_[j] = std::conj(chirp_[j]);
    kernel_ft_[m_ - j] = std::conj(chirp_[j]);
  }
  fft_pow2(kernel_ft_, twiddle_, false);
}

std::vector<cd> CyclicDft::operator()(std::span<const cd> in) const {
  if (in.size() != n_) throw std::invalid_argument("CyclicDft input length mismatch");
  if (chirp_.empty()) {
    std::vector<cd> a(in.begin(), in.end());
    fft_pow2(a, twiddle_, true);
    return a;
  }
  // t*j = (t^2 + j^2 - (t-j)^2)/2, so out[t] = c[t] * sum_j (in[j] c[j]) conj(c[t-j]).
  std::vector<cd> a(m_, cd{});
  for (std::size_t j = 0; j < n_; ++j) a[j] = in[j] * chirp_[j];
  fft_pow2(a, twiddle_, false);
  for (std::size_t k = 0; k < m_; ++k) a[k] *= kernel_ft_[k];
  fft_pow2(a, twiddle_, true);
  const double scale = 1.0 / static_cast<double>(m_);
  std::vector<cd> out(n_);
  for (std::size_t t = 0; t < n_; ++t) out[t] = a[t] * scale * chirp_[t];
  return out;
}

}  // namespace congbox
