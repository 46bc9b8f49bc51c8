#pragma once

#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace tfadapt {

/// Iterative radix-2 FFT for power-of-two sizes, with a cached twiddle table.
class Fft {
 public:
  explicit Fft(std::size_t n) : n_(n) {
    if (n == 0 || (n & (n - 1)) != 0)
      throw std::invalid_argument("Fft: size must be a power of two");
    twiddles_.resize(n / 2);
    for (std::size_t k = 0; k < n / 2; ++k)
      twiddles_[k] =
          std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(k) / n);
  }

  std::size_t size() const { return n_; }

  void forward(std::vector<std::complex<double>>& x) const {
    if (x.size() != n_) throw std::invalid_argument("Fft: size mismatch");
    bit_reverse(x);
    for (std::size_t len = 2; len <= n_; len <<= 1) {
      const std::size_t half = len >> 1;
      const std::size_t step = n_ / len;
      for (std::size_t block = 0; block < n_; block += len) {
        for (std::size_t k = 0; k < half; ++k) {
          const std::complex<double> t = twiddles_[k * step] * x[block + half + k];
          const std::complex<double> u = x[block + k];
          x[block + k] = u + t;
          x[block + half + k] = u - t;
        }
      }
    }
  }

  void inverse(std::vector<std::complex<double>>& x) const {
    if (x.size() != n_) throw std::invalid_argument("Fft: size mismatch");
    for (auto& v : x) v = std::conj(v);
    forward(x);
    const double inv_n = 1.0 / static_cast<double>(n_);
    for (auto& v : x) v = std::conj(v) * inv_n;
  }

 private:
  void bit_reverse(std::vector<std::complex<double>>& x) const {
    for (std::size_t i = 1, j = 0; i < n_; ++i) {
      std::size_t bit = n_ >> 1;
      for (; j & bit; bit >>= 1) j ^= bit;
      j ^= bit;
      if (i < j) std::swap(x[i], x[j]);
    }
  }

  std::size_t n_;
  std::vector<std::complex<double>> twiddles_;
};

}  // namespace tfadapt
