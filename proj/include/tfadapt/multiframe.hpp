#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "tfadapt/window.hpp"

namespace tfadapt {

/// Ordered family of scaled windows sharing one FFT size (hence one frequency
/// step b) and one overlap ratio (hence one redundancy).
struct MultiFrame {
  std::vector<ScaledWindow> windows;  // ascending length
  std::size_t fft_size = 0;
  double overlap = 0.0;

  std::size_t count() const { return windows.size(); }
  const ScaledWindow& smallest() const { return windows.front(); }
  const ScaledWindow& largest() const { return windows.back(); }
};

namespace detail {

inline std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

inline std::size_t round_even(double x) {
  return 2 * static_cast<std::size_t>(std::llround(0.5 * x));
}

}  // namespace detail

/// Build the equal-redundancy multi-frame.
///
/// Window lengths form a geometric progression from min_len to max_len with
/// `count` terms, rounded to the nearest even integer (duplicates dropped).
/// Every window gets hop = round((1-overlap)*length), so all frames share the
/// same overlap. One fft_size (smallest power of two >= the largest length)
/// fixes the common frequency step; shorter windows are zero-padded.
inline MultiFrame build_multiframe(std::size_t min_len, std::size_t max_len,
                                   std::size_t count, double overlap) {
  if (min_len < 2 || min_len >= max_len)
    throw std::invalid_argument(
        "build_multiframe: need 2 <= min_len < max_len");
  if (count < 2)
    throw std::invalid_argument("build_multiframe: count must be >= 2");
  if (!(overlap >= 0.5) || !(overlap < 1.0))
    throw std::invalid_argument(
        "build_multiframe: overlap must be in [0.5, 1)");

  std::vector<std::size_t> lengths;
  const double ratio = static_cast<double>(max_len) / min_len;
  for (std::size_t i = 0; i < count; ++i) {
    const double t = static_cast<double>(i) / (count - 1);
    std::size_t len = detail::round_even(min_len * std::pow(ratio, t));
    if (len < 2) len = 2;
    if (lengths.empty() || len > lengths.back()) lengths.push_back(len);
  }

  MultiFrame mf;
  mf.overlap = overlap;
  mf.fft_size = detail::next_pow2(lengths.back());
  const double base_len = static_cast<double>(lengths.front());
  for (std::size_t len : lengths) {
    ScaledWindow w = make_hanning(len);
    w.scale = len / base_len;
    w.amplitude_norm = 1.0 / std::sqrt(w.scale);
    const auto hop = std::llround((1.0 - overlap) * static_cast<double>(len));
    w.hop = hop < 1 ? 1 : static_cast<std::size_t>(hop);
    mf.windows.push_back(std::move(w));
  }
  return mf;
}

}  // namespace tfadapt
