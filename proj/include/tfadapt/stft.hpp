#pragma once

#include <algorithm>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "tfadapt/fft.hpp"
#include "tfadapt/signal.hpp"
#include "tfadapt/window.hpp"

namespace tfadapt {

inline constexpr std::size_t no_window_id = static_cast<std::size_t>(-1);

/// Sampled STFT over a Gabor lattice: coeffs[n][k], non-negative bins only.
///
/// Frame n covers samples [start_offset + n*hop, start_offset + n*hop +
/// window_length); the phase convention references the window start. Frames
/// may overhang the signal edges (zero-padded).
struct StftMatrix {
  std::vector<std::complex<double>> coeffs;  // row-major [frame][bin]
  std::size_t frame_count = 0;
  std::size_t bins = 0;  // fft_size/2 + 1
  std::size_t hop = 0;
  std::size_t fft_size = 0;
  std::size_t window_length = 0;
  std::int64_t start_offset = 0;
  int sample_rate = 0;
  std::size_t window_id = no_window_id;

  std::complex<double>& at(std::size_t n, std::size_t k) {
    return coeffs[n * bins + k];
  }
  const std::complex<double>& at(std::size_t n, std::size_t k) const {
    return coeffs[n * bins + k];
  }
};

/// |STFT|^2 on the same lattice, with the lattice steps in physical units.
struct SpectrogramSlab {
  std::vector<double> power;  // row-major [frame][bin]
  std::size_t frame_count = 0;
  std::size_t bins = 0;
  std::size_t hop = 0;
  std::size_t fft_size = 0;
  std::int64_t start_offset = 0;
  int sample_rate = 0;
  double time_step_a = 0.0;  // seconds
  double freq_step_b = 0.0;  // Hz

  double& at(std::size_t n, std::size_t k) { return power[n * bins + k]; }
  const double& at(std::size_t n, std::size_t k) const {
    return power[n * bins + k];
  }
};

/// STFT of `signal` with the given window, hop and FFT size.
///
/// coeffs[n][k] = sum_t f(start + n*hop + t) * g(t) * e^(-2*pi*i*k*t/fft_size)
/// with g = amplitude_norm * values, zero-padded to fft_size.
inline StftMatrix stft(const Signal& signal, const ScaledWindow& window,
                       std::size_t hop, std::size_t fft_size,
                       std::int64_t start, std::size_t frame_count) {
  validate(signal, "stft");
  if (fft_size < window.length())
    throw std::invalid_argument("stft: fft_size < window length");
  if (frame_count == 0)
    throw std::invalid_argument("stft: frame_count must be > 0");
  if (hop < 1) throw std::invalid_argument("stft: hop must be >= 1");

  const Fft fft(fft_size);
  const std::size_t len = window.length();
  const auto n_samples = static_cast<std::int64_t>(signal.samples.size());

  StftMatrix m;
  m.frame_count = frame_count;
  m.bins = fft_size / 2 + 1;
  m.hop = hop;
  m.fft_size = fft_size;
  m.window_length = len;
  m.start_offset = start;
  m.sample_rate = signal.sample_rate;
  m.coeffs.resize(frame_count * m.bins);

  std::vector<std::complex<double>> buf(fft_size);
  for (std::size_t n = 0; n < frame_count; ++n) {
    const std::int64_t pos = start + static_cast<std::int64_t>(n * hop);
    std::fill(buf.begin(), buf.end(), std::complex<double>(0.0, 0.0));
    for (std::size_t t = 0; t < len; ++t) {
      const std::int64_t idx = pos + static_cast<std::int64_t>(t);
      if (idx >= 0 && idx < n_samples)
        buf[t] = signal.samples[static_cast<std::size_t>(idx)] *
                 window.effective(t);
    }
    fft.forward(buf);
    for (std::size_t k = 0; k < m.bins; ++k) m.at(n, k) = buf[k];
  }
  return m;
}

/// STFT covering the whole signal, frame 0 at sample 0.
inline StftMatrix stft(const Signal& signal, const ScaledWindow& window,
                       std::size_t hop, std::size_t fft_size) {
  validate(signal, "stft");
  if (hop < 1) throw std::invalid_argument("stft: hop must be >= 1");
  const std::size_t frames = (signal.samples.size() - 1) / hop + 1;
  return stft(signal, window, hop, fft_size, 0, frames);
}

inline SpectrogramSlab spectrogram(const StftMatrix& m) {
  SpectrogramSlab s;
  s.frame_count = m.frame_count;
  s.bins = m.bins;
  s.hop = m.hop;
  s.fft_size = m.fft_size;
  s.start_offset = m.start_offset;
  s.sample_rate = m.sample_rate;
  s.time_step_a = static_cast<double>(m.hop) / m.sample_rate;
  s.freq_step_b = static_cast<double>(m.sample_rate) / m.fft_size;
  s.power.resize(m.coeffs.size());
  for (std::size_t i = 0; i < m.coeffs.size(); ++i)
    s.power[i] = std::norm(m.coeffs[i]);
  return s;
}

}  // namespace tfadapt
