#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "tfadapt/adapt.hpp"
#include "tfadapt/fft.hpp"
#include "tfadapt/stft.hpp"
#include "tfadapt/window.hpp"

namespace tfadapt {

/// Below this overlap-add power sum a sample counts as uncovered; the
/// reconstruction raises an error instead of dividing.
inline constexpr double coverage_epsilon = 1e-12;

/// Time-domain windowed segments recovered from an STFT matrix, one buffer of
/// window length per frame. Frame n sits at start_offset + n*hop.
struct WindowedSegments {
  std::vector<std::vector<double>> buffers;
  std::int64_t start_offset = 0;
  std::size_t hop = 0;
  int sample_rate = 0;
};

/// Invert each frame's spectrum (negative bins restored by conjugate
/// symmetry) and truncate to the window length. The coefficients need not be
/// a true STFT; modified coefficients are legal input for the least-squares
/// reconstruction.
inline WindowedSegments extract_windowed_segments(const StftMatrix& m,
                                                  const ScaledWindow& window) {
  if (m.window_length != window.length())
    throw std::invalid_argument(
        "extract_windowed_segments: window length mismatch");
  if (m.fft_size < window.length() || m.bins != m.fft_size / 2 + 1)
    throw std::invalid_argument(
        "extract_windowed_segments: incompatible dimensions");

  const Fft fft(m.fft_size);
  WindowedSegments segs;
  segs.start_offset = m.start_offset;
  segs.hop = m.hop;
  segs.sample_rate = m.sample_rate;
  segs.buffers.resize(m.frame_count);

  std::vector<std::complex<double>> buf(m.fft_size);
  for (std::size_t n = 0; n < m.frame_count; ++n) {
    for (std::size_t k = 0; k < m.bins; ++k) buf[k] = m.at(n, k);
    for (std::size_t k = 1; k + 1 < m.bins; ++k)
      buf[m.fft_size - k] = std::conj(m.at(n, k));
    fft.inverse(buf);
    auto& out = segs.buffers[n];
    out.resize(window.length());
    for (std::size_t t = 0; t < window.length(); ++t) out[t] = buf[t].real();
  }
  return segs;
}

namespace detail {

/// Accumulate the weighted overlap-add numerator and denominator over
/// [0, out_len). The effective window (amplitude_norm included) enters both,
/// so the expansion inverts exactly what the analysis applied.
inline void accumulate_weighted(const WindowedSegments& segs,
                                const ScaledWindow& window,
                                std::vector<double>& num,
                                std::vector<double>& den) {
  const auto out_len = static_cast<std::int64_t>(num.size());
  const std::size_t len = window.length();
  for (std::size_t n = 0; n < segs.buffers.size(); ++n) {
    const std::int64_t pos =
        segs.start_offset + static_cast<std::int64_t>(n * segs.hop);
    for (std::size_t t = 0; t < len; ++t) {
      const std::int64_t idx = pos + static_cast<std::int64_t>(t);
      if (idx < 0 || idx >= out_len) continue;
      const double w = window.effective(t);
      num[static_cast<std::size_t>(idx)] += w * segs.buffers[n][t];
      den[static_cast<std::size_t>(idx)] += w * w;
    }
  }
}

inline Signal divide_out(std::vector<double>&& num,
                         const std::vector<double>& den, int sample_rate,
                         const char* who) {
  for (std::size_t i = 0; i < num.size(); ++i) {
    if (!(den[i] > coverage_epsilon))
      throw std::runtime_error(std::string(who) +
                               ": zero overlap-add power at sample " +
                               std::to_string(i) + " (not a frame)");
    num[i] /= den[i];
  }
  return Signal{std::move(num), sample_rate};
}

}  // namespace detail

/// Weighted overlap-add expansion over a fixed window and hop:
///   f(l) = sum_n w(l - n*hop) f_h(n, l) / sum_n w^2(l - n*hop).
/// Exact for unmodified coefficients; for modified ones this is the signal
/// whose STFT is closest in least squares to the given coefficients.
inline Signal reconstruct_fixed(const WindowedSegments& segs,
                                const ScaledWindow& window,
                                std::size_t output_len) {
  if (output_len == 0)
    throw std::invalid_argument("reconstruct_fixed: output_len must be > 0");
  if (!segs.buffers.empty() && segs.buffers.front().size() != window.length())
    throw std::invalid_argument("reconstruct_fixed: window length mismatch");
  std::vector<double> num(output_len, 0.0), den(output_len, 0.0);
  detail::accumulate_weighted(segs, window, num, den);
  return detail::divide_out(std::move(num), den, segs.sample_rate,
                            "reconstruct_fixed");
}

/// Variable-window, variable-hop expansion over every retained frame of the
/// adapted analysis (transition zones contribute both neighbors). Exact for
/// unmodified coefficients; output is trimmed to the original signal length.
inline Signal reconstruct_adapted(const AdaptedAnalysis& aa) {
  if (aa.slices.empty())
    throw std::invalid_argument("reconstruct_adapted: empty analysis");
  std::vector<double> num(aa.signal_len, 0.0), den(aa.signal_len, 0.0);
  for (const AdaptedSlice& slice : aa.slices) {
    const ScaledWindow& w = aa.multiframe.windows.at(slice.window_id);
    detail::accumulate_weighted(extract_windowed_segments(slice.m, w), w, num,
                                den);
  }
  return detail::divide_out(std::move(num), den, aa.sample_rate,
                            "reconstruct_adapted: coverage violation");
}

}  // namespace tfadapt
