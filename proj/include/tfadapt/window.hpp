#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace tfadapt {

/// Discrete analysis window at scale `scale` relative to its prototype.
///
/// `values` holds the unscaled window shape (peak 1); `amplitude_norm` is the
/// 1/sqrt(scale) factor that keeps energy invariant across scales. The
/// effective analysis window is amplitude_norm * values. `hop` stays 0 until
/// the window is placed in a frame.
struct ScaledWindow {
  std::vector<double> values;
  double scale = 1.0;
  double amplitude_norm = 1.0;
  std::size_t hop = 0;

  std::size_t length() const { return values.size(); }
  double effective(std::size_t n) const { return amplitude_norm * values[n]; }
};

/// Frame bounds of the painless case, reported as the extrema of the
/// overlap-add power sum sum_n h^2(t - n*hop) over one hop period (the
/// constant 1/b factor is omitted). lower == 0 means "not a frame".
struct FrameBounds {
  double lower = 0.0;
  double upper = 0.0;
};

/// Periodic Hanning window: values[n] = 0.5*(1 - cos(2*pi*n/length)).
inline ScaledWindow make_hanning(std::size_t length) {
  if (length < 2)
    throw std::invalid_argument("make_hanning: length must be >= 2");
  ScaledWindow w;
  w.values.resize(length);
  for (std::size_t n = 0; n < length; ++n)
    w.values[n] =
        0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * n / length));
  return w;
}

/// Rescale a window by factor l: length round(l*length), amplitude 1/sqrt(l).
inline ScaledWindow scale_window(const ScaledWindow& base, double l) {
  if (!(l > 0.0))
    throw std::invalid_argument("scale_window: scale must be > 0");
  const auto new_len = std::llround(l * static_cast<double>(base.length()));
  if (new_len < 2)
    throw std::invalid_argument("scale_window: resulting length < 2");
  ScaledWindow w = make_hanning(static_cast<std::size_t>(new_len));
  w.scale = base.scale * l;
  w.amplitude_norm = base.amplitude_norm / std::sqrt(l);
  return w;
}

/// Extrema of sum_n values^2[t - n*hop] over the hop period t in [0, hop).
inline FrameBounds estimate_frame_bounds(const ScaledWindow& window,
                                         std::size_t hop) {
  if (hop < 1)
    throw std::invalid_argument("estimate_frame_bounds: hop must be >= 1");
  FrameBounds fb;
  fb.lower = std::numeric_limits<double>::infinity();
  fb.upper = 0.0;
  for (std::size_t t = 0; t < hop; ++t) {
    double s = 0.0;
    for (std::size_t i = t; i < window.length(); i += hop)
      s += window.values[i] * window.values[i];
    fb.lower = std::min(fb.lower, s);
    fb.upper = std::max(fb.upper, s);
  }
  return fb;
}

}  // namespace tfadapt
