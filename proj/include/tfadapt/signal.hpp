#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace tfadapt {

/// Sampled mono waveform. Amplitudes are dimensionless, nominally in [-1, 1].
struct Signal {
  std::vector<double> samples;
  int sample_rate = 0;

  std::size_t size() const { return samples.size(); }
  double duration() const {
    return static_cast<double>(samples.size()) / sample_rate;
  }
};

inline void validate(const Signal& s, const char* who) {
  if (s.samples.empty())
    throw std::invalid_argument(std::string(who) + ": empty signal");
  if (s.sample_rate <= 0)
    throw std::invalid_argument(std::string(who) + ": sample_rate must be > 0");
}

namespace detail {

inline std::size_t sample_count(double duration, int sample_rate,
                                const char* who) {
  if (sample_rate <= 0)
    throw std::invalid_argument(std::string(who) +
                                ": sample_rate must be > 0");
  if (!(duration > 0.0))
    throw std::invalid_argument(std::string(who) + ": duration must be > 0");
  const auto n = std::llround(duration * sample_rate);
  if (n < 1) throw std::invalid_argument(std::string(who) + ": empty signal");
  return static_cast<std::size_t>(n);
}

}  // namespace detail

/// Pure tone: samples[t] = amplitude * sin(2*pi*freq*t/sample_rate).
inline Signal gen_sinusoid(double freq, double duration, int sample_rate,
                           double amplitude = 1.0) {
  const std::size_t n =
      detail::sample_count(duration, sample_rate, "gen_sinusoid");
  if (!(freq > 0.0) || freq >= 0.5 * sample_rate)
    throw std::invalid_argument("gen_sinusoid: freq at or above Nyquist");
  Signal s;
  s.sample_rate = sample_rate;
  s.samples.resize(n);
  const double two_pi = 2.0 * std::numbers::pi;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / sample_rate;
    s.samples[i] = amplitude * std::sin(two_pi * freq * t);
  }
  return s;
}

/// Sinusoid with sinusoidal frequency modulation.
///
/// phase(t) = 2*pi*carrier*t + (mod_depth/mod_rate) * sin(2*pi*mod_rate*t),
/// so the instantaneous frequency is carrier + mod_depth*cos(2*pi*mod_rate*t)
/// and must stay inside (0, Nyquist) for all t.
inline Signal gen_fm_sinusoid(double carrier, double mod_rate,
                              double mod_depth, double duration,
                              int sample_rate) {
  const std::size_t n =
      detail::sample_count(duration, sample_rate, "gen_fm_sinusoid");
  if (mod_depth < 0.0)
    throw std::invalid_argument("gen_fm_sinusoid: mod_depth must be >= 0");
  if (mod_depth > 0.0 && !(mod_rate > 0.0))
    throw std::invalid_argument("gen_fm_sinusoid: mod_rate must be > 0");
  if (!(carrier - mod_depth > 0.0) ||
      carrier + mod_depth >= 0.5 * sample_rate)
    throw std::invalid_argument(
        "gen_fm_sinusoid: instantaneous frequency leaves (0, Nyquist)");
  Signal s;
  s.sample_rate = sample_rate;
  s.samples.resize(n);
  const double two_pi = 2.0 * std::numbers::pi;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / sample_rate;
    // mod_depth == 0 keeps the phase bitwise identical to gen_sinusoid
    const double mod =
        mod_depth > 0.0
            ? (mod_depth / mod_rate) * std::sin(two_pi * mod_rate * t)
            : 0.0;
    s.samples[i] = std::sin(two_pi * carrier * t + mod);
  }
  return s;
}

/// Unit impulse at `position`, zeros elsewhere.
inline Signal gen_impulse(std::size_t position, double duration,
                          int sample_rate) {
  const std::size_t n =
      detail::sample_count(duration, sample_rate, "gen_impulse");
  if (position >= n)
    throw std::invalid_argument("gen_impulse: position out of range");
  Signal s;
  s.sample_rate = sample_rate;
  s.samples.assign(n, 0.0);
  s.samples[position] = 1.0;
  return s;
}

}  // namespace tfadapt
