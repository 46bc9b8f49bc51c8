#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "tfadapt/stft.hpp"

namespace tfadapt {

/// Rectangular index region of a spectrogram slab, half-open ranges.
struct Region {
  std::size_t frame_begin = 0;
  std::size_t frame_end = 0;
  std::size_t bin_begin = 0;
  std::size_t bin_end = 0;

  std::size_t cells() const {
    return (frame_end - frame_begin) * (bin_end - bin_begin);
  }
};

inline Region full_region(const SpectrogramSlab& slab) {
  return Region{0, slab.frame_count, 0, slab.bins};
}

/// Spectrogram region normalized into a discrete probability density.
/// cell_area is the lattice cell a*b in seconds*Hz.
struct Density {
  std::vector<double> values;
  double cell_area = 0.0;
};

/// Entropy order alpha >= 0. alpha = 1 is the Shannon limit, alpha = 0
/// counts the support.
struct EntropyOrder {
  double alpha = 0.7;
};

/// Values below this do not count as support in the alpha = 0 case, so that
/// floating-point residue from silence is not mistaken for signal.
inline constexpr double support_epsilon = 1e-12;

/// Calibrated tolerances for the numerically-verified invariances (bits).
inline constexpr double hop_invariance_tol_bits = 0.1;
inline constexpr double scaling_law_tol_bits = 0.15;
inline constexpr double fft_padding_tol_bits = 0.05;

/// Normalize the region to unit mass; empty (all-zero) regions yield nullopt.
inline std::optional<Density> try_normalize_density(const SpectrogramSlab& slab,
                                                    const Region& g) {
  if (g.frame_begin >= g.frame_end || g.bin_begin >= g.bin_end ||
      g.frame_end > slab.frame_count || g.bin_end > slab.bins)
    throw std::invalid_argument("normalize_density: bad region");
  Density d;
  d.cell_area = slab.time_step_a * slab.freq_step_b;
  d.values.reserve(g.cells());
  double total = 0.0;
  for (std::size_t n = g.frame_begin; n < g.frame_end; ++n)
    for (std::size_t k = g.bin_begin; k < g.bin_end; ++k) {
      const double p = slab.at(n, k);
      d.values.push_back(p);
      total += p;
    }
  if (!(total > 0.0)) return std::nullopt;
  for (double& v : d.values) v /= total;
  return d;
}

inline Density normalize_density(const SpectrogramSlab& slab,
                                 const Region& g) {
  auto d = try_normalize_density(slab, g);
  if (!d)
    throw std::domain_error("normalize_density: degenerate segment");
  return *std::move(d);
}

inline Density normalize_density(const SpectrogramSlab& slab) {
  return normalize_density(slab, full_region(slab));
}

/// Renyi entropy of the density in bits:
///   alpha not in {0,1}:  1/(1-alpha) * log2 sum v^alpha + log2(cell_area)
///   alpha = 1 (Shannon): -sum v*log2 v + log2(cell_area)
///   alpha = 0:           log2 |{v > support_epsilon}| + log2(cell_area)
inline double renyi_entropy(const Density& d, EntropyOrder order) {
  const double alpha = order.alpha;
  if (alpha < 0.0)
    throw std::invalid_argument("renyi_entropy: negative alpha");
  if (d.values.empty())
    throw std::invalid_argument("renyi_entropy: empty density");
  if (!(d.cell_area > 0.0))
    throw std::invalid_argument("renyi_entropy: cell_area must be > 0");

  const double area_term = std::log2(d.cell_area);
  if (alpha == 0.0) {
    std::size_t support = 0;
    for (double v : d.values)
      if (v > support_epsilon) ++support;
    return std::log2(static_cast<double>(support)) + area_term;
  }
  if (alpha == 1.0) {
    double h = 0.0;
    for (double v : d.values)
      if (v > 0.0) h -= v * std::log2(v);
    return h + area_term;
  }
  double s = 0.0;
  for (double v : d.values)
    if (v > 0.0) s += std::pow(v, alpha);
  return std::log2(s) / (1.0 - alpha) + area_term;
}

}  // namespace tfadapt
