#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <utility>
#include <vector>

#include "tfadapt/entropy.hpp"
#include "tfadapt/multiframe.hpp"
#include "tfadapt/signal.hpp"
#include "tfadapt/stft.hpp"

namespace tfadapt {

/// Segmentation of a signal into equally long, overlapping analysis segments.
///
/// Segment geometry is anchored to the largest window's frames: a segment
/// spans frames_per_segment frames of the largest window,
///   segment_length = (frames_per_segment - 1)*hop_max + length_max,
/// and consecutive segments share overlap_frames frame positions, so the
/// stride is (frames_per_segment - overlap_frames)*hop_max. overlap_len
/// counts the shared frame span, overlap_frames*hop_max.
struct SegmentPlan {
  struct Segment {
    std::int64_t start = 0;
    std::size_t length = 0;
  };
  std::vector<Segment> segments;
  std::size_t segment_length = 0;
  std::size_t stride = 0;
  std::size_t overlap_len = 0;
  std::size_t frames_per_segment = 0;
  std::size_t overlap_frames = 0;
  std::size_t hop_max = 0;
  bool short_input = false;  // signal shorter than one segment
};

inline SegmentPlan plan_segments(std::size_t signal_len, const MultiFrame& mf,
                                 std::size_t frames_per_segment,
                                 std::size_t overlap_frames) {
  if (mf.windows.empty())
    throw std::invalid_argument("plan_segments: empty multiframe");
  if (signal_len == 0)
    throw std::invalid_argument("plan_segments: empty signal");
  if (frames_per_segment <= overlap_frames)
    throw std::invalid_argument(
        "plan_segments: need frames_per_segment > overlap_frames");

  SegmentPlan plan;
  plan.frames_per_segment = frames_per_segment;
  plan.overlap_frames = overlap_frames;
  plan.hop_max = mf.largest().hop;
  plan.segment_length =
      (frames_per_segment - 1) * plan.hop_max + mf.largest().length();
  plan.stride = (frames_per_segment - overlap_frames) * plan.hop_max;
  plan.overlap_len = overlap_frames * plan.hop_max;
  plan.short_input = signal_len < plan.segment_length;

  const std::size_t count =
      signal_len <= plan.segment_length
          ? 1
          : (signal_len - plan.segment_length + plan.stride - 1) / plan.stride +
                1;
  plan.segments.reserve(count);
  for (std::size_t s = 0; s < count; ++s)
    plan.segments.push_back(
        {static_cast<std::int64_t>(s * plan.stride), plan.segment_length});
  return plan;
}

/// Weight the segment boundaries with the two halves of the largest window.
/// Used only for the entropy evaluations, never for the retained coefficients.
inline std::vector<double> preweight_segment(std::vector<double> seg,
                                             const MultiFrame& mf) {
  const ScaledWindow& h = mf.largest();
  const std::size_t len = h.length();
  if (seg.size() < len)
    throw std::invalid_argument("preweight_segment: segment too short");
  const std::size_t half = len / 2;
  for (std::size_t i = 0; i < half; ++i) seg[i] *= h.values[i];
  const std::size_t tail = len - half;
  const std::size_t base = seg.size() - tail;
  for (std::size_t i = 0; i < tail; ++i) seg[base + i] *= h.values[half + i];
  return seg;
}

enum class TieBreak {
  prefer_larger,  // stationarity is the default presumption
  prefer_smaller,
};

/// Per-segment selection result. entropies is empty when the segment is
/// degenerate (silent); chosen is then inherited by the caller's policy.
struct SelectionEntry {
  std::int64_t start = 0;
  std::size_t length = 0;
  std::vector<double> entropies;  // one per window id, bits
  std::size_t chosen = no_window_id;
  bool degenerate = false;
};

struct SelectionReport {
  double alpha = 0.0;
  std::vector<std::size_t> window_lengths;
  std::vector<SelectionEntry> entries;
};

namespace detail {

/// Entropy of every window's analysis of one segment buffer, each window at
/// its own hop, normalized over the whole frequency lattice. Windows that see
/// no energy get +inf; an all-silent segment yields an empty vector.
inline std::vector<double> segment_entropies(const std::vector<double>& seg,
                                             int sample_rate,
                                             const MultiFrame& mf,
                                             EntropyOrder alpha) {
  Signal view{seg, sample_rate};
  std::vector<double> entropies;
  entropies.reserve(mf.count());
  bool any_energy = false;
  for (const ScaledWindow& w : mf.windows) {
    if (seg.size() < w.length())
      throw std::invalid_argument("segment_entropies: segment too short");
    const std::size_t frames = (seg.size() - w.length()) / w.hop + 1;
    const SpectrogramSlab slab =
        spectrogram(stft(view, w, w.hop, mf.fft_size, 0, frames));
    if (auto d = try_normalize_density(slab, full_region(slab))) {
      entropies.push_back(renyi_entropy(*d, alpha));
      any_energy = true;
    } else {
      entropies.push_back(std::numeric_limits<double>::infinity());
    }
  }
  if (!any_energy) entropies.clear();
  return entropies;
}

inline std::size_t resolve_choice(const std::vector<double>& entropies,
                                  TieBreak tie_break) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < entropies.size(); ++i) {
    const bool better = tie_break == TieBreak::prefer_larger
                            ? entropies[i] <= entropies[best]
                            : entropies[i] < entropies[best];
    if (better) best = i;
  }
  return best;
}

/// Static-partition parallel loop; deterministic output placement is the
/// caller's job (write by index).
template <typename Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
  if (threads == 0) threads = std::thread::hardware_concurrency();
  if (threads <= 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(threads, count));
  std::vector<std::thread> pool;
  std::exception_ptr error;
  std::mutex error_mutex;
  pool.reserve(workers);
  for (unsigned t = 0; t < workers; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::size_t i = t; i < count; i += workers) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace detail

/// Evaluate every window on a (pre-weighted) segment and pick the sparsest.
/// Silent segments come back flagged, with chosen = fallback_window (the
/// largest window when no fallback is given).
inline SelectionEntry select_window(const std::vector<double>& segment,
                                    int sample_rate, const MultiFrame& mf,
                                    EntropyOrder alpha,
                                    std::size_t fallback_window = no_window_id,
                                    TieBreak tie_break =
                                        TieBreak::prefer_larger) {
  SelectionEntry entry;
  entry.start = 0;
  entry.length = segment.size();
  entry.entropies =
      detail::segment_entropies(segment, sample_rate, mf, alpha);
  if (entry.entropies.empty()) {
    entry.degenerate = true;
    entry.chosen =
        fallback_window == no_window_id ? mf.count() - 1 : fallback_window;
  } else {
    entry.chosen = detail::resolve_choice(entry.entropies, tie_break);
  }
  return entry;
}

/// One retained slice: the chosen window's STFT over one analysis segment.
struct AdaptedSlice {
  std::size_t segment = 0;  // index into the plan
  std::size_t window_id = no_window_id;
  StftMatrix m;
};

/// Overlap between consecutive segments whose chosen windows differ. Both
/// neighbors' coefficients are retained there; the display cross-fades them.
struct TransitionZone {
  std::int64_t begin = 0;
  std::int64_t end = 0;
  std::size_t left_window = no_window_id;
  std::size_t right_window = no_window_id;
};

/// The reduced multi-frame: per segment one retained window with its own hop.
struct AdaptedAnalysis {
  std::vector<AdaptedSlice> slices;
  std::vector<TransitionZone> transitions;
  MultiFrame multiframe;
  SegmentPlan plan;
  std::size_t signal_len = 0;
  int sample_rate = 0;
  std::size_t fft_size = 0;
};

struct AdaptOptions {
  TieBreak tie_break = TieBreak::prefer_larger;
  unsigned threads = 0;  // 0 = hardware concurrency
};

/// Run the full time-adaptation: per segment, pre-weight, evaluate all
/// windows, choose the entropy minimizer, then retain the unweighted STFT of
/// the segment with the chosen window. Degenerate segments inherit the
/// previous choice (the largest window for a leading silent stretch).
///
/// The retained frames tile each segment from its start; the first and last
/// slices get extra overhanging frames so every signal sample keeps a strictly
/// positive overlap-add power sum (the reconstructability precondition).
inline std::pair<AdaptedAnalysis, SelectionReport> adapt_signal(
    const Signal& signal, const MultiFrame& mf, EntropyOrder alpha,
    const SegmentPlan& plan, const AdaptOptions& options = {}) {
  validate(signal, "adapt_signal");
  if (mf.windows.empty())
    throw std::invalid_argument("adapt_signal: empty multiframe");
  if (plan.segments.empty())
    throw std::invalid_argument("adapt_signal: empty plan");

  const std::size_t n_seg = plan.segments.size();
  const auto signal_len = static_cast<std::int64_t>(signal.samples.size());

  // Entropy evaluation per segment, each window at its own hop.
  std::vector<std::vector<double>> all_entropies(n_seg);
  detail::parallel_for(n_seg, options.threads, [&](std::size_t s) {
    const auto& seg = plan.segments[s];
    std::vector<double> buf(seg.length, 0.0);
    for (std::size_t i = 0; i < seg.length; ++i) {
      const std::int64_t idx = seg.start + static_cast<std::int64_t>(i);
      if (idx >= 0 && idx < signal_len)
        buf[i] = signal.samples[static_cast<std::size_t>(idx)];
    }
    buf = preweight_segment(std::move(buf), mf);
    all_entropies[s] =
        detail::segment_entropies(buf, signal.sample_rate, mf, alpha);
  });

  // Sequential choice resolution (degenerate segments inherit).
  SelectionReport report;
  report.alpha = alpha.alpha;
  for (const auto& w : mf.windows) report.window_lengths.push_back(w.length());
  report.entries.resize(n_seg);
  std::size_t prev_choice = mf.count() - 1;
  for (std::size_t s = 0; s < n_seg; ++s) {
    SelectionEntry& e = report.entries[s];
    e.start = plan.segments[s].start;
    e.length = plan.segments[s].length;
    e.entropies = std::move(all_entropies[s]);
    if (e.entropies.empty()) {
      e.degenerate = true;
      e.chosen = prev_choice;
    } else {
      e.chosen = detail::resolve_choice(e.entropies, options.tie_break);
    }
    prev_choice = e.chosen;
  }

  AdaptedAnalysis aa;
  aa.multiframe = mf;
  aa.plan = plan;
  aa.signal_len = signal.samples.size();
  aa.sample_rate = signal.sample_rate;
  aa.fft_size = mf.fft_size;
  aa.slices.resize(n_seg);

  // Retained slices: the unweighted STFT of each segment with its window.
  detail::parallel_for(n_seg, options.threads, [&](std::size_t s) {
    const auto& seg = plan.segments[s];
    const std::size_t wid = report.entries[s].chosen;
    const ScaledWindow& w = mf.windows[wid];
    const auto len = static_cast<std::int64_t>(w.length());
    const auto hop = static_cast<std::int64_t>(w.hop);

    std::int64_t j_lo = s == 0 ? -1 : 0;
    std::int64_t j_hi =
        (static_cast<std::int64_t>(seg.length) - len) / hop;  // inside frames
    if (s == n_seg - 1) {
      // cover the final samples (window value 0 at index 0 never counts)
      while (seg.start + j_hi * hop < signal_len - len) ++j_hi;
    }

    AdaptedSlice& slice = aa.slices[s];
    slice.segment = s;
    slice.window_id = wid;
    slice.m = stft(signal, w, w.hop, mf.fft_size, seg.start + j_lo * hop,
                   static_cast<std::size_t>(j_hi - j_lo + 1));
    slice.m.window_id = wid;
  });

  // Transition zones over the shared frame span of consecutive segments.
  for (std::size_t s = 0; s + 1 < n_seg; ++s) {
    const std::size_t left = report.entries[s].chosen;
    const std::size_t right = report.entries[s + 1].chosen;
    if (left == right) continue;
    const std::int64_t begin = plan.segments[s + 1].start;
    const std::int64_t end =
        std::min(plan.segments[s].start +
                     static_cast<std::int64_t>(plan.frames_per_segment *
                                               plan.hop_max),
                 signal_len);
    if (begin >= end) continue;
    aa.transitions.push_back({begin, end, left, right});
  }

  return {std::move(aa), std::move(report)};
}

/// Dense matrix for plotting, on a common grid: time step = smallest hop of
/// the multi-frame, all fft_size/2+1 bins.
struct DisplayGrid {
  std::vector<double> values;  // row-major [row][bin]
  std::size_t rows = 0;
  std::size_t cols = 0;
  double time_step_s = 0.0;
  double freq_step_hz = 0.0;
};

/// Render the adapted analysis onto the common grid. Each slice contributes
/// the power of its nearest frame; where segments overlap, powers are
/// linearly cross-faded across the shared frame span.
inline DisplayGrid render_display_grid(const AdaptedAnalysis& aa) {
  if (aa.slices.empty())
    throw std::invalid_argument("render_display_grid: empty analysis");
  const MultiFrame& mf = aa.multiframe;
  std::size_t min_hop = mf.windows.front().hop;
  for (const auto& w : mf.windows) min_hop = std::min(min_hop, w.hop);

  DisplayGrid grid;
  grid.cols = aa.fft_size / 2 + 1;
  grid.rows = (aa.signal_len - 1) / min_hop + 1;
  grid.time_step_s = static_cast<double>(min_hop) / aa.sample_rate;
  grid.freq_step_hz = static_cast<double>(aa.sample_rate) / aa.fft_size;
  grid.values.assign(grid.rows * grid.cols, 0.0);

  const std::size_t n_slices = aa.slices.size();
  const auto span_len =
      static_cast<double>(aa.plan.frames_per_segment * aa.plan.hop_max);
  const auto ramp = static_cast<double>(aa.plan.overlap_len);

  std::vector<double> powers(grid.cols);
  std::vector<double> weights(n_slices);
  for (std::size_t r = 0; r < grid.rows; ++r) {
    const double x = static_cast<double>(r * min_hop);
    double total = 0.0;
    for (std::size_t s = 0; s < n_slices; ++s) {
      const auto span_start =
          static_cast<double>(aa.plan.segments[s].start);
      // first/last spans extend to the signal edges
      const bool first = s == 0;
      const bool last = s == n_slices - 1;
      double w = 1.0;
      if (!first && ramp > 0.0)
        w = std::min(w, std::clamp((x - span_start) / ramp, 0.0, 1.0));
      else if (!first && x < span_start)
        w = 0.0;
      if (!last && ramp > 0.0)
        w = std::min(
            w, std::clamp((span_start + span_len - x) / ramp, 0.0, 1.0));
      else if (!last && x >= span_start + span_len)
        w = 0.0;
      weights[s] = w;
      total += w;
    }
    if (total <= 0.0) continue;
    for (std::size_t s = 0; s < n_slices; ++s) {
      if (weights[s] <= 0.0) continue;
      const StftMatrix& m = aa.slices[s].m;
      const double center =
          static_cast<double>(m.start_offset) + 0.5 * m.window_length;
      auto frame = static_cast<std::int64_t>(
          std::llround((x - center) / static_cast<double>(m.hop)));
      frame = std::clamp<std::int64_t>(
          frame, 0, static_cast<std::int64_t>(m.frame_count) - 1);
      const double scale = weights[s] / total;
      const auto* row = &m.coeffs[static_cast<std::size_t>(frame) * m.bins];
      for (std::size_t k = 0; k < grid.cols; ++k)
        grid.values[r * grid.cols + k] += scale * std::norm(row[k]);
    }
  }
  return grid;
}

}  // namespace tfadapt
