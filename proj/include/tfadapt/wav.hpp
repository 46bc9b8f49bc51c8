#pragma once

// Minimal RIFF/WAVE reader and writer.
// Read: PCM 16-bit, PCM 24-bit, IEEE float 32-bit; 1 or 2 channels
// (stereo is mixed down by per-sample channel average).
// Write: IEEE float 32-bit mono, little-endian.

#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "tfadapt/signal.hpp"

namespace tfadapt {

namespace detail {

inline std::uint16_t read_u16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

inline std::uint32_t read_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) |
         (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

inline void put_u16(std::vector<unsigned char>& out, std::uint16_t v) {
  out.push_back(static_cast<unsigned char>(v & 0xff));
  out.push_back(static_cast<unsigned char>((v >> 8) & 0xff));
}

inline void put_u32(std::vector<unsigned char>& out, std::uint32_t v) {
  out.push_back(static_cast<unsigned char>(v & 0xff));
  out.push_back(static_cast<unsigned char>((v >> 8) & 0xff));
  out.push_back(static_cast<unsigned char>((v >> 16) & 0xff));
  out.push_back(static_cast<unsigned char>((v >> 24) & 0xff));
}

inline float f32_from_bits(std::uint32_t bits) {
  float f;
  std::memcpy(&f, &bits, sizeof f);
  return f;
}

inline std::uint32_t bits_from_f32(float f) {
  std::uint32_t bits;
  std::memcpy(&bits, &f, sizeof bits);
  return bits;
}

}  // namespace detail

inline Signal load_wav(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("load_wav: cannot open " + path);
  std::vector<unsigned char> raw((std::istreambuf_iterator<char>(in)),
                                 std::istreambuf_iterator<char>());
  if (in.bad()) throw std::runtime_error("load_wav: read error on " + path);
  if (raw.size() < 12 || std::memcmp(raw.data(), "RIFF", 4) != 0 ||
      std::memcmp(raw.data() + 8, "WAVE", 4) != 0)
    throw std::runtime_error("load_wav: not a RIFF/WAVE file: " + path);

  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t sample_rate = 0;
  const unsigned char* data = nullptr;
  std::uint32_t data_size = 0;
  bool have_fmt = false;

  std::size_t pos = 12;
  while (pos + 8 <= raw.size()) {
    const char* id = reinterpret_cast<const char*>(raw.data() + pos);
    std::uint32_t size = detail::read_u32(raw.data() + pos + 4);
    pos += 8;
    if (pos + size > raw.size())
      throw std::runtime_error("load_wav: truncated chunk in " + path);
    if (std::memcmp(id, "fmt ", 4) == 0) {
      if (size < 16) throw std::runtime_error("load_wav: bad fmt chunk");
      const unsigned char* f = raw.data() + pos;
      format = detail::read_u16(f);
      channels = detail::read_u16(f + 2);
      sample_rate = detail::read_u32(f + 4);
      bits = detail::read_u16(f + 14);
      if (format == 0xfffe) {
        // WAVE_FORMAT_EXTENSIBLE: actual format is the leading word of the
        // SubFormat GUID
        if (size < 40)
          throw std::runtime_error("load_wav: bad extensible fmt chunk");
        format = detail::read_u16(f + 24);
      }
      have_fmt = true;
    } else if (std::memcmp(id, "data", 4) == 0) {
      data = raw.data() + pos;
      data_size = size;
    }
    pos += size + (size & 1);  // chunks are word-aligned
  }

  if (!have_fmt || data == nullptr)
    throw std::runtime_error("load_wav: missing fmt or data chunk: " + path);
  if (format != 1 && format != 3)
    throw std::runtime_error("load_wav: unsupported codec (format tag " +
                             std::to_string(format) + ")");
  if (format == 1 && bits != 16 && bits != 24)
    throw std::runtime_error("load_wav: unsupported bit depth " +
                             std::to_string(bits) + " for PCM");
  if (format == 3 && bits != 32)
    throw std::runtime_error("load_wav: unsupported bit depth " +
                             std::to_string(bits) + " for float");
  if (channels != 1 && channels != 2)
    throw std::runtime_error("load_wav: unsupported channel count " +
                             std::to_string(channels));
  if (sample_rate == 0)
    throw std::runtime_error("load_wav: zero sample rate in " + path);

  const std::size_t bytes_per_sample = bits / 8;
  const std::size_t frame_size = bytes_per_sample * channels;
  const std::size_t frames = data_size / frame_size;
  if (frames == 0) throw std::runtime_error("load_wav: zero-length audio");

  auto decode = [&](const unsigned char* p) -> double {
    if (format == 3) {
      return static_cast<double>(detail::f32_from_bits(detail::read_u32(p)));
    }
    if (bits == 16) {
      auto v = static_cast<std::int16_t>(detail::read_u16(p));
      return v / 32768.0;
    }
    // 24-bit PCM, sign-extend
    std::int32_t v = p[0] | (p[1] << 8) | (p[2] << 16);
    if (v & 0x800000) v -= 0x1000000;
    return v / 8388608.0;
  };

  Signal s;
  s.sample_rate = static_cast<int>(sample_rate);
  s.samples.resize(frames);
  for (std::size_t i = 0; i < frames; ++i) {
    const unsigned char* p = data + i * frame_size;
    double v = decode(p);
    if (channels == 2) v = 0.5 * (v + decode(p + bytes_per_sample));
    s.samples[i] = v;
  }
  return s;
}

inline void save_wav(const Signal& signal, const std::string& path) {
  validate(signal, "save_wav");
  const auto n = static_cast<std::uint32_t>(signal.samples.size());

  std::vector<unsigned char> out;
  out.reserve(58 + 4 * n);
  auto put_tag = [&](const char* tag) {
    out.insert(out.end(), tag, tag + 4);
  };

  put_tag("RIFF");
  detail::put_u32(out, 4 + (8 + 16) + (8 + 4) + (8 + 4 * n));
  put_tag("WAVE");
  put_tag("fmt ");
  detail::put_u32(out, 16);
  detail::put_u16(out, 3);  // IEEE float
  detail::put_u16(out, 1);  // mono
  detail::put_u32(out, static_cast<std::uint32_t>(signal.sample_rate));
  detail::put_u32(out, static_cast<std::uint32_t>(signal.sample_rate) * 4);
  detail::put_u16(out, 4);   // block align
  detail::put_u16(out, 32);  // bits per sample
  put_tag("fact");
  detail::put_u32(out, 4);
  detail::put_u32(out, n);
  put_tag("data");
  detail::put_u32(out, 4 * n);
  for (double v : signal.samples)
    detail::put_u32(out, detail::bits_from_f32(static_cast<float>(v)));

  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("save_wav: cannot open " + path);
  os.write(reinterpret_cast<const char*>(out.data()),
           static_cast<std::streamsize>(out.size()));
  if (!os) throw std::runtime_error("save_wav: write error on " + path);
}

}  // namespace tfadapt
