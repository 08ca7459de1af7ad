// Copyright 2026 The MOSEval Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MOSEVAL_AUDIO_HPP_
#define MOSEVAL_AUDIO_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include "moseval/corpus.hpp"
#include "moseval/error.hpp"
#include "moseval/rng.hpp"

namespace moseval {

/// Mono waveform with samples in [-1,1].
struct AudioClip {
  std::vector<double> samples;
  int sample_rate = 0;

  double duration() const {
    return static_cast<double>(samples.size()) / sample_rate;
  }
};

// ---------------------------------------------------------------------------
// WAV I/O (RIFF, PCM 16-bit, mono or stereo)
// ---------------------------------------------------------------------------

namespace detail {

inline std::uint32_t read_u32le(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) |
         (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

inline std::uint16_t read_u16le(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] |
                                    (static_cast<std::uint16_t>(p[1]) << 8));
}

inline void append_u32le(std::string& out, std::uint32_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
  out.push_back(static_cast<char>((v >> 16) & 0xff));
  out.push_back(static_cast<char>((v >> 24) & 0xff));
}

inline void append_u16le(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
}

}  // namespace detail

/// Reads a PCM-16 RIFF/WAVE file.  Stereo is averaged down to mono; samples
/// are scaled by 1/32768.
inline AudioClip read_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<unsigned char> data((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());

  auto truncated = [&path]() -> DataError {
    return DataError(path.string() + ": truncated WAV file");
  };
  if (data.size() < 12) throw truncated();
  if (std::memcmp(data.data(), "RIFF", 4) != 0 ||
      std::memcmp(data.data() + 8, "WAVE", 4) != 0) {
    throw DataError(path.string() + ": not a RIFF/WAVE file");
  }

  bool have_fmt = false;
  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  const unsigned char* pcm = nullptr;
  std::uint32_t pcm_bytes = 0;

  std::size_t pos = 12;
  while (pos + 8 <= data.size()) {
    const char* chunk_id = reinterpret_cast<const char*>(data.data() + pos);
    const std::uint32_t chunk_size = detail::read_u32le(data.data() + pos + 4);
    pos += 8;
    if (pos + chunk_size > data.size()) throw truncated();
    if (std::memcmp(chunk_id, "fmt ", 4) == 0) {
      if (chunk_size < 16) throw truncated();
      format = detail::read_u16le(data.data() + pos);
      channels = detail::read_u16le(data.data() + pos + 2);
      rate = detail::read_u32le(data.data() + pos + 4);
      bits = detail::read_u16le(data.data() + pos + 14);
      have_fmt = true;
    } else if (std::memcmp(chunk_id, "data", 4) == 0) {
      pcm = data.data() + pos;
      pcm_bytes = chunk_size;
    }
    pos += chunk_size + (chunk_size & 1);  // chunks are word-aligned
  }
  if (!have_fmt || pcm == nullptr) throw truncated();
  if (format != 1) {
    throw DataError(path.string() + ": unsupported encoding (format tag " +
                    std::to_string(format) + "; only PCM is supported)");
  }
  if (bits != 16) {
    throw DataError(path.string() + ": unsupported encoding (" +
                    std::to_string(bits) + "-bit; only 16-bit PCM)");
  }
  if (channels != 1 && channels != 2) {
    throw DataError(path.string() + ": unsupported channel count " +
                    std::to_string(channels));
  }
  if (rate == 0) throw DataError(path.string() + ": zero sample rate");

  const std::size_t frame_bytes = 2u * channels;
  if (pcm_bytes % frame_bytes != 0) throw truncated();
  const std::size_t frames = pcm_bytes / frame_bytes;
  if (frames == 0) throw DataError(path.string() + ": empty audio");

  AudioClip clip;
  clip.sample_rate = static_cast<int>(rate);
  clip.samples.resize(frames);
  for (std::size_t i = 0; i < frames; ++i) {
    double acc = 0.0;
    for (std::uint16_t c = 0; c < channels; ++c) {
      const unsigned char* p = pcm + i * frame_bytes + 2 * c;
      const std::int16_t v =
          static_cast<std::int16_t>(detail::read_u16le(p));
      acc += static_cast<double>(v);
    }
    clip.samples[i] = acc / channels / 32768.0;
  }
  return clip;
}

/// Writes 16-bit PCM mono.  read_wav(write_wav(clip)) round-trips within one
/// least significant bit.
inline void write_wav(const AudioClip& clip, const std::filesystem::path& path) {
  if (clip.samples.empty()) throw DataError("write_wav: empty clip");
  if (clip.sample_rate <= 0) throw DataError("write_wav: bad sample rate");

  const std::uint32_t n = static_cast<std::uint32_t>(clip.samples.size());
  const std::uint32_t data_bytes = n * 2;
  std::string out;
  out.reserve(44 + data_bytes);
  out += "RIFF";
  detail::append_u32le(out, 36 + data_bytes);
  out += "WAVEfmt ";
  detail::append_u32le(out, 16);
  detail::append_u16le(out, 1);  // PCM
  detail::append_u16le(out, 1);  // mono
  detail::append_u32le(out, static_cast<std::uint32_t>(clip.sample_rate));
  detail::append_u32le(out, static_cast<std::uint32_t>(clip.sample_rate) * 2);
  detail::append_u16le(out, 2);   // block align
  detail::append_u16le(out, 16);  // bits
  out += "data";
  detail::append_u32le(out, data_bytes);
  for (double s : clip.samples) {
    const double clamped = std::clamp(s, -1.0, 1.0);
    const long v = std::lround(clamped * 32768.0);
    const std::int16_t q = static_cast<std::int16_t>(
        std::clamp<long>(v, -32768, 32767));
    detail::append_u16le(out, static_cast<std::uint16_t>(q));
  }

  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot write " + path.string());
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!f) throw IoError("write failed: " + path.string());
}

// ---------------------------------------------------------------------------
// Band-limited resampling
// ---------------------------------------------------------------------------

namespace detail {

inline constexpr double kAudioPi = 3.14159265358979323846;

inline double bessel_i0(double x) {
  // Power series; converges quickly for the window betas used here.
  double sum = 1.0, term = 1.0;
  const double q = x * x / 4.0;
  for (int k = 1; k < 200; ++k) {
    term *= q / (static_cast<double>(k) * k);
    sum += term;
    if (term < sum * 1e-16) break;
  }
  return sum;
}

// Kaiser-windowed sinc interpolation.  out[i] is the band-limited
// reconstruction of x evaluated at position i*ratio (in input samples),
// low-passed at 0.475 * min(1, 1/ratio) cycles/input-sample so downsampling
// pre-filters against aliasing.  32 zero crossings per side keeps tones
// below 0.45x the lower Nyquist within 0.5 dB.
inline std::vector<double> resample_by_ratio(const std::vector<double>& x,
                                             double ratio,
                                             std::size_t out_len) {
  constexpr double kNumZeros = 32.0;
  constexpr double kBeta = 9.0;
  const double cutoff = 0.475 * std::min(1.0, 1.0 / ratio);
  const double half_width = kNumZeros / (2.0 * cutoff);
  const double inv_i0_beta = 1.0 / bessel_i0(kBeta);
  const double n = static_cast<double>(x.size());

  std::vector<double> out(out_len);
  for (std::size_t i = 0; i < out_len; ++i) {
    const double p = static_cast<double>(i) * ratio;
    const long k0 = std::max(0L, static_cast<long>(std::ceil(p - half_width)));
    const long k1 = std::min(static_cast<long>(n) - 1,
                             static_cast<long>(std::floor(p + half_width)));
    double acc = 0.0;
    for (long k = k0; k <= k1; ++k) {
      const double t = p - static_cast<double>(k);
      const double u = t / half_width;
      const double w =
          bessel_i0(kBeta * std::sqrt(std::max(0.0, 1.0 - u * u))) *
          inv_i0_beta;
      const double arg = 2.0 * cutoff * t;
      const double sinc =
          arg == 0.0 ? 1.0 : std::sin(kAudioPi * arg) / (kAudioPi * arg);
      acc += x[static_cast<std::size_t>(k)] * 2.0 * cutoff * sinc * w;
    }
    // Windowed-sinc ringing can overshoot full scale slightly.
    out[i] = std::clamp(acc, -1.0, 1.0);
  }
  return out;
}

}  // namespace detail

/// Resamples to target_rate.  Output length is exactly
/// round(input_length * target_rate / input_rate); the identity case is a
/// plain copy.
inline AudioClip resample(const AudioClip& clip, int target_rate) {
  if (target_rate <= 0) throw DataError("resample: target rate must be > 0");
  if (clip.samples.empty()) throw DataError("resample: empty clip");
  if (target_rate == clip.sample_rate) return clip;
  const double ratio =
      static_cast<double>(clip.sample_rate) / static_cast<double>(target_rate);
  const long long out_len =
      std::llround(static_cast<double>(clip.samples.size()) *
                   static_cast<double>(target_rate) / clip.sample_rate);
  if (out_len < 1) {
    throw DataError("resample: clip too short for the requested rate");
  }
  AudioClip out;
  out.sample_rate = target_rate;
  out.samples = detail::resample_by_ratio(
      clip.samples, ratio, static_cast<std::size_t>(out_len));
  return out;
}

/// Resampling-based speed change: duration and pitch both scale by 1/factor,
/// the nominal sample rate stays put.  Output length is
/// round(input_length / factor).
inline AudioClip speed_perturb(const AudioClip& clip, double factor) {
  if (!(factor >= 0.95 && factor <= 1.05)) {
    throw DataError("speed factor " + format_double(factor) +
                    " outside [0.95, 1.05]");
  }
  if (clip.samples.empty()) throw DataError("speed_perturb: empty clip");
  if (factor == 1.0) return clip;
  const long long out_len =
      std::llround(static_cast<double>(clip.samples.size()) / factor);
  AudioClip out;
  out.sample_rate = clip.sample_rate;
  out.samples = detail::resample_by_ratio(clip.samples, factor,
                                          static_cast<std::size_t>(out_len));
  return out;
}

// ---------------------------------------------------------------------------
// Silence edits
// ---------------------------------------------------------------------------

enum class SilenceMode { trim, pad };
enum class Edge { leading, trailing, both };

/// Pads with exact zeros or trims samples at the chosen edges; the length
/// change is round(amount_seconds * rate) per affected edge.  Trimming is
/// limited to less than half the clip per edge.
inline AudioClip adjust_silence(const AudioClip& clip, SilenceMode mode,
                                double amount_seconds, Edge where) {
  if (clip.samples.empty()) throw DataError("adjust_silence: empty clip");
  if (amount_seconds < 0.0) {
    throw DataError("adjust_silence: amount must be >= 0");
  }
  const std::size_t k = static_cast<std::size_t>(
      std::llround(amount_seconds * clip.sample_rate));
  const bool leading = where != Edge::trailing;
  const bool trailing = where != Edge::leading;

  AudioClip out;
  out.sample_rate = clip.sample_rate;
  if (mode == SilenceMode::pad) {
    out.samples.reserve(clip.samples.size() +
                        k * (static_cast<std::size_t>(leading) + trailing));
    if (leading) out.samples.assign(k, 0.0);
    out.samples.insert(out.samples.end(), clip.samples.begin(),
                       clip.samples.end());
    if (trailing) out.samples.insert(out.samples.end(), k, 0.0);
    return out;
  }

  if (k * 2 >= clip.samples.size()) {
    throw DataError("adjust_silence: trim of " + format_double(amount_seconds) +
                    "s per edge exceeds half the clip duration");
  }
  const std::size_t begin = leading ? k : 0;
  const std::size_t end = clip.samples.size() - (trailing ? k : 0);
  out.samples.assign(clip.samples.begin() + begin, clip.samples.begin() + end);
  return out;
}

// ---------------------------------------------------------------------------
// Augmentation driver
// ---------------------------------------------------------------------------

enum class AugmentKind { speed_up, speed_down, trim_silence, pad_silence };

inline const char* augment_suffix(AugmentKind k) {
  switch (k) {
    case AugmentKind::speed_up: return "#speedup";
    case AugmentKind::speed_down: return "#slowdown";
    case AugmentKind::trim_silence: return "#trim";
    case AugmentKind::pad_silence: return "#pad";
  }
  return "?";
}

struct AugmentationSpec {
  std::set<AugmentKind> kinds = {AugmentKind::speed_up, AugmentKind::speed_down,
                                 AugmentKind::trim_silence,
                                 AugmentKind::pad_silence};
  double speed_lo = 0.95;
  double speed_hi = 1.05;
  double silence_lo = 0.05;  // seconds per affected edge
  double silence_hi = 0.25;
  std::uint64_t seed = 0;
};

struct AugmentResult {
  Corpus corpus;                    // originals plus variants
  std::vector<std::string> errors;  // per-file failures; batch continues
};

namespace detail {

struct AugmentDraws {
  double speed_up;
  double speed_down;
  double trim_seconds;
  double pad_seconds;
};

// Speedup and slowdown factors come from disjoint halves of the speed range
// so the variants are distinct transforms.  All four values are drawn for
// every utterance regardless of the enabled kinds, so enabling a kind never
// changes the draws of another.
inline AugmentDraws draw_augmentations(const AugmentationSpec& spec,
                                       const std::string& utterance_id) {
  Rng rng(Rng::mix(spec.seed, Rng::hash_string(utterance_id)));
  AugmentDraws d;
  d.speed_up = spec.speed_hi - rng.next_double() * (spec.speed_hi - 1.0);
  d.speed_down = spec.speed_lo + rng.next_double() * (1.0 - spec.speed_lo);
  d.trim_seconds = rng.uniform(spec.silence_lo, spec.silence_hi);
  d.pad_seconds = rng.uniform(spec.silence_lo, spec.silence_hi);
  return d;
}

}  // namespace detail

/// Emits one variant per enabled kind for every utterance (plus a copy of the
/// original audio) into out_dir, and builds the augmented corpus: variants
/// inherit the original's ratings and entity ids under a suffixed
/// utterance_id.  Per-file failures are collected, not fatal.
inline AugmentResult augment_corpus(const Corpus& corpus,
                                    const AugmentationSpec& spec,
                                    const std::filesystem::path& out_dir) {
  if (corpus.wav_dir.empty()) {
    throw DataError("augment: corpus has no wav_dir");
  }
  if (!(spec.speed_lo >= 0.95 && spec.speed_hi <= 1.05 &&
        spec.speed_lo < 1.0 && spec.speed_hi > 1.0)) {
    throw DataError("augment: speed range must straddle 1.0 within [0.95,1.05]");
  }
  if (spec.silence_lo < 0.0 || spec.silence_hi < spec.silence_lo) {
    throw DataError("augment: bad silence range");
  }

  const auto wav_out = out_dir / "wav";
  std::error_code ec;
  std::filesystem::create_directories(wav_out, ec);
  if (ec) throw IoError("cannot create " + wav_out.string());

  const CorpusIndex index(corpus);

  AugmentResult result;
  result.corpus.name = corpus.name + "-aug";
  result.corpus.scale = ScaleSpec{1.0, 5.0};
  result.corpus.sample_rate = corpus.sample_rate;
  result.corpus.wav_dir = std::filesystem::absolute(wav_out);

  // Enabled kinds in enum order, so output order is deterministic.
  std::vector<AugmentKind> kinds(spec.kinds.begin(), spec.kinds.end());

  for (std::size_t i = 0; i < corpus.utterances.size(); ++i) {
    const Utterance& u = corpus.utterances[i];
    if (u.audio_path.empty()) {
      result.errors.push_back("utterance '" + u.utterance_id +
                              "' has no audio path");
      continue;
    }
    const auto src = corpus.wav_dir / u.audio_path;
    AudioClip clip;
    try {
      clip = read_wav(src);
    } catch (const Error& e) {
      result.errors.push_back(e.what());
      continue;
    }

    // Original entry: byte-for-byte copy under its own basename.
    const std::string base = std::filesystem::path(u.audio_path).stem().string();
    const std::string orig_name = base + ".wav";
    std::filesystem::copy_file(src, wav_out / orig_name,
                               std::filesystem::copy_options::overwrite_existing,
                               ec);
    if (ec) {
      result.errors.push_back("cannot copy " + src.string() + ": " +
                              ec.message());
      continue;
    }
    Utterance orig = u;
    orig.audio_path = orig_name;
    result.corpus.utterances.push_back(orig);
    for (std::size_t row : index.rating_rows(i)) {
      result.corpus.ratings.push_back(corpus.ratings[row]);
    }

    const auto draws = detail::draw_augmentations(spec, u.utterance_id);
    for (AugmentKind kind : kinds) {
      AudioClip variant;
      try {
        switch (kind) {
          case AugmentKind::speed_up:
            variant = speed_perturb(clip, draws.speed_up);
            break;
          case AugmentKind::speed_down:
            variant = speed_perturb(clip, draws.speed_down);
            break;
          case AugmentKind::trim_silence:
            variant = adjust_silence(clip, SilenceMode::trim,
                                     draws.trim_seconds, Edge::both);
            break;
          case AugmentKind::pad_silence:
            variant = adjust_silence(clip, SilenceMode::pad,
                                     draws.pad_seconds, Edge::both);
            break;
        }
      } catch (const Error& e) {
        result.errors.push_back(std::string("utterance '") + u.utterance_id +
                                "' " + augment_suffix(kind) + ": " + e.what());
        continue;
      }
      const std::string variant_id = u.utterance_id + augment_suffix(kind);
      const std::string wav_name = base + augment_suffix(kind) + ".wav";
      try {
        write_wav(variant, wav_out / wav_name);
      } catch (const Error& e) {
        result.errors.push_back(e.what());
        continue;
      }
      Utterance v = u;
      v.utterance_id = variant_id;
      v.audio_path = wav_name;
      result.corpus.utterances.push_back(std::move(v));
      for (std::size_t row : index.rating_rows(i)) {
        Rating r = corpus.ratings[row];
        r.utterance_id = variant_id;
        result.corpus.ratings.push_back(std::move(r));
      }
    }
  }
  return result;
}

}  // namespace moseval

#endif  // MOSEVAL_AUDIO_HPP_
