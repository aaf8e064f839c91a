#include "vowelkit/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "vowelkit/error.hpp"

namespace vowelkit {

namespace {

std::size_t chunk_length(int sample_rate, double chunk_ms) {
  const auto n = static_cast<std::size_t>(std::lround(sample_rate * chunk_ms / 1000.0));
  return std::max<std::size_t>(n, 1);
}

}  // namespace

AudioSignal trim_silence(const AudioSignal& signal, double rel_threshold, double chunk_ms) {
  if (!(rel_threshold > 0.0 && rel_threshold < 1.0)) {
    throw Error(Errc::invalid_argument, "silence threshold must lie in (0, 1)");
  }
  if (signal.samples.empty()) throw Error(Errc::empty_signal, "empty signal");
  if (signal.sample_rate <= 0) throw Error(Errc::invalid_argument, "sample rate must be positive");

  const std::size_t n = signal.samples.size();
  const std::size_t chunk = chunk_length(signal.sample_rate, chunk_ms);
  const std::size_t n_chunks = (n + chunk - 1) / chunk;

  std::vector<double> rms(n_chunks);
  for (std::size_t c = 0; c < n_chunks; ++c) {
    const std::size_t begin = c * chunk;
    const std::size_t end = std::min(n, begin + chunk);
    double acc = 0.0;
    for (std::size_t i = begin; i < end; ++i) acc += signal.samples[i] * signal.samples[i];
    rms[c] = std::sqrt(acc / static_cast<double>(end - begin));
  }
  const double peak = *std::max_element(rms.begin(), rms.end());
  if (peak <= 0.0) throw Error(Errc::no_voiced_content, "no voiced content");

  const double threshold = rel_threshold * peak;
  std::size_t first = 0;
  while (rms[first] < threshold) ++first;
  std::size_t last = n_chunks - 1;
  while (rms[last] < threshold) --last;

  AudioSignal out;
  out.sample_rate = signal.sample_rate;
  const std::size_t begin = first * chunk;
  const std::size_t end = std::min(n, (last + 1) * chunk);
  out.samples.assign(signal.samples.begin() + static_cast<std::ptrdiff_t>(begin),
                     signal.samples.begin() + static_cast<std::ptrdiff_t>(end));
  return out;
}

AudioSignal normalize_amplitude(const AudioSignal& signal) {
  double peak = 0.0;
  for (double s : signal.samples) peak = std::max(peak, std::abs(s));
  if (peak <= 0.0) throw Error(Errc::empty_signal, "cannot normalize an all-zero signal");
  AudioSignal out = signal;
  if (peak == 1.0) return out;
  for (double& s : out.samples) s /= peak;
  return out;
}

PreparedFrame select_frame(const AudioSignal& signal, double duration_s, double chunk_ms) {
  if (signal.sample_rate <= 0) throw Error(Errc::invalid_argument, "sample rate must be positive");
  if (duration_s <= 0.0) throw Error(Errc::invalid_argument, "frame duration must be positive");
  const auto len = static_cast<std::size_t>(std::lround(duration_s * signal.sample_rate));
  const std::size_t n = signal.samples.size();
  if (len == 0 || n < len) {
    throw Error(Errc::insufficient_data,
                "signal of " + std::to_string(n) + " samples is shorter than the " +
                    std::to_string(len) + "-sample frame");
  }

  // Energy prefix sums make each candidate O(number of sub-chunks).
  std::vector<double> prefix(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + signal.samples[i] * signal.samples[i];

  const std::size_t chunk = std::min(len, chunk_length(signal.sample_rate, chunk_ms));
  const std::size_t n_chunks = len / chunk;

  std::size_t best_offset = 0;
  double best_var = std::numeric_limits<double>::infinity();
  std::vector<double> energy(n_chunks);
  for (std::size_t off = 0; off + len <= n; ++off) {
    double mean = 0.0;
    for (std::size_t c = 0; c < n_chunks; ++c) {
      energy[c] = prefix[off + (c + 1) * chunk] - prefix[off + c * chunk];
      mean += energy[c];
    }
    mean /= static_cast<double>(n_chunks);
    double var = 0.0;
    for (double e : energy) var += (e - mean) * (e - mean);
    var /= static_cast<double>(n_chunks);
    if (var < best_var) {
      best_var = var;
      best_offset = off;
    }
  }

  PreparedFrame frame;
  frame.sample_rate = signal.sample_rate;
  frame.source_offset = best_offset;
  frame.segment.assign(signal.samples.begin() + static_cast<std::ptrdiff_t>(best_offset),
                       signal.samples.begin() + static_cast<std::ptrdiff_t>(best_offset + len));
  frame.samples = frame.segment;
  return frame;
}

std::vector<double> hamming_window(std::size_t n_samples) {
  if (n_samples < 2) throw Error(Errc::invalid_argument, "hamming window needs at least 2 samples");
  std::vector<double> w(n_samples);
  const double denom = static_cast<double>(n_samples - 1);
  for (std::size_t i = 0; i < n_samples; ++i) {
    w[i] = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / denom);
  }
  return w;
}

PreparedFrame prepare(const AudioSignal& signal, const PrepareConfig& config) {
  const AudioSignal trimmed =
      trim_silence(signal, config.silence_rel_threshold, config.silence_chunk_ms);
  const AudioSignal normalized = normalize_amplitude(trimmed);
  PreparedFrame frame =
      select_frame(normalized, config.frame_duration_s, config.stationarity_chunk_ms);
  const std::vector<double> w = hamming_window(frame.samples.size());
  for (std::size_t i = 0; i < w.size(); ++i) frame.samples[i] *= w[i];
  return frame;
}

}  // namespace vowelkit
