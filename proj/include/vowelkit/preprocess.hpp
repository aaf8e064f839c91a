#ifndef VOWELKIT_PREPROCESS_HPP
#define VOWELKIT_PREPROCESS_HPP

#include <cstddef>
#include <vector>

#include "vowelkit/audio_io.hpp"

namespace vowelkit {

struct PrepareConfig {
  double frame_duration_s = 0.040;
  double silence_rel_threshold = 0.05;
  double silence_chunk_ms = 10.0;
  double stationarity_chunk_ms = 10.0;
};

/// A single analysis frame.
struct PreparedFrame {
  std::vector<double> samples;  ///< Hamming-windowed
  std::vector<double> segment;  ///< same span before windowing (may be empty)
  int sample_rate = 0;
  std::size_t source_offset = 0;  ///< index into the trimmed signal
};

/// Drops leading and trailing chunks whose RMS is below
/// rel_threshold * (loudest chunk RMS). Interior chunks are kept even when quiet.
AudioSignal trim_silence(const AudioSignal& signal, double rel_threshold,
                         double chunk_ms = 10.0);

/// Scales by a single positive constant so that max |sample| == 1.
AudioSignal normalize_amplitude(const AudioSignal& signal);

/// Picks the `duration_s` window whose sub-chunk energies vary the least.
/// The returned frame is unwindowed: samples and segment are identical.
PreparedFrame select_frame(const AudioSignal& signal, double duration_s,
                           double chunk_ms = 10.0);

/// w[n] = 0.54 - 0.46 cos(2 pi n / (N - 1)).
std::vector<double> hamming_window(std::size_t n_samples);

/// trim -> normalize -> select -> window.
PreparedFrame prepare(const AudioSignal& signal, const PrepareConfig& config = {});

}  // namespace vowelkit

#endif  // VOWELKIT_PREPROCESS_HPP
