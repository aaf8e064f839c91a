#ifndef VOWELKIT_MFCC_HPP
#define VOWELKIT_MFCC_HPP

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vowelkit/audio_io.hpp"
#include "vowelkit/preprocess.hpp"
#include "vowelkit/spectral.hpp"

namespace vowelkit {

double hz_to_mel(double hz);
double mel_to_hz(double mel);

/// Triangular filters with centres uniform in mel, snapped to DFT bins.
struct MelFilterbank {
  std::size_t n_filters = 0;
  std::size_t n_bins = 0;  ///< fft_size / 2 + 1
  double low_hz = 0.0;
  double high_hz = 0.0;
  std::vector<std::size_t> edge_bins;  ///< n_filters + 2 entries
  std::vector<double> edge_mels;       ///< n_filters + 2 entries
  std::vector<double> weights;         ///< row-major n_filters x n_bins

  double weight(std::size_t filter, std::size_t bin) const { return weights[filter * n_bins + bin]; }
  std::vector<double> apply(std::span<const double> power) const;
};

MelFilterbank build_filterbank(std::size_t n_filters, std::size_t fft_size, double sample_rate,
                               double low_hz, double high_hz);

/// Shared, immutable filterbank for a configuration; safe under concurrent use.
std::shared_ptr<const MelFilterbank> cached_filterbank(std::size_t n_filters, std::size_t fft_size,
                                                       double sample_rate, double low_hz,
                                                       double high_hz);

struct MfccConfig {
  std::size_t n_filters = 26;
  std::size_t n_cep = 13;      ///< coefficients kept after dropping DCT index 0
  double preemph = 0.97;       ///< 0 disables
  double low_hz = 0.0;
  double high_hz = 0.0;        ///< 0 means sample_rate / 2
  double log_floor = 1e-10;
  bool multiframe = false;     ///< average 25 ms / 10 ms frames instead of one frame
  double multiframe_len_s = 0.025;
  double multiframe_step_s = 0.010;

  // Test hooks for checking stage wiring.
  bool bypass_filterbank = false;  ///< identity in place of the mel filters
  bool bypass_log_dct = false;     ///< return raw filter energies
};

struct MfccVector {
  std::vector<double> coeffs;
  std::optional<std::string> label;
};

/// Intermediate values of a single-frame MFCC computation.
struct MfccTrace {
  std::vector<double> frame;     ///< windowed input to the periodogram
  Spectrum spectrum;
  std::vector<double> energies;  ///< filterbank output
  std::vector<double> cepstrum;  ///< full DCT output (empty when bypassed)
  std::vector<double> coeffs;    ///< retained values
};

/// MFCC of one prepared frame. When the frame carries its unwindowed segment
/// and pre-emphasis is enabled, the segment is pre-emphasized and re-windowed;
/// otherwise the already-windowed samples are used directly.
MfccVector mfcc(const PreparedFrame& frame, const MfccConfig& config = {});
MfccTrace mfcc_trace(const PreparedFrame& frame, const MfccConfig& config = {});

/// Coefficients from an already windowed frame (no pre-emphasis).
std::vector<double> mfcc_from_windowed(std::span<const double> windowed, int sample_rate,
                                       const MfccConfig& config, MfccTrace* trace = nullptr);

/// Average of short-frame MFCCs over a whole (trimmed, normalized) signal.
MfccVector mfcc_multiframe(const AudioSignal& signal, const MfccConfig& config = {});

}  // namespace vowelkit

#endif  // VOWELKIT_MFCC_HPP
