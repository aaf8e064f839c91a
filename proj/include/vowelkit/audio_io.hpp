#ifndef VOWELKIT_AUDIO_IO_HPP
#define VOWELKIT_AUDIO_IO_HPP

#include <filesystem>
#include <vector>

namespace vowelkit {

/// Mono PCM signal. Samples are nominally in [-1, 1].
struct AudioSignal {
  std::vector<double> samples;
  int sample_rate = 0;

  double duration_s() const {
    return sample_rate > 0 ? static_cast<double>(samples.size()) / sample_rate : 0.0;
  }
};

/// Decodes a RIFF/WAVE file holding 8/16/24/32-bit integer PCM or 32-bit
/// float PCM, one or two channels. Integer samples are divided by 2^(bits-1)
/// (8-bit data is offset binary); stereo frames are averaged to mono.
///
/// Throws Error with Errc::not_found, Errc::malformed or Errc::unsupported.
AudioSignal read_wav(const std::filesystem::path& path);

/// Writes 16-bit mono PCM. Samples outside [-1, 1] are clipped with a warning.
void write_wav(const AudioSignal& signal, const std::filesystem::path& path);

/// Windowed-sinc anti-alias low-pass (when downsampling) followed by linear
/// interpolation onto the target grid. Identity when the rates match.
AudioSignal resample(const AudioSignal& signal, int target_rate);

}  // namespace vowelkit

#endif  // VOWELKIT_AUDIO_IO_HPP
