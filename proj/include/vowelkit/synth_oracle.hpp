#ifndef VOWELKIT_SYNTH_ORACLE_HPP
#define VOWELKIT_SYNTH_ORACLE_HPP

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "vowelkit/audio_io.hpp"

namespace vowelkit {

struct Resonance {
  double frequency_hz;
  double bandwidth_hz;
};

struct VowelSpec {
  std::vector<Resonance> formants;
  double f0_hz = 120.0;
  double duration_s = 1.0;
  int sample_rate = 10000;
  double amplitude = 0.9;  ///< peak of the output
};

/// Impulse train at f0 through a cascade of unity-DC-gain two-pole resonators
/// (pole radius exp(-pi b / fs), angle 2 pi f / fs). Exactly round(duration * fs) samples.
AudioSignal synth_vowel(const VowelSpec& spec);

/// Impulse response of one resonator, n samples long (used for oracle checks).
std::vector<double> resonator_impulse_response(const Resonance& r, int sample_rate, std::size_t n);

struct FormantTarget {
  double f1_hz;
  double f2_hz;
};

/// label -> (F1, F2)
using FormantTable = std::map<std::string, FormantTarget>;

/// Measured F1/F2 means for ax, ae, aa, ah.
FormantTable default_formant_table();

/// default_formant_table() plus typical adult values for ee, uu, oo.
FormantTable extended_formant_table();

/// Looks up a preset by name ("default", "extended"). Throws on unknown names.
FormantTable formant_table_preset(const std::string& name);

struct SynthCorpusOptions {
  std::size_t n_per_label = 150;
  double jitter_hz = 40.0;
  std::uint64_t seed = 42;
  int sample_rate = 16000;
  double f1_bandwidth_hz = 80.0;
  double f2_bandwidth_hz = 100.0;
  double f0_min_hz = 90.0;
  double f0_max_hz = 220.0;
  double pad_silence_s = 0.2;  ///< zeros before and after each vowel
};

/// Writes <label>_<index>.wav files plus manifest.csv into out_dir and
/// returns the manifest path. Output is a pure function of (table, options).
std::filesystem::path synth_corpus(const FormantTable& table, const SynthCorpusOptions& options,
                                   const std::filesystem::path& out_dir);

}  // namespace vowelkit

#endif  // VOWELKIT_SYNTH_ORACLE_HPP
