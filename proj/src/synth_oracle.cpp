#include "vowelkit/synth_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>

#include "vowelkit/error.hpp"
#include "vowelkit/random.hpp"

namespace vowelkit {

namespace {

struct ResonatorCoeffs {
  double b1, b2, gain;
};

ResonatorCoeffs resonator_coeffs(const Resonance& r, int sample_rate) {
  const double radius = std::exp(-std::numbers::pi * r.bandwidth_hz / sample_rate);
  const double theta = 2.0 * std::numbers::pi * r.frequency_hz / sample_rate;
  const double b1 = 2.0 * radius * std::cos(theta);
  const double b2 = -radius * radius;
  return {b1, b2, 1.0 - b1 - b2};
}

void validate(const VowelSpec& spec) {
  if (spec.sample_rate <= 0) throw Error(Errc::invalid_argument, "sample rate must be positive");
  if (!(spec.f0_hz > 0.0)) throw Error(Errc::invalid_argument, "f0 must be positive");
  if (spec.duration_s < 0.0) throw Error(Errc::invalid_argument, "duration must be non-negative");
  for (const Resonance& r : spec.formants) {
    if (!(r.frequency_hz > 0.0) || r.frequency_hz >= 0.5 * spec.sample_rate) {
      throw Error(Errc::invalid_argument, "formant " + std::to_string(r.frequency_hz) +
                                              " Hz is not below the Nyquist frequency");
    }
    if (!(r.bandwidth_hz > 0.0)) throw Error(Errc::invalid_argument, "bandwidth must be positive");
  }
}

}  // namespace

std::vector<double> resonator_impulse_response(const Resonance& r, int sample_rate, std::size_t n) {
  const ResonatorCoeffs c = resonator_coeffs(r, sample_rate);
  std::vector<double> y(n, 0.0);
  double y1 = 0.0, y2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = i == 0 ? 1.0 : 0.0;
    const double v = c.gain * x + c.b1 * y1 + c.b2 * y2;
    y[i] = v;
    y2 = y1;
    y1 = v;
  }
  return y;
}

AudioSignal synth_vowel(const VowelSpec& spec) {
  validate(spec);
  const auto n = static_cast<std::size_t>(std::lround(spec.duration_s * spec.sample_rate));
  AudioSignal out;
  out.sample_rate = spec.sample_rate;
  out.samples.assign(n, 0.0);
  if (n == 0) return out;

  const double period = spec.sample_rate / spec.f0_hz;
  for (std::size_t k = 0;; ++k) {
    const auto idx = static_cast<std::size_t>(std::floor(static_cast<double>(k) * period));
    if (idx >= n) break;
    out.samples[idx] = 1.0;
  }

  for (const Resonance& r : spec.formants) {
    const ResonatorCoeffs c = resonator_coeffs(r, spec.sample_rate);
    double y1 = 0.0, y2 = 0.0;
    for (double& s : out.samples) {
      const double v = c.gain * s + c.b1 * y1 + c.b2 * y2;
      y2 = y1;
      y1 = v;
      s = v;
    }
  }

  double peak = 0.0;
  for (double s : out.samples) peak = std::max(peak, std::abs(s));
  const double scale = peak > 0.0 ? spec.amplitude / peak : 0.0;
  for (double& s : out.samples) s *= scale;
  return out;
}

FormantTable default_formant_table() {
  return {
      {"ax", {631.0, 1049.0}},
      {"ae", {720.0, 1644.0}},
      {"aa", {573.0, 1311.0}},
      {"ah", {693.0, 1182.0}},
  };
}

FormantTable extended_formant_table() {
  FormantTable table = default_formant_table();
  // Typical adult male averages; not measured on the study corpus.
  table["ee"] = {476.0, 2089.0};
  table["uu"] = {378.0, 997.0};
  table["oo"] = {497.0, 910.0};
  return table;
}

FormantTable formant_table_preset(const std::string& name) {
  if (name == "default") return default_formant_table();
  if (name == "extended") return extended_formant_table();
  throw Error(Errc::invalid_argument, "unknown formant table preset '" + name + "'");
}

std::filesystem::path synth_corpus(const FormantTable& table, const SynthCorpusOptions& options,
                                   const std::filesystem::path& out_dir) {
  if (options.jitter_hz < 0.0) throw Error(Errc::invalid_argument, "jitter must be non-negative");
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error(Errc::io, "cannot create '" + out_dir.string() + "': " + ec.message());

  static constexpr const char* kAmplitudeClass[] = {"quiet", "normal", "loud"};
  static constexpr double kAmplitude[] = {0.2, 0.5, 0.9};

  SplitMix64 rng(options.seed);
  std::ostringstream manifest;
  manifest << "path,phoneme,duration,amplitude,intonation\n";
  for (const auto& [label, target] : table) {
    for (std::size_t i = 0; i < options.n_per_label; ++i) {
      VowelSpec spec;
      spec.sample_rate = options.sample_rate;
      const double f1 = rng.normal(target.f1_hz, options.jitter_hz);
      const double f2 = rng.normal(target.f2_hz, options.jitter_hz);
      spec.formants = {{f1, options.f1_bandwidth_hz}, {f2, options.f2_bandwidth_hz}};
      spec.f0_hz = rng.uniform(options.f0_min_hz, options.f0_max_hz);
      const bool is_long = i % 2 == 1;
      spec.duration_s = is_long ? 2.0 : 1.0;
      spec.amplitude = kAmplitude[i % 3];

      AudioSignal vowel = synth_vowel(spec);
      const auto pad = static_cast<std::size_t>(std::lround(options.pad_silence_s * spec.sample_rate));
      vowel.samples.insert(vowel.samples.begin(), pad, 0.0);
      vowel.samples.insert(vowel.samples.end(), pad, 0.0);

      std::ostringstream name;
      name << label << '_' << std::setfill('0') << std::setw(4) << i << ".wav";
      write_wav(vowel, out_dir / name.str());
      manifest << name.str() << ',' << label << ',' << (is_long ? "long" : "short") << ','
               << kAmplitudeClass[i % 3] << ",level\n";
    }
  }

  const std::filesystem::path manifest_path = out_dir / "manifest.csv";
  std::ofstream f(manifest_path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(Errc::io, "cannot write '" + manifest_path.string() + "'");
  f << manifest.str();
  if (!f) throw Error(Errc::io, "write failed for '" + manifest_path.string() + "'");
  return manifest_path;
}

}  // namespace vowelkit
