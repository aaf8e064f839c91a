#include "vowelkit/mfcc.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <tuple>

#include "vowelkit/error.hpp"

namespace vowelkit {

double hz_to_mel(double hz) {
  if (hz < 0.0) throw Error(Errc::invalid_argument, "negative frequency");
  return 2595.0 * std::log10(1.0 + hz / 700.0);
}

double mel_to_hz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

std::vector<double> MelFilterbank::apply(std::span<const double> power) const {
  if (power.size() != n_bins) {
    throw Error(Errc::dimension_mismatch, "filterbank expects " + std::to_string(n_bins) +
                                              " bins, got " + std::to_string(power.size()));
  }
  std::vector<double> out(n_filters, 0.0);
  for (std::size_t j = 0; j < n_filters; ++j) {
    double acc = 0.0;
    for (std::size_t k = edge_bins[j]; k <= edge_bins[j + 2]; ++k) acc += weight(j, k) * power[k];
    out[j] = acc;
  }
  return out;
}

MelFilterbank build_filterbank(std::size_t n_filters, std::size_t fft_size, double sample_rate,
                               double low_hz, double high_hz) {
  if (n_filters < 2) throw Error(Errc::invalid_argument, "need at least 2 mel filters");
  if (!is_power_of_two(fft_size)) throw Error(Errc::invalid_argument, "fft size must be a power of two");
  if (!(low_hz >= 0.0 && low_hz < high_hz && high_hz <= sample_rate / 2.0)) {
    throw Error(Errc::invalid_argument, "mel band must satisfy 0 <= low < high <= fs/2");
  }

  MelFilterbank fb;
  fb.n_filters = n_filters;
  fb.n_bins = fft_size / 2 + 1;
  fb.low_hz = low_hz;
  fb.high_hz = high_hz;

  const double mel_lo = hz_to_mel(low_hz);
  const double mel_hi = hz_to_mel(high_hz);
  const std::size_t n_edges = n_filters + 2;
  fb.edge_mels.resize(n_edges);
  fb.edge_bins.resize(n_edges);
  for (std::size_t i = 0; i < n_edges; ++i) {
    const double mel = mel_lo + (mel_hi - mel_lo) * static_cast<double>(i) / static_cast<double>(n_edges - 1);
    fb.edge_mels[i] = mel;
    const auto bin = static_cast<std::size_t>(
        std::floor(static_cast<double>(fft_size + 1) * mel_to_hz(mel) / sample_rate));
    fb.edge_bins[i] = std::min(bin, fb.n_bins - 1);
    if (i > 0 && fb.edge_bins[i] <= fb.edge_bins[i - 1]) {
      throw Error(Errc::invalid_argument,
                  "mel band too narrow for the bin grid: edges " + std::to_string(i - 1) + " and " +
                      std::to_string(i) + " snap to the same bin");
    }
  }

  fb.weights.assign(n_filters * fb.n_bins, 0.0);
  for (std::size_t j = 0; j < n_filters; ++j) {
    const double left = static_cast<double>(fb.edge_bins[j]);
    const double centre = static_cast<double>(fb.edge_bins[j + 1]);
    const double right = static_cast<double>(fb.edge_bins[j + 2]);
    for (std::size_t k = fb.edge_bins[j]; k <= fb.edge_bins[j + 2]; ++k) {
      const double x = static_cast<double>(k);
      const double w = x <= centre ? (x - left) / (centre - left) : (right - x) / (right - centre);
      fb.weights[j * fb.n_bins + k] = w;
    }
  }
  return fb;
}

std::shared_ptr<const MelFilterbank> cached_filterbank(std::size_t n_filters, std::size_t fft_size,
                                                       double sample_rate, double low_hz,
                                                       double high_hz) {
  using Key = std::tuple<std::size_t, std::size_t, double, double, double>;
  static std::shared_mutex mutex;
  static std::map<Key, std::shared_ptr<const MelFilterbank>> cache;

  const Key key{n_filters, fft_size, sample_rate, low_hz, high_hz};
  {
    std::shared_lock lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  auto built = std::make_shared<const MelFilterbank>(
      build_filterbank(n_filters, fft_size, sample_rate, low_hz, high_hz));
  std::unique_lock lock(mutex);
  auto [it, inserted] = cache.emplace(key, std::move(built));
  return it->second;
}

std::vector<double> mfcc_from_windowed(std::span<const double> windowed, int sample_rate,
                                       const MfccConfig& config, MfccTrace* trace) {
  if (windowed.empty()) throw Error(Errc::empty_signal, "empty frame");
  if (std::all_of(windowed.begin(), windowed.end(), [](double v) { return v == 0.0; })) {
    throw Error(Errc::silent_frame, "silent frame");
  }
  if (!config.bypass_log_dct && config.n_cep + 1 > config.n_filters) {
    throw Error(Errc::invalid_argument, "n_cep must be below n_filters");
  }

  const std::size_t fft_size = next_power_of_two(windowed.size());
  Spectrum spectrum = dft_power(windowed, fft_size, sample_rate);

  std::vector<double> energies;
  if (config.bypass_filterbank) {
    energies = spectrum.power;
  } else {
    const double high = config.high_hz > 0.0 ? config.high_hz : sample_rate / 2.0;
    energies = cached_filterbank(config.n_filters, fft_size, sample_rate, config.low_hz, high)
                   ->apply(spectrum.power);
  }

  std::vector<double> coeffs;
  std::vector<double> cepstrum;
  if (config.bypass_log_dct) {
    coeffs = energies;
  } else {
    std::vector<double> logs(energies.size());
    for (std::size_t j = 0; j < energies.size(); ++j) {
      logs[j] = std::log(std::max(energies[j], config.log_floor));
    }
    cepstrum = dct2(logs);
    coeffs.assign(cepstrum.begin() + 1, cepstrum.begin() + 1 + static_cast<std::ptrdiff_t>(config.n_cep));
  }

  if (trace != nullptr) {
    trace->frame.assign(windowed.begin(), windowed.end());
    trace->spectrum = std::move(spectrum);
    trace->energies = std::move(energies);
    trace->cepstrum = std::move(cepstrum);
    trace->coeffs = coeffs;
  }
  return coeffs;
}

namespace {

std::vector<double> emphasize_and_window(std::span<const double> raw, double preemph) {
  std::vector<double> out(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    out[i] = i == 0 ? raw[0] : raw[i] - preemph * raw[i - 1];
  }
  const std::vector<double> w = hamming_window(raw.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= w[i];
  return out;
}

}  // namespace

MfccTrace mfcc_trace(const PreparedFrame& frame, const MfccConfig& config) {
  MfccTrace trace;
  if (config.preemph != 0.0 && !frame.segment.empty()) {
    const std::vector<double> windowed = emphasize_and_window(frame.segment, config.preemph);
    mfcc_from_windowed(windowed, frame.sample_rate, config, &trace);
  } else {
    mfcc_from_windowed(frame.samples, frame.sample_rate, config, &trace);
  }
  return trace;
}

MfccVector mfcc(const PreparedFrame& frame, const MfccConfig& config) {
  return MfccVector{mfcc_trace(frame, config).coeffs, std::nullopt};
}

MfccVector mfcc_multiframe(const AudioSignal& signal, const MfccConfig& config) {
  const auto len = static_cast<std::size_t>(std::lround(config.multiframe_len_s * signal.sample_rate));
  const auto step = static_cast<std::size_t>(std::lround(config.multiframe_step_s * signal.sample_rate));
  if (len < 2 || step == 0) throw Error(Errc::invalid_argument, "multiframe length/step too small");
  if (signal.samples.size() < len) {
    throw Error(Errc::insufficient_data, "signal shorter than one analysis frame");
  }

  std::vector<double> sum(config.n_cep, 0.0);
  std::size_t used = 0;
  const std::span<const double> all(signal.samples);
  for (std::size_t off = 0; off + len <= signal.samples.size(); off += step) {
    const std::span<const double> raw = all.subspan(off, len);
    if (std::all_of(raw.begin(), raw.end(), [](double v) { return v == 0.0; })) continue;
    const std::vector<double> windowed = emphasize_and_window(raw, config.preemph);
    const std::vector<double> c = mfcc_from_windowed(windowed, signal.sample_rate, config);
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += c[i];
    ++used;
  }
  if (used == 0) throw Error(Errc::silent_frame, "silent frame");
  for (double& v : sum) v /= static_cast<double>(used);
  return MfccVector{std::move(sum), std::nullopt};
}

}  // namespace vowelkit
